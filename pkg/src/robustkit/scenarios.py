"""Representative-scenario constructors and their approximation guarantees.

Three ways to compress a scenario set into a single cost vector:

* midpoint: the component-wise average. Solving it is an N-approximation.
* element-wise worst case: the component-wise maximum. An N-approximation
  and also a |X|-approximation, where |X| is the largest solution size.
* LP-constructed: maximize t subject to t * sum_S c^i <= sum_S c for every
  scenario i and every item subset S of fixed size k, over scenarios c in
  the convex hull of the set. Solving the resulting scenario gives a
  1/t*-approximation, never worse than N.

The same constraint family with c held fixed gives a sharpened guarantee
for any hull scenario (in particular the midpoint), computed here by
bisection on t with a k-smallest separation check instead of enumerating
all C(n, k) subsets.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional, Tuple

import numpy as np

from .core import EPS_CMP, EPS_CUT, ConvexWeights, Scenario, UncertaintySet
from .lp import EQ, LE, LinearProgram, LpError, solve_lp, solve_lp_with_rows
from .problems import ProblemSpec, max_solution_cardinality_bound, validate_k

# Above this many explicit constraint rows the dense tableau gets slow and
# memory-hungry, so construction switches to row generation.
EAGER_MAX_ROWS = 500

SUPPORTED_K = (1, 2, 3)


def midpoint_scenario(u: UncertaintySet) -> Scenario:
    """Component-wise average of all scenarios."""
    return Scenario(u.costs.mean(axis=0), provenance="midpoint")


def worstcase_scenario(u: UncertaintySet) -> Scenario:
    """Component-wise maximum over all scenarios."""
    return Scenario(u.costs.max(axis=0), provenance="worstcase")


def worstcase_apriori_bound(u: UncertaintySet, spec: ProblemSpec) -> int:
    """Guarantee for the element-wise worst-case solution: min(N, |X|)."""
    return min(u.n_scenarios, max_solution_cardinality_bound(spec))


def _k_smallest(vals: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k smallest entries, ties broken by ascending index."""
    return np.lexsort((np.arange(vals.shape[0]), vals))[:k]


def _most_violated(costs: np.ndarray, values: np.ndarray, t: float, k: int):
    """Max of t*sum_S c^i - sum_S c over scenarios i and |S| = k subsets.

    For each scenario the maximizing S collects the k smallest values of
    (c_j - t * c^i_j). Ties resolve to the smallest scenario index, then
    the lexicographically smallest subset. Returns (violation, i, S).
    """
    best = (-math.inf, -1, ())
    for i in range(costs.shape[0]):
        vals = values - t * costs[i]
        idx = _k_smallest(vals, k)
        violation = -float(vals[idx].sum())
        if violation > best[0]:
            best = (violation, i, tuple(sorted(int(j) for j in idx)))
    return best


def separation_oracle(
    u: UncertaintySet, c, t: float, k: int
) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Most violated subset constraint t*sum_S c^i <= sum_S c, if any.

    Returns (scenario index, subset) when the worst violation exceeds
    EPS_CUT, else None. None is equivalent to an exhaustive check of all
    N * C(n, k) constraints finding no violation beyond EPS_CUT.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    values = c.values if isinstance(c, Scenario) else np.asarray(c, dtype=float)
    violation, i, subset = _most_violated(u.costs, values, t, k)
    if violation > EPS_CUT:
        return i, subset
    return None


def scenario_lp(u: UncertaintySet, k: int, eager: bool) -> LinearProgram:
    """The guarantee LP over variables [t, lam_1..lam_N], maximizing t.

    The hull scenario c = sum_i lam_i c^i is substituted away, leaving
    t * a(i, S) <= sum_m lam_m a(m, S) with a(m, S) the subset sums. With
    eager=True all N * C(n, k) rows are materialized; otherwise only the
    simplex row, and the subset rows are expected from a separation
    callback. t is capped at 1, which is tight whenever any subset of any
    scenario has positive cost and pins the degenerate all-zero case.
    """
    n_scen, n_items = u.costs.shape
    objective = np.zeros(1 + n_scen)
    objective[0] = 1.0
    lower = np.zeros(1 + n_scen)
    upper = np.full(1 + n_scen, np.inf)
    upper[0] = 1.0
    lp = LinearProgram(objective=objective, sense="max", lower=lower, upper=upper)
    simplex_row = np.zeros(1 + n_scen)
    simplex_row[1:] = 1.0
    lp.add_constraint(simplex_row, EQ, 1.0)
    if eager:
        for subset in itertools.combinations(range(n_items), k):
            sums = u.costs[:, subset].sum(axis=1)
            for i in range(n_scen):
                row = np.zeros(1 + n_scen)
                row[0] = sums[i]
                row[1:] = -sums
                lp.add_constraint(row, LE, 0.0)
    return lp


def _subset_row(u: UncertaintySet, i: int, subset) -> np.ndarray:
    sums = u.costs[:, list(subset)].sum(axis=1)
    row = np.zeros(1 + u.n_scenarios)
    row[0] = sums[i]
    row[1:] = -sums
    return row


def construct_lp_scenario(
    u: UncertaintySet, spec: ProblemSpec, k: int, mode: str = "auto"
) -> Tuple[float, Scenario, ConvexWeights]:
    """Solve the guarantee LP and return (t_star, scenario, hull weights).

    The returned solution's nominal optimizer is a 1/t_star-approximation
    for the min-max problem; 1/t_star <= N always. mode forces the eager
    or lazy constraint handling ("eager"/"lazy"), defaulting to eager for
    at most EAGER_MAX_ROWS rows.
    """
    if k not in SUPPORTED_K:
        raise ValueError(f"k must be one of {SUPPORTED_K}, got {k}")
    if not validate_k(spec, k):
        raise ValueError(f"k={k} exceeds the minimum solution cardinality of the problem")
    if mode not in ("auto", "eager", "lazy"):
        raise ValueError(f"unknown mode {mode!r}")
    n_scen, n_items = u.costs.shape
    n_rows = n_scen * math.comb(n_items, k)
    eager = mode == "eager" or (mode == "auto" and n_rows <= EAGER_MAX_ROWS)

    lp = scenario_lp(u, k, eager=eager)
    if eager:
        sol = solve_lp(lp)
    else:

        def row_source(x):
            violation, i, subset = _most_violated(u.costs, np.maximum(x[1:] @ u.costs, 0.0), x[0], k)
            if violation > EPS_CUT:
                return _subset_row(u, i, subset), LE, 0.0
            return None

        sol = solve_lp_with_rows(lp, row_source)
    if sol.status != "optimal":
        raise LpError(f"scenario construction LP reported {sol.status}")

    t_star = float(sol.x[0])
    if t_star <= 0.0:
        raise LpError(f"scenario construction LP returned t*={t_star} <= 0")
    lam = ConvexWeights(sol.x[1:])
    scenario = Scenario(lam.combine(u), provenance="lp", k=k)

    # never return a silently invalid guarantee
    violation, _, _ = _most_violated(u.costs, scenario.values, t_star, k)
    if violation > EPS_CMP:
        raise LpError(f"constructed scenario violates its own constraints by {violation}")
    if 1.0 / t_star > n_scen + EPS_CMP:
        raise LpError(f"guarantee 1/t*={1.0 / t_star} exceeds the scenario count {n_scen}")
    return t_star, scenario, lam


def fixed_scenario_guarantee(u: UncertaintySet, c, k: int) -> float:
    """Sharpened guarantee 1/t for a fixed scenario, keeping only t variable.

    t is the largest value satisfying t * sum_S c^i <= sum_S c for all
    scenarios i and |S| = k, i.e. the smallest subset-sum ratio. Found by
    bisection on [0, 1] with the k-smallest separation check (the cap at
    1 is exact whenever c dominates no scenario strictly), then snapped to
    the exact critical ratio. Returns +inf when some scenario has positive
    cost on a subset where c has none. The scenario must lie in the convex
    hull of u for the guarantee to be meaningful; that is the caller's
    responsibility (it holds for midpoint and LP scenarios).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    values = c.values if isinstance(c, Scenario) else np.asarray(c, dtype=float)
    if values.shape[0] < k:
        raise ValueError(f"k={k} exceeds the item count {values.shape[0]}")
    costs = u.costs
    tol = 1e-12 * max(1.0, float(values.max(initial=0.0)) * k)

    def feasible(t):
        violation, _, _ = _most_violated(costs, values, t, k)
        return violation <= tol

    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    # snap to the exact breakpoint: the critical constraint's subset-sum
    # ratio lies in [lo, hi] and is optimal iff feasible
    for _ in range(64):
        _, i, subset = _most_violated(costs, values, hi, k)
        den = float(costs[i, list(subset)].sum())
        if den <= 0.0:
            break
        ratio = float(values[list(subset)].sum()) / den
        if ratio <= 0.0:
            return math.inf
        if feasible(ratio):
            return 1.0 / ratio
        hi = ratio
    if lo <= 0.0:
        return math.inf
    return 1.0 / lo
