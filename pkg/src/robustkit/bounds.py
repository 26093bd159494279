"""Bound evaluation and certification.

Upper bounds come from evaluating a solution against every scenario; lower
bounds from the nominal value of a scenario certified inside the convex
hull of the set. The hull-wide best lower bound (max over hull scenarios
of the nominal optimum) is computed compactly by dualizing the nominal
LP, and an exhaustive enumerator provides exact optima for verification
at desk scale.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from .core import (
    EPS_CMP,
    BinarySolution,
    BoundReport,
    ConvexWeights,
    Scenario,
    UncertaintySet,
    ratio_or_inf,
)
from .lp import EQ, LE, LinearProgram, LpError, solve_lp
from .problems import ProblemSpec, Selection, ShortestPath, enumerate_solutions, nominal_solve
from .scenarios import fixed_scenario_guarantee

# Hard cap on exhaustive enumeration (feasible solutions examined).
MAX_ENUMERATION = 20_000_000


class BudgetError(RuntimeError):
    """The instance is too large for exhaustive enumeration; refusing beats degrading."""


def upper_bound(u: UncertaintySet, x: BinarySolution) -> float:
    """Worst-case value of x over all scenarios: max_i c^i . x."""
    if not x.selected:
        return 0.0
    return float(u.costs[:, list(x.selected)].sum(axis=1).max())


def lower_bound(u: UncertaintySet, c, lam: ConvexWeights, x_c: BinarySolution) -> float:
    """Nominal value c . x(c), valid as a lower bound because c is in the hull.

    The weights must certify c = sum_i lam_i c^i within EPS_CMP; scenarios
    outside the hull (e.g. the element-wise worst case) are rejected.
    """
    values = c.values if isinstance(c, Scenario) else np.asarray(c, dtype=float)
    gap = float(np.abs(values - lam.lam @ u.costs).max())
    if gap > EPS_CMP:
        raise ValueError(
            f"scenario is not certified inside the convex hull: weights miss it by {gap}"
        )
    return x_c.cost(values)


def aposteriori_report(
    u: UncertaintySet,
    spec: ProblemSpec,
    c: Scenario,
    lam: ConvexWeights,
    k: Optional[int] = None,
    apriori: Optional[float] = None,
) -> BoundReport:
    """Solve the nominal problem for c once and certify both bound kinds.

    The a-priori ratio is taken from the LP construction when given
    (apriori=1/t*), otherwise computed by fixing c in the guarantee LP
    with subset size k (defaulting to the scenario's own k, then 1).
    """
    k_used = k if k is not None else (c.k if c.k is not None else 1)
    if apriori is None:
        apriori = fixed_scenario_guarantee(u, c, k_used)
    x = nominal_solve(spec, c)
    ub = upper_bound(u, x)
    lb = lower_bound(u, c, lam, x)
    return BoundReport(
        apriori=apriori,
        lb=lb,
        ub=ub,
        aposteriori=ratio_or_inf(ub, lb),
        scenario_provenance=c.provenance,
        k_used=k_used,
    )


def maxmin_certificate(u: UncertaintySet, spec: ProblemSpec) -> Tuple[float, ConvexWeights]:
    """Best hull lower bound max_{c in conv(U)} min_x c.x, with its weights.

    Supported for selection only, where the nominal LP relaxation is
    integral and dualizes to the compact program
        max p*mu - sum_j nu_j
        s.t. mu - nu_j <= sum_i lam_i c^i_j  for all j,
             lam on the simplex, nu >= 0, mu free.
    """
    if not isinstance(spec, Selection):
        raise ValueError("the max-min lower bound is only supported for selection problems")
    n_scen, n_items = u.costs.shape
    if spec.n != n_items:
        raise ValueError(f"spec has n={spec.n} but uncertainty set has {n_items} items")
    n_vars = n_scen + 1 + n_items  # lam, mu, nu
    objective = np.zeros(n_vars)
    objective[n_scen] = float(spec.p)
    objective[n_scen + 1 :] = -1.0
    lower = np.zeros(n_vars)
    lower[n_scen] = -np.inf
    lp = LinearProgram(objective=objective, sense="max", lower=lower)
    for j in range(n_items):
        row = np.zeros(n_vars)
        row[:n_scen] = -u.costs[:, j]
        row[n_scen] = 1.0
        row[n_scen + 1 + j] = -1.0
        lp.add_constraint(row, LE, 0.0)
    simplex_row = np.zeros(n_vars)
    simplex_row[:n_scen] = 1.0
    lp.add_constraint(simplex_row, EQ, 1.0)
    sol = solve_lp(lp)
    if sol.status != "optimal":
        raise LpError(f"max-min LP reported {sol.status}")
    return float(sol.objective), ConvexWeights(sol.x[:n_scen])


def maxmin_lower_bound(u: UncertaintySet, spec: ProblemSpec) -> float:
    """The value of maxmin_certificate; at least as good as any single-scenario LB."""
    return maxmin_certificate(u, spec)[0]


def exact_minmax(u: UncertaintySet, spec: ProblemSpec) -> Tuple[float, BinarySolution]:
    """Exact min-max optimum by exhaustive enumeration with pruning.

    Depth-first over subsets ordered by midpoint cost ascending, keeping
    per-scenario running sums; a branch is abandoned once a lower bound on
    its completions exceeds the incumbent. Value ties resolve to the
    lexicographically smallest index tuple, so results are stable across
    enumeration-order changes. Refuses instances whose feasible set
    exceeds MAX_ENUMERATION.
    """
    if isinstance(spec, Selection):
        return _exact_selection(u, spec)
    return _exact_paths(u, spec)


def _exact_selection(u: UncertaintySet, spec: Selection) -> Tuple[float, BinarySolution]:
    n, p = spec.n, spec.p
    if u.n_items != n:
        raise ValueError(f"spec has n={n} but uncertainty set has {u.n_items} items")
    total = math.comb(n, p)
    if total > MAX_ENUMERATION:
        raise BudgetError(f"C({n},{p}) = {total} subsets exceed the enumeration cap {MAX_ENUMERATION}")

    mid = u.costs.mean(axis=0)
    order = np.lexsort((np.arange(n), mid))
    costs = u.costs[:, order]
    # per-scenario minimum over the remaining (suffix) items, for bounding
    suffix_min = np.empty((u.n_scenarios, n + 1))
    suffix_min[:, n] = 0.0
    for pos in range(n - 1, -1, -1):
        suffix_min[:, pos] = np.minimum(costs[:, pos], suffix_min[:, pos + 1])

    # seed the incumbent with the midpoint solution
    x0 = nominal_solve(spec, mid)
    best_val = upper_bound(u, x0)
    best_sol = x0.selected

    def visit(pos, taken, acc, chosen):
        nonlocal best_val, best_sol
        if taken == p:
            value = float(acc.max())
            candidate = tuple(sorted(chosen))
            if value < best_val or (value == best_val and candidate < best_sol):
                best_val = value
                best_sol = candidate
            return
        if n - pos < p - taken:
            return
        # admissible completion bound; subsumes the plain running-max prune
        bound = float((acc + (p - taken) * suffix_min[:, pos]).max())
        if bound > best_val:
            return
        j = int(order[pos])
        chosen.append(j)
        visit(pos + 1, taken + 1, acc + costs[:, pos], chosen)
        chosen.pop()
        visit(pos + 1, taken, acc, chosen)

    visit(0, 0, np.zeros(u.n_scenarios), [])
    return best_val, BinarySolution(best_sol)


def _exact_paths(u: UncertaintySet, spec: ShortestPath) -> Tuple[float, BinarySolution]:
    count = 0
    for _ in enumerate_solutions(spec):
        count += 1
        if count > MAX_ENUMERATION:
            raise BudgetError(f"more than {MAX_ENUMERATION} s-t paths")
    best = None
    for x in enumerate_solutions(spec):
        value = upper_bound(u, x)
        key = (value, x.selected)
        if best is None or key < best:
            best = key
    return best[0], BinarySolution(best[1])
