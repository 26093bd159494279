"""Self-contained dense-tableau simplex solver.

Two-phase method (no Big-M: large constants interact badly with cost
magnitudes) with Bland's anti-cycling pivot rule, which also makes every
solve deterministic: identical input yields the identical pivot sequence.
Built for the desk-scale programs produced by scenario construction and
the max-min bound; there is deliberately no sparse algebra, warm
starting, or integer support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .core import EPS_CUT, EPS_FEAS

LE = "<="
EQ = "=="

_PIVOT_TOL = 1e-9


class LpError(RuntimeError):
    """Numerical failure inside the solver; never a silent wrong answer."""


@dataclass
class LinearProgram:
    """max (or min) objective . x subject to rows of <= / == constraints.

    Default variable bounds are [0, +inf); lower bounds may be any finite
    value or -inf, upper bounds any finite value or +inf.
    """

    objective: np.ndarray
    sense: str = "max"
    constraints: List[Tuple[np.ndarray, str, float]] = field(default_factory=list)
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        if self.objective.ndim != 1 or self.objective.size < 1:
            raise ValueError("objective must be a nonempty vector")
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        n = self.n_vars
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bound vectors must match the variable count")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)) or np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise ValueError("bounds must be finite, -inf (lower) or +inf (upper)")
        normalized = []
        for coeffs, rel, rhs in self.constraints:
            normalized.append(self._check_row(coeffs, rel, rhs))
        self.constraints = normalized

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]

    def _check_row(self, coeffs, rel, rhs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_vars,):
            raise ValueError(f"constraint has {coeffs.shape} coefficients, expected ({self.n_vars},)")
        if rel not in (LE, EQ):
            raise ValueError(f"relation must be {LE!r} or {EQ!r}, got {rel!r}")
        rhs = float(rhs)
        if not math.isfinite(rhs):
            raise ValueError("rhs must be finite")
        return coeffs, rel, rhs

    def add_constraint(self, coeffs, rel: str, rhs: float) -> None:
        self.constraints.append(self._check_row(coeffs, rel, rhs))

    def copy(self) -> "LinearProgram":
        return LinearProgram(
            objective=self.objective.copy(),
            sense=self.sense,
            constraints=[(a.copy(), rel, rhs) for a, rel, rhs in self.constraints],
            lower=self.lower.copy(),
            upper=self.upper.copy(),
        )


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    iterations: int = 0


def _pivot(T: np.ndarray, basis: List[int], row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: List[int], max_iter: int) -> Tuple[str, int]:
    """Pivot the tableau to optimality (max sense, z-c objective row)."""
    m = len(basis)
    iterations = 0
    while True:
        obj = T[-1, :-1]
        improving = np.nonzero(obj < -_PIVOT_TOL)[0]
        if improving.size == 0:
            # optimality certificate: no nonbasic variable has an improving
            # reduced cost beyond tolerance
            assert bool(np.all(T[-1, :-1] >= -1e-9)), "reduced costs violate optimality"
            return "optimal", iterations
        col = int(improving[0])  # Bland: smallest improving index
        colvals = T[:m, col]
        positive = colvals > _PIVOT_TOL
        if not positive.any():
            return "unbounded", iterations
        ratios = np.full(m, np.inf)
        ratios[positive] = T[:m, -1][positive] / colvals[positive]
        best = ratios.min()
        ties = np.nonzero(ratios == best)[0]
        row = int(min(ties, key=lambda r: basis[r]))  # Bland: smallest basic index leaves
        _pivot(T, basis, row, col)
        iterations += 1
        if iterations > max_iter:
            raise LpError(f"simplex exceeded {max_iter} pivots")


def _standardize(lp: LinearProgram):
    """Rewrite as max c.y, A y rel b, y >= 0.

    Returns (c, rows, pieces, offsets, feasible) where pieces[j] lists
    (column, sign) pairs recovering x_j = offsets[j] + sum sign * y_col.
    """
    pieces = []
    offsets = []
    extra_rows = []  # upper-bound rows in y space
    cols = 0
    for j in range(lp.n_vars):
        lo, up = lp.lower[j], lp.upper[j]
        if up < lo:
            return None  # trivially infeasible bounds
        if lo == -np.inf and up == np.inf:
            pieces.append([(cols, 1.0), (cols + 1, -1.0)])
            offsets.append(0.0)
            cols += 2
        elif lo == -np.inf:
            # mirror: x = up - y
            pieces.append([(cols, -1.0)])
            offsets.append(up)
            cols += 1
        else:
            pieces.append([(cols, 1.0)])
            offsets.append(lo)
            if up != np.inf:
                extra_rows.append((cols, up - lo))
            cols += 1

    def to_std(coeffs):
        row = np.zeros(cols)
        shift = 0.0
        for j, a in enumerate(coeffs):
            if a == 0.0:
                continue
            for col, sign in pieces[j]:
                row[col] += a * sign
            shift += a * offsets[j]
        return row, shift

    rows = []
    for coeffs, rel, rhs in lp.constraints:
        row, shift = to_std(coeffs)
        rows.append((row, rel, rhs - shift))
    for col, ub in extra_rows:
        row = np.zeros(cols)
        row[col] = 1.0
        rows.append((row, LE, ub))

    c = np.zeros(cols)
    for j, a in enumerate(lp.objective):
        if a == 0.0:
            continue
        for col, sign in pieces[j]:
            c[col] += a * sign
    if lp.sense == "min":
        c = -c
    return c, rows, pieces, offsets


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Two-phase dense simplex; deterministic; raises LpError on numerical failure."""
    std = _standardize(lp)
    if std is None:
        return LpSolution(status="infeasible")
    c, rows, pieces, offsets = std
    n_std = c.shape[0]
    m = len(rows)

    if m == 0:
        if np.any(c > _PIVOT_TOL):
            return LpSolution(status="unbounded")
        y = np.zeros(n_std)
        return _finish(lp, pieces, offsets, y, 0)

    # normalize rhs >= 0; classify rows
    A = np.zeros((m, n_std))
    b = np.zeros(m)
    kinds = []  # 'le' (slack basic), 'ge' (surplus + artificial), 'eq' (artificial)
    for i, (row, rel, rhs) in enumerate(rows):
        if rhs < 0:
            row, rhs = -row, -rhs
            rel = {LE: "ge", EQ: "eq"}[rel]
        else:
            rel = {LE: "le", EQ: "eq"}[rel]
        A[i] = row
        b[i] = rhs
        kinds.append(rel)

    n_le = sum(1 for k in kinds if k == "le")
    n_ge = sum(1 for k in kinds if k == "ge")
    n_art = sum(1 for k in kinds if k in ("ge", "eq"))
    total = n_std + n_le + n_ge + n_art

    T = np.zeros((m + 1, total + 1))
    T[:m, :n_std] = A
    T[:m, -1] = b
    basis = [0] * m
    slack_at = n_std
    art_at = n_std + n_le + n_ge
    for i, kind in enumerate(kinds):
        if kind == "le":
            T[i, slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        elif kind == "ge":
            T[i, slack_at] = -1.0
            slack_at += 1
            T[i, art_at] = 1.0
            basis[i] = art_at
            art_at += 1
        else:
            T[i, art_at] = 1.0
            basis[i] = art_at
            art_at += 1

    max_iter = 10_000 + 200 * (m + total)
    iterations = 0

    art_start = n_std + n_le + n_ge
    if n_art:
        # Phase 1: maximize -sum(artificials); z-c row has +1 on artificials
        T[-1, :] = 0.0
        T[-1, art_start:total] = 1.0
        for i in range(m):
            if basis[i] >= art_start:
                T[-1] -= T[i]
        status, its = _run_simplex(T, basis, max_iter)
        iterations += its
        assert status == "optimal"  # phase 1 objective is bounded by 0
        scale = max(1.0, float(np.abs(b).max()))
        if T[-1, -1] < -EPS_CUT * scale:
            return LpSolution(status="infeasible", iterations=iterations)
        # drive remaining artificials out of the basis, dropping redundant rows
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= art_start:
                candidates = np.nonzero(np.abs(T[i, :art_start]) > _PIVOT_TOL)[0]
                if candidates.size:
                    _pivot(T, basis, i, int(candidates[0]))
                else:
                    keep[i] = False
        if not keep.all():
            T = np.vstack([T[:m][keep], T[-1:]])
            basis = [bv for i, bv in enumerate(basis) if keep[i]]
            m = len(basis)
        T = np.delete(T, np.s_[art_start:total], axis=1)
        total = art_start

    # Phase 2 objective row
    c_full = np.zeros(total + 1)
    c_full[:n_std] = c
    T[-1, :] = -c_full
    for i in range(m):
        coef = T[-1, basis[i]]
        if coef != 0.0:
            T[-1] -= coef * T[i]
    status, its = _run_simplex(T, basis, max_iter)
    iterations += its
    if status == "unbounded":
        return LpSolution(status="unbounded", iterations=iterations)

    y = np.zeros(total)
    for i in range(m):
        y[basis[i]] = T[i, -1]
    y = np.maximum(y[:n_std], 0.0)
    return _finish(lp, pieces, offsets, y, iterations)


def _finish(lp: LinearProgram, pieces, offsets, y: np.ndarray, iterations: int) -> LpSolution:
    x = np.array(offsets, dtype=float)
    for j, plist in enumerate(pieces):
        for col, sign in plist:
            x[j] += sign * y[col]
    _check_feasible(lp, x)
    objective = float(lp.objective @ x)
    return LpSolution(status="optimal", x=x, objective=objective, iterations=iterations)


def _check_feasible(lp: LinearProgram, x: np.ndarray) -> None:
    """Surface accumulated round-off as an error instead of a wrong answer."""
    xmag = float(np.abs(x).max()) if x.size else 0.0
    for j in range(lp.n_vars):
        tol = EPS_FEAS * max(1.0, abs(lp.lower[j]) if lp.lower[j] != -np.inf else 1.0, xmag)
        if lp.lower[j] != -np.inf and x[j] < lp.lower[j] - tol:
            raise LpError(f"variable {j} violates its lower bound: {x[j]} < {lp.lower[j]}")
        if lp.upper[j] != np.inf and x[j] > lp.upper[j] + tol:
            raise LpError(f"variable {j} violates its upper bound: {x[j]} > {lp.upper[j]}")
    for idx, (coeffs, rel, rhs) in enumerate(lp.constraints):
        lhs = float(coeffs @ x)
        scale = max(1.0, abs(rhs), float(np.abs(coeffs).max()) * max(1.0, xmag))
        if rel == LE:
            if lhs > rhs + EPS_FEAS * scale:
                raise LpError(f"constraint {idx} violated: {lhs} > {rhs}")
        else:
            if abs(lhs - rhs) > EPS_FEAS * scale:
                raise LpError(f"constraint {idx} violated: {lhs} != {rhs}")


RowSource = Callable[[np.ndarray], Optional[Tuple[np.ndarray, str, float]]]


def solve_lp_with_rows(lp: LinearProgram, row_source: RowSource, max_rounds: int = 100_000) -> LpSolution:
    """Row generation: re-solve while row_source reports violated constraints.

    row_source is called with the current primal values and must return a
    constraint violated by more than EPS_CUT, or None when all implicit
    rows hold. Equivalent to solve_lp over the full implicit constraint
    set; terminates because that set is finite.
    """
    work = lp.copy()
    iterations = 0
    for _ in range(max_rounds):
        sol = solve_lp(work)
        iterations += sol.iterations
        if sol.status != "optimal":
            sol.iterations = iterations
            return sol
        row = row_source(sol.x)
        if row is None:
            sol.iterations = iterations
            return sol
        coeffs, rel, rhs = row
        lhs = float(np.asarray(coeffs, dtype=float) @ sol.x)
        violated = lhs > rhs if rel == LE else abs(lhs - rhs) > 0
        if not violated:
            raise LpError("row_source returned a constraint the current point satisfies")
        work.add_constraint(coeffs, rel, rhs)
    raise LpError(f"row generation did not terminate within {max_rounds} rounds")
