"""Reproducible experiment harness: instance generation, grid runs, CSV.

Instances draw integer item costs uniformly i.i.d. from {0, ..., 100}.
The generator is SplitMix64, a named counter-based 64-bit generator whose
whole stream is pinned down by a handful of multiply-xor-shift constants,
so a reimplementation in any language can match it bit for bit. Integers
in range come from masked rejection sampling (never modulo): draw the low
bits of the next output and reject values above the range. Per-instance
seeds are derived from (master_seed, n, p, N, instance_id), which makes
every instance independent of worker scheduling.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .core import EPS_CMP, ConvexWeights, Scenario, UncertaintySet, ratio_or_inf, serialize_instance
from .problems import Selection, nominal_solve
from .scenarios import construct_lp_scenario, fixed_scenario_guarantee, midpoint_scenario
from .bounds import BudgetError, exact_minmax, lower_bound, maxmin_certificate, upper_bound

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
COST_MAX = 100  # item costs are drawn from {0, ..., COST_MAX}


def _mix64(z: int) -> int:
    """SplitMix64 finalizer (Steele, Lea & Flood's constants)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based PRNG: state advances by the golden gamma, output is mixed."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def randint_upto(self, bound: int) -> int:
        """Uniform integer in {0, ..., bound} by masked rejection sampling."""
        if bound < 0:
            raise ValueError("bound must be >= 0")
        mask = (1 << bound.bit_length()) - 1
        while True:
            r = self.next_u64() & mask
            if r <= bound:
                return r


def derive_seed(master_seed: int, *fields: int) -> int:
    """Stable 64-bit seed from a master seed and integer coordinates.

    seed = mix64(master), then for each field f in order:
    seed = mix64(seed XOR ((f + 1) * golden-gamma mod 2^64)).
    """
    seed = _mix64(master_seed)
    for f in fields:
        seed = _mix64(seed ^ (((int(f) + 1) * _GOLDEN) & _MASK64))
    return seed


def generate_instance(n: int, p: int, N: int, seed: int) -> Tuple[UncertaintySet, Selection]:
    """Seeded random selection instance: N scenarios of n costs in {0..100}.

    Costs are drawn row-major (scenario by scenario, item by item), so
    identical (parameters, seed) give the identical instance everywhere.
    """
    spec = Selection(n=n, p=p)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    rng = SplitMix64(seed)
    costs = np.empty((N, n))
    for i in range(N):
        for j in range(n):
            costs[i, j] = rng.randint_upto(COST_MAX)
    return UncertaintySet(costs), spec


# ---------------------------------------------------------------------------
# Experiment grid
# ---------------------------------------------------------------------------

METHOD_FAMILIES = ("mid", "lp", "mm", "opt")

MetricKey = Tuple[str, str, Optional[int]]  # (metric, method, k)


@dataclass
class ExperimentGrid:
    """Which cells to run, how many instances per cell, and what to compute."""

    cells: List[Tuple[int, int, int]]  # (n, p, N)
    instance_count: int = 1000
    master_seed: int = 0
    ks: Tuple[int, ...] = (1, 2, 3)
    methods: Tuple[str, ...] = METHOD_FAMILIES
    exact_budget: int = 2_000_000  # skip exact optima above this many subsets

    def __post_init__(self):
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")
        if not self.cells:
            self.cells = []
        for n, p, N in self.cells:
            Selection(n=n, p=p)  # validates 1 <= p <= n
            if N < 1:
                raise ValueError(f"cell ({n},{p},{N}): N must be >= 1")
        if any(k < 1 for k in self.ks):
            raise ValueError("subset sizes must be >= 1")
        unknown = set(self.methods) - set(METHOD_FAMILIES)
        if unknown:
            raise ValueError(f"unknown method families: {sorted(unknown)}")


@dataclass
class AggregateRow:
    n: int
    p: int
    N: int
    metric: str
    method: str
    k: Optional[int]
    value: float
    stderr: float
    instances: int
    runtime_ms: float


@dataclass
class GridResult:
    rows: List[AggregateRow] = field(default_factory=list)
    failures: Dict[Tuple[int, int, int], int] = field(default_factory=dict)

    def value(self, n, p, N, metric, method, k=None) -> float:
        for row in self.rows:
            if (row.n, row.p, row.N, row.metric, row.method, row.k) == (n, p, N, metric, method, k):
                return row.value
        raise KeyError(f"no aggregate for {(n, p, N, metric, method, k)}")


def _metric_order(ks: Tuple[int, ...]) -> List[MetricKey]:
    order: List[MetricKey] = []
    order += [("apriori", "mid", k) for k in ks]
    order += [("apriori", "lp", k) for k in ks]
    order += [("aposteriori", "mid", None)]
    order += [("aposteriori", "lp", k) for k in ks]
    order += [("aposteriori", "mm", None)]
    order += [("ub", "mid", None)]
    order += [("ub", "lp", k) for k in ks]
    order += [("ub", "mm", None)]
    order += [("lb", "mid", None)]
    order += [("lb", "lp", k) for k in ks]
    order += [("lb", "mm", None)]
    order += [("opt", "exact", None)]
    return order


def _instance_metrics(task) -> Tuple[int, int, Optional[str], Dict[MetricKey, float], Dict[str, float]]:
    """Compute every requested metric for one instance.

    Returns (cell_index, instance_id, error, values, timings); on failure
    the error message is set and the value dict is empty.
    """
    cell_index, instance_id, n, p, N, seed, ks, methods, exact_budget, dump_dir = task
    timings: Dict[str, float] = {}
    try:
        u, spec = generate_instance(n, p, N, seed)
        if dump_dir is not None:
            path = os.path.join(dump_dir, f"inst_n{n}_p{p}_N{N}_{instance_id:04d}.txt")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(serialize_instance(u, spec))

        ks_valid = tuple(k for k in ks if k <= p)
        out: Dict[MetricKey, float] = {}

        mid = midpoint_scenario(u)
        lam_mid = ConvexWeights.uniform(N)
        mm_val = None
        opt_val = None

        if "mid" in methods:
            start = time.perf_counter()
            for k in ks_valid:
                out[("apriori", "mid", k)] = fixed_scenario_guarantee(u, mid, k)
            x = nominal_solve(spec, mid)
            ub = upper_bound(u, x)
            lb = lower_bound(u, mid, lam_mid, x)
            out[("ub", "mid", None)] = ub
            out[("lb", "mid", None)] = lb
            out[("aposteriori", "mid", None)] = ratio_or_inf(ub, lb)
            timings["mid"] = time.perf_counter() - start

        if "lp" in methods:
            start = time.perf_counter()
            for k in ks_valid:
                t_star, scen, lam = construct_lp_scenario(u, spec, k)
                out[("apriori", "lp", k)] = 1.0 / t_star
                x = nominal_solve(spec, scen)
                ub = upper_bound(u, x)
                lb = lower_bound(u, scen, lam, x)
                out[("ub", "lp", k)] = ub
                out[("lb", "lp", k)] = lb
                out[("aposteriori", "lp", k)] = ratio_or_inf(ub, lb)
            timings["lp"] = time.perf_counter() - start

        if "mm" in methods:
            start = time.perf_counter()
            mm_val, lam_mm = maxmin_certificate(u, spec)
            c_mm = Scenario(lam_mm.combine(u), provenance="custom")
            x = nominal_solve(spec, c_mm)
            out[("ub", "mm", None)] = upper_bound(u, x)
            out[("lb", "mm", None)] = mm_val
            out[("aposteriori", "mm", None)] = ratio_or_inf(out[("ub", "mm", None)], mm_val)
            timings["mm"] = time.perf_counter() - start

        if "opt" in methods and math.comb(n, p) <= exact_budget:
            start = time.perf_counter()
            opt_val, _ = exact_minmax(u, spec)
            out[("opt", "exact", None)] = opt_val
            timings["opt"] = time.perf_counter() - start

        _spot_check(out, ks_valid, N, mm_val, opt_val)
        return cell_index, instance_id, None, out, timings
    except Exception as exc:  # recorded and excluded, never aborts the grid
        return cell_index, instance_id, f"{type(exc).__name__}: {exc}", {}, timings


def _spot_check(out, ks_valid, N, mm_val, opt_val):
    """Ordering invariants; cheap enough to keep on for every instance."""
    tol = EPS_CMP
    for family in ("mid", "lp"):
        lb = out.get(("lb", family, None))
        ub = out.get(("ub", family, None))
        if lb is not None and ub is not None:
            assert lb <= ub + tol
        if lb is not None and mm_val is not None:
            assert lb <= mm_val + tol
    prev = None
    for k in ks_valid:
        pre_lp = out.get(("apriori", "lp", k))
        pre_mid = out.get(("apriori", "mid", k))
        if pre_lp is not None and pre_mid is not None:
            assert pre_lp <= pre_mid + tol and pre_lp <= N + tol
        if pre_lp is not None and prev is not None:
            assert pre_lp <= prev + tol
        prev = pre_lp
        lbk = out.get(("lb", "lp", k))
        if lbk is not None and mm_val is not None:
            assert lbk <= mm_val + tol
    if opt_val is not None:
        scale = tol * max(1.0, opt_val)
        if mm_val is not None:
            assert mm_val <= opt_val + scale
        for family, k in [("mid", None)] + [("lp", k) for k in ks_valid]:
            ub = out.get(("ub", family, k))
            lb = out.get(("lb", family, k))
            if ub is not None:
                assert ub >= opt_val - scale
            if lb is not None:
                assert lb <= opt_val + scale


def run_grid(
    grid: ExperimentGrid,
    workers: int = 1,
    dump_dir: Optional[str] = None,
    progress: Optional[Callable[[str], None]] = None,
) -> GridResult:
    """Run every cell of the grid and aggregate per-metric means.

    Instances are independent tasks; results are keyed by instance id and
    aggregated in id order, so the output is identical for any worker
    count. Failed instances are excluded and counted per cell.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if dump_dir is not None:
        os.makedirs(dump_dir, exist_ok=True)

    tasks = []
    for cell_index, (n, p, N) in enumerate(grid.cells):
        for instance_id in range(grid.instance_count):
            seed = derive_seed(grid.master_seed, n, p, N, instance_id)
            tasks.append(
                (cell_index, instance_id, n, p, N, seed, tuple(grid.ks), tuple(grid.methods), grid.exact_budget, dump_dir)
            )

    if workers == 1:
        outcomes = []
        for i, task in enumerate(tasks):
            outcomes.append(_instance_metrics(task))
            if progress and (i + 1) % 100 == 0:
                progress(f"{i + 1}/{len(tasks)} instances")
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = []
            for i, outcome in enumerate(pool.map(_instance_metrics, tasks, chunksize=16)):
                outcomes.append(outcome)
                if progress and (i + 1) % 100 == 0:
                    progress(f"{i + 1}/{len(tasks)} instances")

    outcomes.sort(key=lambda item: (item[0], item[1]))

    result = GridResult()
    for cell_index, (n, p, N) in enumerate(grid.cells):
        cell_outcomes = [o for o in outcomes if o[0] == cell_index]
        failures = sum(1 for o in cell_outcomes if o[2] is not None)
        if failures:
            result.failures[(n, p, N)] = failures
        good = [o for o in cell_outcomes if o[2] is None]
        family_time: Dict[str, float] = {}
        for o in good:
            for fam, secs in o[4].items():
                family_time[fam] = family_time.get(fam, 0.0) + secs
        ks_valid = tuple(k for k in grid.ks if k <= p)
        for metric, method, k in _metric_order(ks_valid):
            family = "opt" if method == "exact" else method
            values = [o[3][(metric, method, k)] for o in good if (metric, method, k) in o[3]]
            if not values:
                continue
            arr = np.array(values)
            mean = float(arr.mean())
            stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
            # family runtime is shared across that family's rows in the cell
            n_family_rows = sum(1 for m, meth, _ in _metric_order(ks_valid) if (("opt" if meth == "exact" else meth) == family))
            runtime_ms = 1000.0 * family_time.get(family, 0.0) / max(1, n_family_rows)
            result.rows.append(
                AggregateRow(n=n, p=p, N=N, metric=metric, method=method, k=k, value=mean, stderr=stderr, instances=len(values), runtime_ms=runtime_ms)
            )
    return result


CSV_HEADER = "n,p,N,metric,method,k,value,stderr,instances,runtime_ms"


def _fmt6(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return format(v, ".6g")


def emit_csv(result: GridResult, include_runtime: bool = False) -> str:
    """Render aggregates as CSV, one row per (cell, metric, method, k).

    Rows follow grid order, then a fixed metric/method order. Values carry
    6 significant digits. Runtimes are wall-clock and therefore not
    reproducible run to run; the column is left empty unless explicitly
    requested, keeping default output byte-identical for a fixed grid and
    seed regardless of worker count.
    """
    lines = [CSV_HEADER]
    for row in result.rows:
        runtime = format(row.runtime_ms, ".3f") if include_runtime else ""
        lines.append(
            ",".join(
                [
                    str(row.n),
                    str(row.p),
                    str(row.N),
                    row.metric,
                    row.method,
                    "" if row.k is None else str(row.k),
                    _fmt6(row.value),
                    _fmt6(row.stderr),
                    str(row.instances),
                    runtime,
                ]
            )
        )
    return "\n".join(lines) + "\n"
