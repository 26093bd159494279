"""robustkit: representative scenarios for min-max robust combinatorial optimization.

Compress a discrete uncertainty set into a single cost vector (midpoint,
element-wise worst case, or LP-constructed), solve the nominal problem for
it, and certify how far the result can be from the robust optimum, both
before (a-priori) and after (a-posteriori) the nominal solve.
"""

from .core import (
    EPS_CMP,
    EPS_CUT,
    EPS_FEAS,
    BinarySolution,
    BoundReport,
    ConvexWeights,
    InstanceFormatError,
    Scenario,
    UncertaintySet,
    parse_instance,
    ratio_or_inf,
    serialize_instance,
)
from .problems import (
    ProblemSpec,
    Selection,
    ShortestPath,
    dimension,
    enumerate_solutions,
    is_feasible,
    max_solution_cardinality_bound,
    min_solution_cardinality,
    nominal_solve,
    validate_k,
)
from .lp import EQ, LE, LinearProgram, LpError, LpSolution, solve_lp, solve_lp_with_rows
from .scenarios import (
    construct_lp_scenario,
    fixed_scenario_guarantee,
    midpoint_scenario,
    separation_oracle,
    worstcase_apriori_bound,
    worstcase_scenario,
)
from .bounds import (
    BudgetError,
    aposteriori_report,
    exact_minmax,
    lower_bound,
    maxmin_certificate,
    maxmin_lower_bound,
    upper_bound,
)
from .experiments import (
    ExperimentGrid,
    GridResult,
    SplitMix64,
    derive_seed,
    emit_csv,
    generate_instance,
    run_grid,
)

__version__ = "0.1.0"

__all__ = [
    "BinarySolution",
    "BoundReport",
    "BudgetError",
    "ConvexWeights",
    "EPS_CMP",
    "EPS_CUT",
    "EPS_FEAS",
    "EQ",
    "ExperimentGrid",
    "GridResult",
    "InstanceFormatError",
    "LE",
    "LinearProgram",
    "LpError",
    "LpSolution",
    "ProblemSpec",
    "Scenario",
    "Selection",
    "ShortestPath",
    "SplitMix64",
    "UncertaintySet",
    "aposteriori_report",
    "construct_lp_scenario",
    "derive_seed",
    "dimension",
    "emit_csv",
    "enumerate_solutions",
    "exact_minmax",
    "fixed_scenario_guarantee",
    "generate_instance",
    "is_feasible",
    "lower_bound",
    "max_solution_cardinality_bound",
    "maxmin_certificate",
    "maxmin_lower_bound",
    "midpoint_scenario",
    "min_solution_cardinality",
    "nominal_solve",
    "parse_instance",
    "ratio_or_inf",
    "run_grid",
    "separation_oracle",
    "serialize_instance",
    "solve_lp",
    "solve_lp_with_rows",
    "upper_bound",
    "validate_k",
    "worstcase_apriori_bound",
    "worstcase_scenario",
]
