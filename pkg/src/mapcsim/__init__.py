"""Multi-AP downlink coordination: models, solvers, and sweep harness.

The package evaluates joint RU assignment, transmit power and AP grouping
decisions for a downlink multi-AP WiFi network under a log-distance
propagation model, and ships three solvers (exhaustive, greedy, and a
non-coordinated reference) plus seeded experiment sweeps.
"""

from .baseline import BaselineConfig, CapMode, non_coordinated_allocate
from .core import (
    UNASSIGNED,
    Allocation,
    ConstraintId,
    EvaluationResult,
    FeasibilityReport,
    GainMatrix,
    NetworkParams,
    Scenario,
    UndefinedGainError,
    Violation,
    check_feasibility,
    compute_sinr,
    evaluate,
    throughput_gain,
)
from .exact import (
    ExactConfig,
    SizeLimitError,
    SolveReport,
    enumerate_assignments,
    enumerate_groupings,
    solve_exact,
    solve_exact_report,
)
from .experiments import (
    DEFAULT_VARIANTS,
    Solver,
    SweepKind,
    SweepRow,
    SweepSpec,
    emit_csv,
    emit_plot_svg,
    run_sweep,
    sweep_output_paths,
)
from .heuristic import (
    CapacityMetric,
    HeuristicConfig,
    TargetSizePolicy,
    best_combo,
    candidate_sets,
    run_heuristic,
    sort_stas_by_gain,
)
from .propagation import (
    PlacementConfig,
    build_gain_matrix,
    channel_gain,
    export_positions_csv,
    generate_scenario,
    path_loss_db,
    place_aps,
    rescale_ap_distance,
)
from .serialize import (
    allocation_from_dict,
    allocation_to_dict,
    evaluation_to_dict,
    feasibility_to_dict,
    load_allocation,
    load_scenario,
    save_allocation,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    solver_report_to_dict,
)

__all__ = [
    "UNASSIGNED",
    "Allocation",
    "BaselineConfig",
    "CapMode",
    "CapacityMetric",
    "ConstraintId",
    "DEFAULT_VARIANTS",
    "EvaluationResult",
    "ExactConfig",
    "FeasibilityReport",
    "GainMatrix",
    "HeuristicConfig",
    "NetworkParams",
    "PlacementConfig",
    "Scenario",
    "SizeLimitError",
    "SolveReport",
    "Solver",
    "SweepKind",
    "SweepRow",
    "SweepSpec",
    "TargetSizePolicy",
    "UndefinedGainError",
    "Violation",
    "allocation_from_dict",
    "allocation_to_dict",
    "best_combo",
    "build_gain_matrix",
    "candidate_sets",
    "channel_gain",
    "check_feasibility",
    "compute_sinr",
    "emit_csv",
    "emit_plot_svg",
    "enumerate_assignments",
    "enumerate_groupings",
    "evaluate",
    "evaluation_to_dict",
    "export_positions_csv",
    "feasibility_to_dict",
    "generate_scenario",
    "load_allocation",
    "load_scenario",
    "non_coordinated_allocate",
    "path_loss_db",
    "place_aps",
    "rescale_ap_distance",
    "run_heuristic",
    "run_sweep",
    "save_allocation",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "solve_exact",
    "solve_exact_report",
    "solver_report_to_dict",
    "sort_stas_by_gain",
    "sweep_output_paths",
    "throughput_gain",
]

__version__ = "0.1.0"
