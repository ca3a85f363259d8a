"""Optimal event parking assignment with a driver-search simulation.

The pipeline: project lot/entry geography to planar meters (`geo`),
describe an experiment (`scenario`), sample arrivals (`arrivals`),
solve the capacitated optimal assignment (`assign`), simulate
heterogeneous driver search (`drivers`, `sim`), and evaluate the gap
between the two (`metrics`). The `eventparking` console script exposes
the same pipeline as subcommands.
"""

from .arrivals import ArrivalSchedule, bucket_by_segment, sample_arrivals
from .assign import (
    Assignment,
    AssignmentProblem,
    InfeasibleError,
    InstanceTooLargeError,
    assignment_cost,
    brute_force_solve,
    build_problem,
    count_feasible_assignments,
    solve_exact,
    verify_assignment,
    write_assignment_csv,
)
from .drivers import (
    DriverProfile,
    SearchGroup,
    assign_profiles,
    default_exclusion_radius,
    next_target,
    sample_tolerances,
    should_abandon,
)
from .geo import (
    DistanceMatrix,
    GeoPoint,
    PlanePoint,
    build_distance_matrix,
    manhattan,
    miller_project,
)
from .metrics import (
    FailureReport,
    MethodResult,
    ReroutingReport,
    compare_methods,
    convergence_series,
    failed_search_report,
    rerouting_time,
    write_comparison_csv,
    write_convergence_csv,
    write_failures_csv,
    write_rerouting_csv,
)
from .scenario import (
    EntryLink,
    ParkingLot,
    Region,
    Scenario,
    ScenarioError,
    bundled_scenario_path,
    generate_synthetic,
    load_bundled,
    load_scenario,
    save_scenario,
    validate,
    with_strategy_mix,
)
from .sim import (
    LotState,
    ReplicationResult,
    RunResult,
    VehicleOutcome,
    replay_violations,
    replication_streams,
    run_many,
    run_once,
    run_replication,
)
from .timing import (
    LotTimingParams,
    drive_time_s,
    first_open_floor,
    search_time_s,
    walk_time_s,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalSchedule",
    "Assignment",
    "AssignmentProblem",
    "DistanceMatrix",
    "DriverProfile",
    "EntryLink",
    "FailureReport",
    "GeoPoint",
    "InfeasibleError",
    "InstanceTooLargeError",
    "LotState",
    "LotTimingParams",
    "MethodResult",
    "ParkingLot",
    "PlanePoint",
    "Region",
    "ReplicationResult",
    "ReroutingReport",
    "RunResult",
    "Scenario",
    "ScenarioError",
    "SearchGroup",
    "VehicleOutcome",
    "assign_profiles",
    "assignment_cost",
    "brute_force_solve",
    "bucket_by_segment",
    "build_distance_matrix",
    "build_problem",
    "bundled_scenario_path",
    "compare_methods",
    "convergence_series",
    "count_feasible_assignments",
    "default_exclusion_radius",
    "drive_time_s",
    "failed_search_report",
    "first_open_floor",
    "generate_synthetic",
    "load_bundled",
    "load_scenario",
    "manhattan",
    "miller_project",
    "next_target",
    "replay_violations",
    "replication_streams",
    "rerouting_time",
    "run_many",
    "run_once",
    "run_replication",
    "sample_arrivals",
    "sample_tolerances",
    "save_scenario",
    "search_time_s",
    "should_abandon",
    "solve_exact",
    "validate",
    "verify_assignment",
    "walk_time_s",
    "with_strategy_mix",
    "write_assignment_csv",
    "write_comparison_csv",
    "write_convergence_csv",
    "write_failures_csv",
    "write_rerouting_csv",
]
