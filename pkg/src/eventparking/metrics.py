"""Evaluation of simulated search against the optimal assignment.

The headline quantity is rerouting time: how much longer a vehicle's
simulated entry-to-destination trip took than it would have under the
optimal assignment. Failed searches are tallied per lot (by the lot the
driver gave up at) alongside each lot's unused capacity; when demand
equals supply the two totals are equal by conservation. A paired
three-way comparison reruns identical replications under different
strategy mixes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arrivals import sample_arrivals
from .assign import Assignment, AssignmentProblem, build_problem, solve_exact
from .drivers import assign_profiles
from .scenario import Scenario, with_strategy_mix
from .sim import ReplicationResult, RunResult, replication_streams, run_once

COMPARISON_METHODS = (
    "nearest_to_destination_only",
    "drive_plus_walk_only",
    "combined_mix",
)


@dataclass(frozen=True)
class ReroutingReport:
    """Signed per-vehicle rerouting (None for abandoned) plus the mean."""

    per_vehicle_s: tuple[float | None, ...]
    mean_min: float
    abandoned: int


def rerouting_time(
    run: RunResult, optimal: Assignment, problem: AssignmentProblem
) -> ReroutingReport:
    """Per-vehicle simulated-minus-optimal time, parked vehicles only.

    Values are signed: a simulated vehicle can occasionally beat its
    optimal-assignment cost because the simulation charges search time
    at observed occupancy rather than the solver's slot costs. The mean
    is over parked vehicles, in minutes; abandoned vehicles are counted
    separately.

    Raises:
        ValueError: if run, assignment, and problem sizes disagree.
    """
    k = problem.n_vehicles
    if len(run.outcomes) != k or len(optimal.per_vehicle_cost_ms) != k:
        raise ValueError(
            "run, assignment, and problem describe different vehicle counts"
        )
    optimal_s = optimal.per_vehicle_time_s
    per_vehicle: list[float | None] = []
    parked_diffs: list[float] = []
    for o in run.outcomes:
        if o.parked:
            diff = o.total_time_s - float(optimal_s[o.vehicle_id])
            per_vehicle.append(diff)
            parked_diffs.append(diff)
        else:
            per_vehicle.append(None)
    mean_min = float(np.mean(parked_diffs)) / 60.0 if parked_diffs else 0.0
    return ReroutingReport(
        per_vehicle_s=tuple(per_vehicle),
        mean_min=mean_min,
        abandoned=len(per_vehicle) - len(parked_diffs),
    )


@dataclass(frozen=True)
class FailureReport:
    """Failed searches and unused capacity per lot, both views."""

    lot_ids: tuple[int, ...]
    failures_by_lot: np.ndarray
    unused_by_lot: np.ndarray
    per_replication: tuple[tuple[np.ndarray, np.ndarray], ...]

    @property
    def failures_total(self) -> int:
        return int(self.failures_by_lot.sum())

    @property
    def unused_total(self) -> int:
        return int(self.unused_by_lot.sum())


def failed_search_report(runs: list[RunResult]) -> FailureReport:
    """Aggregate failures (by last-visited lot) and unused spots.

    Both attributions are reported because they answer different
    questions: where drivers gave up versus where capacity sat idle.

    Raises:
        ValueError: on an empty run list or mismatched lot sets.
    """
    if not runs:
        raise ValueError("need at least one run")
    lot_ids = tuple(st.lot_id for st in runs[0].final_lot_states)
    index_of = {lot_id: i for i, lot_id in enumerate(lot_ids)}
    n = len(lot_ids)
    per_rep: list[tuple[np.ndarray, np.ndarray]] = []
    for run in runs:
        if tuple(st.lot_id for st in run.final_lot_states) != lot_ids:
            raise ValueError("runs describe different lot sets")
        failures = np.zeros(n, dtype=int)
        for o in run.outcomes:
            if not o.parked:
                failures[o.lot_index] += 1
        unused = np.array(
            [run.final_lot_states[index_of[lot_id]].unused for lot_id in lot_ids],
            dtype=int,
        )
        per_rep.append((failures, unused))
    failures_by_lot = np.sum([f for f, _ in per_rep], axis=0).astype(int)
    unused_by_lot = np.sum([u for _, u in per_rep], axis=0).astype(int)
    return FailureReport(
        lot_ids=lot_ids,
        failures_by_lot=failures_by_lot,
        unused_by_lot=unused_by_lot,
        per_replication=tuple(per_rep),
    )


def convergence_series(
    reps: list[ReplicationResult],
) -> list[tuple[int, float, int]]:
    """Recompute the running-mean series from raw replication results.

    Rows are (replication, running mean of per-replication mean
    rerouting in minutes, cumulative failed searches).
    """
    rows: list[tuple[int, float, int]] = []
    rep_means: list[float] = []
    failed = 0
    for r, rep in enumerate(reps, start=1):
        rr = rerouting_time(rep.run, rep.optimal, rep.problem)
        rep_means.append(rr.mean_min * 60.0)
        failed += rr.abandoned
        rows.append((r, float(np.mean(rep_means)) / 60.0, failed))
    return rows


@dataclass(frozen=True)
class MethodResult:
    """One strategy mix's outcome over all paired replications."""

    method: str
    mean_rerouting_min: float
    total_failures: int
    rep_mean_rerouting_s: tuple[float, ...]
    rep_failures: tuple[int, ...]


def compare_methods(
    s: Scenario,
    runs: int,
    seed_base: int,
    arrival_mode: str = "poisson",
) -> list[MethodResult]:
    """Paired three-way comparison of strategy mixes.

    Methods: everyone ranking lots by distance to the destination
    (nearest_to_destination_only), everyone minimizing drive plus walk
    (drive_plus_walk_only), and the scenario's own mix (combined_mix).
    Every replication shares its arrival schedule, optimal assignment,
    tolerance budgets, and simulation seed across all three methods, so
    differences come from strategy alone.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    variants = {
        "nearest_to_destination_only": with_strategy_mix(
            s, (0.0, 0.0, 1.0, 0.0), random_fraction=0.0
        ),
        "drive_plus_walk_only": with_strategy_mix(
            s, (0.0, 0.0, 0.0, 1.0), random_fraction=0.0
        ),
        "combined_mix": s,
    }
    dm = s.distances()
    rep_means = {name: [] for name in COMPARISON_METHODS}
    rep_fails = {name: [] for name in COMPARISON_METHODS}
    for r in range(runs):
        arrivals_ss, profiles_ss, sim_ss = replication_streams(seed_base, r)
        sched = sample_arrivals(s, arrivals_ss, arrival_mode)
        problem = build_problem(s, sched, dm)
        optimal = solve_exact(problem)
        for name in COMPARISON_METHODS:
            variant = variants[name]
            profiles = assign_profiles(variant, profiles_ss)
            run = run_once(variant, sched, profiles, sim_ss, dm)
            rr = rerouting_time(run, optimal, problem)
            rep_means[name].append(rr.mean_min * 60.0)
            rep_fails[name].append(rr.abandoned)
    return [
        MethodResult(
            method=name,
            mean_rerouting_min=float(np.mean(rep_means[name])) / 60.0,
            total_failures=int(np.sum(rep_fails[name])),
            rep_mean_rerouting_s=tuple(rep_means[name]),
            rep_failures=tuple(int(f) for f in rep_fails[name]),
        )
        for name in COMPARISON_METHODS
    ]


# ============================================================
# CSV emission
# ============================================================

def _write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_rerouting_csv(
    path: str | Path, run: RunResult, report: ReroutingReport
) -> None:
    """Per-vehicle rows: vehicle_id, group, rerouting_s, outcome."""
    rows = []
    for o, diff in zip(run.outcomes, report.per_vehicle_s):
        rows.append(
            [
                o.vehicle_id,
                o.group.value,
                "" if diff is None else float(diff),
                "parked" if o.parked else "abandoned",
            ]
        )
    _write_csv(path, ["vehicle_id", "group", "rerouting_s", "outcome"], rows)


def write_failures_csv(path: str | Path, report: FailureReport) -> None:
    """Per-lot rows: lot_id, failures, unused (aggregated over runs)."""
    rows = [
        [lot_id, int(report.failures_by_lot[i]), int(report.unused_by_lot[i])]
        for i, lot_id in enumerate(report.lot_ids)
    ]
    _write_csv(path, ["lot_id", "failures", "unused"], rows)


def write_convergence_csv(
    path: str | Path, series: list[tuple[int, float, int]]
) -> None:
    """Rows: replication, mean_rerouting_min, total_failures."""
    rows = [[r, float(mean_min), int(failed)] for r, mean_min, failed in series]
    _write_csv(path, ["replication", "mean_rerouting_min", "total_failures"], rows)


def write_comparison_csv(path: str | Path, results: list[MethodResult]) -> None:
    """Rows: method, mean_rerouting_min, total_failures."""
    rows = [
        [m.method, float(m.mean_rerouting_min), m.total_failures] for m in results
    ]
    _write_csv(path, ["method", "mean_rerouting_min", "total_failures"], rows)


def write_profiles_csv(path: str | Path, profiles) -> None:
    """Rows: vehicle_id, group, tolerance_s."""
    rows = [
        [p.vehicle_id, p.group.value, float(p.tolerance_budget_s)] for p in profiles
    ]
    _write_csv(path, ["vehicle_id", "group", "tolerance_s"], rows)
