"""Optimal assignment: construction, exact solver, oracle, and export."""

from __future__ import annotations

import numpy as np
import pytest

from eventparking import (
    Assignment,
    AssignmentProblem,
    InfeasibleError,
    InstanceTooLargeError,
    assignment_cost,
    brute_force_solve,
    build_problem,
    count_feasible_assignments,
    generate_synthetic,
    sample_arrivals,
    search_time_s,
    solve_exact,
    verify_assignment,
    write_assignment_csv,
)


def make_problem(
    base_ms: list[list[int]],
    caps: tuple[int, ...],
    vehicle_entry: list[int],
    slot_ms: list[list[int]] | None = None,
    arrival_times: list[float] | None = None,
) -> AssignmentProblem:
    """Hand-built instance; float components mirror the integer costs."""
    m = len(base_ms)
    n = len(caps)
    if slot_ms is None:
        slot_ms = [[0] * c for c in caps]
    k = len(vehicle_entry)
    base = np.asarray(base_ms, dtype=np.int64)
    slots = tuple(np.asarray(row, dtype=np.int64) for row in slot_ms)
    times = np.asarray(
        arrival_times if arrival_times is not None else np.arange(k, dtype=float)
    )
    return AssignmentProblem(
        vehicle_entry=np.asarray(vehicle_entry, dtype=int),
        arrival_times_s=times,
        base_cost_ms=base,
        slot_cost_ms=slots,
        td_s=base / 1000.0,
        tw_s=np.zeros(n),
        ts_s=tuple(s / 1000.0 for s in slots),
        entry_ids=tuple(range(m)),
        lot_ids=tuple(range(n)),
        capacities=caps,
    )


def random_problem(rng: np.random.Generator) -> AssignmentProblem:
    m = int(rng.integers(1, 4))
    n = int(rng.integers(1, 5))
    caps = tuple(int(c) for c in rng.integers(1, 4, size=n))
    k = int(rng.integers(0, min(sum(caps), 6) + 1))
    base = rng.integers(0, 10_000, size=(m, n)).tolist()
    slot = [
        np.sort(rng.integers(0, 5_000, size=c)).tolist() for c in caps
    ]
    entries = rng.integers(0, m, size=k).tolist()
    times = rng.uniform(0, 7200, size=k).tolist()
    return make_problem(base, caps, entries, slot, times)


# ============================================================
# Problem construction
# ============================================================

def test_single_vehicle_cost_is_drive_plus_stop_plus_walk():
    s = generate_synthetic(n_lots=1, total_capacity=1, n_entries=1, seed=3)
    sched = sample_arrivals(s, seed=0)
    p = build_problem(s, sched)
    a = solve_exact(p)

    dm = s.distances()
    td = float(dm.entry_lot[0, 0]) / s.kinematics.drive_speed_mps
    tw = float(dm.lot_dest[0]) / s.kinematics.walk_speed_mps
    ts = s.kinematics.park_stop_s

    assert a.total_cost_ms == round((td + tw) * 1000) + round(ts * 1000)
    assert a.per_vehicle_time_s[0] == (td + ts) + tw
    assert a.lot_index_of.tolist() == [0]
    assert a.slot_index_of.tolist() == [0]


def test_slot_costs_reproduce_the_search_time_curve(medium_scenario):
    s = medium_scenario
    p = build_problem(s, sample_arrivals(s, seed=1))
    for i, lot in enumerate(s.lots):
        expected = [
            search_time_s(
                lot.capacity, occ, lot.floor_capacities,
                lot.ramp_length_m, s.kinematics,
            )
            for occ in range(lot.capacity)
        ]
        assert np.array_equal(
            p.slot_cost_ms[i], np.rint(np.array(expected) * 1000.0).astype(np.int64)
        )
        assert p.ts_s[i] == pytest.approx(expected)
        assert (np.diff(p.slot_cost_ms[i]) >= 0).all()


def test_problem_shapes_match_the_scenario(bundled_scenario):
    s = bundled_scenario
    p = build_problem(s, sample_arrivals(s, seed=0))
    assert p.n_vehicles == 3992
    assert p.n_lots == 21
    assert p.total_slots == 3992
    assert p.base_cost_ms.shape == (12, 21)
    assert len(p.slot_cost_ms) == 21
    with pytest.raises(InstanceTooLargeError):
        p.dense_cost_ms()


def test_dense_cost_matrix_agrees_with_cost_ms():
    rng = np.random.default_rng(0)
    p = random_problem(rng)
    dense = p.dense_cost_ms()
    col = 0
    for i, cap in enumerate(p.capacities):
        for slot in range(cap):
            for k in range(p.n_vehicles):
                assert dense[k, col] == p.cost_ms(k, i, slot)
            col += 1


def test_build_problem_rejects_excess_demand(small_scenario):
    sched = sample_arrivals(small_scenario, seed=0)
    from dataclasses import replace

    starved = replace(
        small_scenario,
        lots=(replace(small_scenario.lots[0], capacity=1, floor_capacities=(1,)),),
    )
    with pytest.raises(InfeasibleError, match="demand exceeds supply"):
        build_problem(starved, sched)


# ============================================================
# Exact solver on hand-checkable instances
# ============================================================

def test_two_by_two_diagonal_prefers_the_matching_lots():
    p = make_problem(
        base_ms=[[1, 10], [10, 1]], caps=(1, 1), vehicle_entry=[0, 1]
    )
    a = solve_exact(p)
    assert a.total_cost_ms == 2
    assert a.lot_index_of.tolist() == [0, 1]
    assert verify_assignment(a, p) == []


def test_solver_reroutes_an_earlier_vehicle_when_globally_cheaper():
    # Entry 0 could take the cheap lot, but entry 1 has no alternative
    # under 100; the optimum moves entry 0 to its second choice.
    p = make_problem(
        base_ms=[[1, 2], [1, 100]], caps=(1, 1), vehicle_entry=[0, 1]
    )
    a = solve_exact(p)
    assert a.total_cost_ms == 3
    assert a.lot_index_of.tolist() == [1, 0]
    assert verify_assignment(a, p) == []


def test_filling_slots_pay_increasing_costs():
    p = make_problem(
        base_ms=[[0]],
        caps=(3,),
        vehicle_entry=[0, 0, 0],
        slot_ms=[[100, 250, 900]],
    )
    a = solve_exact(p)
    assert a.total_cost_ms == 1250
    assert sorted(a.per_vehicle_cost_ms.tolist()) == [100, 250, 900]


def test_slots_are_taken_in_arrival_order():
    p = make_problem(
        base_ms=[[0]],
        caps=(3,),
        vehicle_entry=[0, 0, 0],
        slot_ms=[[0, 100, 200]],
        arrival_times=[5.0, 1.0, 3.0],
    )
    a = solve_exact(p)
    assert a.slot_index_of.tolist() == [2, 0, 1]
    assert a.per_vehicle_cost_ms.tolist() == [200, 0, 100]


def test_zero_vehicles_is_a_valid_empty_assignment():
    p = make_problem(base_ms=[[5]], caps=(2,), vehicle_entry=[])
    a = solve_exact(p)
    assert a.total_cost_ms == 0
    assert len(a.lot_index_of) == 0
    assert verify_assignment(a, p) == []
    b = brute_force_solve(p)
    assert b.total_cost_ms == 0


def test_solver_rejects_excess_demand():
    p = make_problem(base_ms=[[1]], caps=(1,), vehicle_entry=[0, 0])
    with pytest.raises(InfeasibleError):
        solve_exact(p)
    with pytest.raises(InfeasibleError):
        brute_force_solve(p)


def test_total_cost_is_monotone_in_vehicle_count():
    rng = np.random.default_rng(17)
    base = rng.integers(0, 5_000, size=(2, 3)).tolist()
    slot = [np.sort(rng.integers(0, 2_000, size=3)).tolist() for _ in range(3)]
    totals = []
    for k in range(0, 10):
        p = make_problem(base, (3, 3, 3), [k % 2 for k in range(k)], slot)
        totals.append(solve_exact(p).total_cost_ms)
    assert all(b >= a for a, b in zip(totals, totals[1:]))


# ============================================================
# Counting and the brute-force oracle
# ============================================================

@pytest.mark.parametrize(
    ("caps", "k", "expected"),
    [
        ((2, 2), 3, 6),
        ((2, 1), 3, 3),
        ((5,), 3, 1),
        ((1, 1, 1), 2, 6),
        ((2,), 3, 0),
        ((3, 3), 0, 1),
        ((1, 1), 2, 2),
    ],
)
def test_feasible_assignment_counts(caps, k, expected):
    assert count_feasible_assignments(caps, k) == expected


def test_brute_force_refuses_oversized_instances():
    p = make_problem(
        base_ms=[[0, 0, 0]],
        caps=(3, 3, 3),
        vehicle_entry=[0] * 9,
    )
    assert count_feasible_assignments((3, 3, 3), 9) == 1680
    with pytest.raises(InstanceTooLargeError):
        brute_force_solve(p, guard=100)


def test_solver_matches_brute_force_on_random_instances():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        p = random_problem(rng)
        fast = solve_exact(p)
        slow = brute_force_solve(p)
        assert fast.total_cost_ms == slow.total_cost_ms
        assert verify_assignment(fast, p) == []
        assert verify_assignment(slow, p) == []


def test_solver_matches_brute_force_through_the_full_pipeline():
    rng = np.random.default_rng(99)
    for trial in range(25):
        n_lots = int(rng.integers(1, 4))
        total = int(rng.integers(n_lots, 8))
        s = generate_synthetic(
            n_lots=n_lots,
            total_capacity=total,
            n_entries=int(rng.integers(1, 4)),
            seed=trial,
            vehicle_count=int(rng.integers(1, total + 1)),
        )
        p = build_problem(s, sample_arrivals(s, seed=trial))
        fast = solve_exact(p)
        slow = brute_force_solve(p)
        assert fast.total_cost_ms == slow.total_cost_ms
        assert verify_assignment(fast, p) == []


# ============================================================
# Recomputation, verification, export
# ============================================================

def test_no_single_move_improves_the_optimum():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = random_problem(rng)
        if p.n_vehicles == 0 or p.n_lots < 2:
            continue
        a = solve_exact(p)
        optimal = assignment_cost(a.lot_index_of, p)
        counts = np.bincount(a.lot_index_of, minlength=p.n_lots)
        for k in range(p.n_vehicles):
            for i in range(p.n_lots):
                if i == a.lot_index_of[k] or counts[i] >= p.capacities[i]:
                    continue
                moved = a.lot_index_of.copy()
                moved[k] = i
                assert assignment_cost(moved, p) >= optimal


def test_assignment_cost_rejects_capacity_violations():
    p = make_problem(base_ms=[[1, 1]], caps=(1, 2), vehicle_entry=[0, 0])
    with pytest.raises(InfeasibleError, match="over capacity"):
        assignment_cost(np.array([0, 0]), p)
    with pytest.raises(InfeasibleError, match="vehicles"):
        assignment_cost(np.array([0]), p)


def test_verify_assignment_flags_tampering():
    p = make_problem(base_ms=[[1, 1]], caps=(1, 2), vehicle_entry=[0, 0])
    a = solve_exact(p)
    assert verify_assignment(a, p) == []
    crowded = Assignment(
        lot_index_of=np.array([0, 0]),
        slot_index_of=a.slot_index_of,
        per_vehicle_cost_ms=a.per_vehicle_cost_ms,
        per_vehicle_time_s=a.per_vehicle_time_s,
        total_cost_ms=a.total_cost_ms,
    )
    assert any("over capacity" in msg for msg in verify_assignment(crowded, p))
    padded = Assignment(
        lot_index_of=a.lot_index_of,
        slot_index_of=a.slot_index_of,
        per_vehicle_cost_ms=a.per_vehicle_cost_ms,
        per_vehicle_time_s=a.per_vehicle_time_s,
        total_cost_ms=a.total_cost_ms + 1,
    )
    assert any("per-vehicle sum" in msg for msg in verify_assignment(padded, p))


def test_medium_scenario_solves_and_verifies(medium_scenario):
    p = build_problem(medium_scenario, sample_arrivals(medium_scenario, seed=0))
    a = solve_exact(p)
    assert verify_assignment(a, p) == []
    counts = np.bincount(a.lot_index_of, minlength=p.n_lots)
    assert (counts <= np.array(p.capacities)).all()
    assert counts.sum() == p.n_vehicles
    # Full-float per-vehicle times track the millisecond objective.
    assert a.per_vehicle_time_s.sum() * 1000 == pytest.approx(
        a.total_cost_ms, abs=p.n_vehicles
    )


def test_assignment_csv_has_consistent_rows(tmp_path, small_scenario):
    p = build_problem(small_scenario, sample_arrivals(small_scenario, seed=4))
    a = solve_exact(p)
    path = tmp_path / "assignment.csv"
    write_assignment_csv(a, p, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "vehicle_id,entry_id,lot_id,TD_s,TS_s,TW_s,total_s"
    assert len(lines) == p.n_vehicles + 1
    for line in lines[1:]:
        vid, eid, lid, td, ts, tw, total = line.split(",")
        assert float(total) == pytest.approx(
            float(td) + float(ts) + float(tw), rel=1e-12
        )
        assert int(eid) in p.entry_ids
        assert int(lid) in p.lot_ids
        k = int(vid)
        assert float(total) == pytest.approx(a.per_vehicle_time_s[k], rel=1e-12)


def test_assignment_csv_bytes_are_stable(tmp_path, small_scenario):
    p = build_problem(small_scenario, sample_arrivals(small_scenario, seed=4))
    a = solve_exact(p)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_assignment_csv(a, p, p1)
    write_assignment_csv(a, p, p2)
    assert p1.read_bytes() == p2.read_bytes()
