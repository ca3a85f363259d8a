"""Optimal vehicle-to-lot assignment.

The objective is the total of drive time (entry to lot), in-lot search
time, and walk time (lot to destination) over all vehicles, subject to
lot capacities. Search time grows as a lot fills, so each lot is
expanded into unit slots: the n-th slot of a lot carries the search
time seen by the n-th vehicle to park there (n-1 cars already inside).
Slot costs are non-decreasing in n, which makes the expansion exact and
lets a successive-shortest-path matching find the true optimum.

Costs are converted to integer milliseconds before solving, so
optimality is certified in exact arithmetic and results are
bit-reproducible across platforms. Drive/walk and search components are
rounded separately, keeping the integer cost a sum of a per-(entry,
lot) term and a per-slot term.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arrivals import ArrivalSchedule
from .geo import DistanceMatrix
from .scenario import Scenario
from .timing import search_time_s


class InfeasibleError(ValueError):
    """Raised when vehicles outnumber slots or no assignment exists."""


class InstanceTooLargeError(ValueError):
    """Raised when brute-force enumeration would exceed its guard."""


@dataclass(frozen=True)
class AssignmentProblem:
    """Factored cost structure of one assignment instance.

    The full cost of sending vehicle k to slot n of lot i is
    ``base_cost_ms[vehicle_entry[k], i] + slot_cost_ms[i][n]``. The
    float-second components (td_s, ts_s, tw_s) are kept alongside the
    integer costs for full-precision export.
    """

    vehicle_entry: np.ndarray
    arrival_times_s: np.ndarray
    base_cost_ms: np.ndarray
    slot_cost_ms: tuple[np.ndarray, ...]
    td_s: np.ndarray
    tw_s: np.ndarray
    ts_s: tuple[np.ndarray, ...]
    entry_ids: tuple[int, ...]
    lot_ids: tuple[int, ...]
    capacities: tuple[int, ...]

    @property
    def n_vehicles(self) -> int:
        return len(self.vehicle_entry)

    @property
    def n_lots(self) -> int:
        return len(self.capacities)

    @property
    def total_slots(self) -> int:
        return sum(self.capacities)

    def cost_ms(self, vehicle: int, lot: int, slot: int) -> int:
        return int(self.base_cost_ms[self.vehicle_entry[vehicle], lot]) + int(
            self.slot_cost_ms[lot][slot]
        )

    def dense_cost_ms(self) -> np.ndarray:
        """[K, total_slots] integer cost matrix, slot columns lot-major.

        Guarded against large instances; intended for tests and
        small-instance inspection.
        """
        if self.n_vehicles * self.total_slots > 4_000_000:
            raise InstanceTooLargeError(
                "dense cost matrix would exceed the 4e6-entry guard"
            )
        slot_row = np.concatenate(self.slot_cost_ms) if self.capacities else np.empty(0, int)
        base_rows = self.base_cost_ms[self.vehicle_entry]
        lot_of_col = np.repeat(np.arange(self.n_lots), self.capacities)
        return base_rows[:, lot_of_col] + slot_row[None, :]


@dataclass(frozen=True)
class Assignment:
    """A feasible (here: optimal) assignment of every vehicle to a lot.

    Integer-millisecond costs are the solver's exact objective;
    ``per_vehicle_time_s`` carries the same drive + search + walk sums
    at full float precision for comparison against simulated times.
    """

    lot_index_of: np.ndarray
    slot_index_of: np.ndarray
    per_vehicle_cost_ms: np.ndarray
    per_vehicle_time_s: np.ndarray
    total_cost_ms: int

    @property
    def total_cost_s(self) -> float:
        return self.total_cost_ms / 1000.0

    @property
    def per_vehicle_cost_s(self) -> np.ndarray:
        return self.per_vehicle_cost_ms / 1000.0


# ============================================================
# Problem construction
# ============================================================

def build_problem(
    s: Scenario,
    sched: ArrivalSchedule,
    dm: DistanceMatrix | None = None,
) -> AssignmentProblem:
    """Assemble the factored cost structure for a scenario and schedule.

    Raises:
        InfeasibleError: if vehicles outnumber total slots.
    """
    k = sched.vehicle_count
    if k > s.total_capacity:
        raise InfeasibleError(
            f"{k} vehicles but only {s.total_capacity} slots: "
            "demand exceeds supply"
        )
    if dm is None:
        dm = s.distances()
    kin = s.kinematics

    entry_index = {e.id: idx for idx, e in enumerate(s.entries)}
    vehicle_entry = np.array([entry_index[eid] for eid in sched.entry_ids], dtype=int)

    td_s = dm.entry_lot / kin.drive_speed_mps
    tw_s = dm.lot_dest / kin.walk_speed_mps
    base_cost_ms = np.rint((td_s + tw_s[None, :]) * 1000.0).astype(np.int64)

    ts_s: list[np.ndarray] = []
    slot_cost_ms: list[np.ndarray] = []
    for lot in s.lots:
        ts = np.array(
            [
                search_time_s(
                    lot.capacity, occupied, lot.floor_capacities,
                    lot.ramp_length_m, kin,
                )
                for occupied in range(lot.capacity)
            ]
        )
        ms = np.rint(ts * 1000.0).astype(np.int64)
        # The matching relies on slot costs never decreasing as a lot
        # fills; the search-time model guarantees it, so treat any
        # violation as an internal error.
        if np.any(np.diff(ms) < 0):
            raise RuntimeError(f"slot costs for lot {lot.id} are not monotone")
        ts_s.append(ts)
        slot_cost_ms.append(ms)

    return AssignmentProblem(
        vehicle_entry=vehicle_entry,
        arrival_times_s=np.asarray(sched.times_s, dtype=float),
        base_cost_ms=base_cost_ms,
        slot_cost_ms=tuple(slot_cost_ms),
        td_s=td_s,
        tw_s=tw_s,
        ts_s=tuple(ts_s),
        entry_ids=tuple(e.id for e in s.entries),
        lot_ids=tuple(lot.id for lot in s.lots),
        capacities=tuple(lot.capacity for lot in s.lots),
    )


def _slot_order_within_lots(
    p: AssignmentProblem, lot_index_of: np.ndarray
) -> np.ndarray:
    # Vehicles sharing a lot take slots in arrival order (ties by id),
    # which fixes per-vehicle costs without changing the total.
    slot_index_of = np.zeros(p.n_vehicles, dtype=int)
    order = np.lexsort((np.arange(p.n_vehicles), p.arrival_times_s))
    next_slot = [0] * p.n_lots
    for k in order:
        lot = int(lot_index_of[k])
        slot_index_of[k] = next_slot[lot]
        next_slot[lot] += 1
    return slot_index_of


def _finish_assignment(p: AssignmentProblem, lot_index_of: np.ndarray) -> Assignment:
    slot_index_of = _slot_order_within_lots(p, lot_index_of)
    per_vehicle = np.zeros(p.n_vehicles, dtype=np.int64)
    per_vehicle_s = np.zeros(p.n_vehicles, dtype=float)
    for k in range(p.n_vehicles):
        e = int(p.vehicle_entry[k])
        i = int(lot_index_of[k])
        slot = int(slot_index_of[k])
        per_vehicle[k] = p.cost_ms(k, i, slot)
        # Same term order as the simulation's (drive + search) + walk,
        # so a direct-path vehicle reroutes by exactly 0.0 seconds.
        per_vehicle_s[k] = (
            float(p.td_s[e, i]) + float(p.ts_s[i][slot])
        ) + float(p.tw_s[i])
    return Assignment(
        lot_index_of=lot_index_of,
        slot_index_of=slot_index_of,
        per_vehicle_cost_ms=per_vehicle,
        per_vehicle_time_s=per_vehicle_s,
        total_cost_ms=int(per_vehicle.sum()),
    )


# ============================================================
# Exact solver
# ============================================================

def solve_exact(p: AssignmentProblem) -> Assignment:
    """Minimum-total-cost assignment via successive shortest paths.

    Vehicles are interchangeable apart from their entry link, so the
    search runs on a collapsed network: source -> entry (supply) ->
    lot (drive+walk cost) -> sink (one unit arc per slot, cheapest
    remaining slot first). Dijkstra with node potentials finds each
    augmenting path; one unit of flow moves per iteration. The final
    potentials certify optimality: every residual arc must have
    non-negative reduced cost.

    Raises:
        InfeasibleError: if not every vehicle can be placed.
    """
    k_total = p.n_vehicles
    if k_total > p.total_slots:
        raise InfeasibleError(
            f"{k_total} vehicles but only {p.total_slots} slots: "
            "demand exceeds supply"
        )
    m = len(p.entry_ids)
    n = p.n_lots
    source = 0
    sink = m + n + 1
    n_nodes = sink + 1
    inf = math.inf

    base = p.base_cost_ms.tolist()
    slots = [arr.tolist() for arr in p.slot_cost_ms]
    caps = list(p.capacities)
    supply = np.bincount(p.vehicle_entry, minlength=m).tolist() if k_total else [0] * m

    flow_se = [0] * m
    flow_el = [[0] * n for _ in range(m)]
    used = [0] * n
    pot = [0] * n_nodes

    for _ in range(k_total):
        dist = [inf] * n_nodes
        prev = [-1] * n_nodes
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            if u == source:
                for e in range(m):
                    if flow_se[e] < supply[e]:
                        v = 1 + e
                        nd = d + pot[u] - pot[v]
                        if nd < dist[v]:
                            dist[v] = nd
                            prev[v] = u
                            heapq.heappush(heap, (nd, v))
            elif u <= m:
                # Arcs back into the source are skipped: dist[source] is
                # already 0 and reduced costs are non-negative.
                e = u - 1
                row = base[e]
                for i in range(n):
                    v = m + 1 + i
                    nd = d + row[i] + pot[u] - pot[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = u
                        heapq.heappush(heap, (nd, v))
            elif u < sink:
                i = u - m - 1
                if used[i] < caps[i]:
                    nd = d + slots[i][used[i]] + pot[u] - pot[sink]
                    if nd < dist[sink]:
                        dist[sink] = nd
                        prev[sink] = u
                        heapq.heappush(heap, (nd, sink))
                for e in range(m):
                    if flow_el[e][i] > 0:
                        v = 1 + e
                        nd = d - base[e][i] + pot[u] - pot[v]
                        if nd < dist[v]:
                            dist[v] = nd
                            prev[v] = u
                            heapq.heappush(heap, (nd, v))
            else:
                for i in range(n):
                    if used[i] > 0:
                        v = m + 1 + i
                        nd = d - slots[i][used[i] - 1] + pot[u] - pot[v]
                        if nd < dist[v]:
                            dist[v] = nd
                            prev[v] = u
                            heapq.heappush(heap, (nd, v))
        if dist[sink] == inf:
            raise InfeasibleError("no augmenting path: assignment infeasible")
        d_sink = dist[sink]
        for v in range(n_nodes):
            pot[v] += min(dist[v], d_sink)
        # Walk the predecessor chain sink -> source, pushing one unit.
        # The path is simple, so the sink is never interior: slot usage
        # only grows; entry-to-lot attribution may be rerouted backward.
        v = sink
        while v != source:
            u = prev[v]
            if u == source:
                flow_se[v - 1] += 1
            elif 1 <= u <= m:
                flow_el[u - 1][v - m - 1] += 1
            elif v == sink:
                used[u - m - 1] += 1
            else:
                flow_el[v - 1][u - m - 1] -= 1
            v = u

    _certify_optimal(pot, base, slots, caps, supply, flow_se, flow_el, used, m, n)

    lot_index_of = np.zeros(k_total, dtype=int)
    for e in range(m):
        vehicles = np.flatnonzero(p.vehicle_entry == e)
        pos = 0
        for i in range(n):
            take = flow_el[e][i]
            if take:
                lot_index_of[vehicles[pos : pos + take]] = i
                pos += take
    return _finish_assignment(p, lot_index_of)


def _certify_optimal(pot, base, slots, caps, supply, flow_se, flow_el, used, m, n):
    # Complementary slackness: every residual arc needs reduced cost
    # >= 0 under the final potentials, otherwise the flow is not optimal.
    source = 0
    sink = m + n + 1
    bad: list[str] = []
    for e in range(m):
        u = 1 + e
        if flow_se[e] < supply[e] and pot[source] - pot[u] < 0:
            bad.append(f"source->entry{e}")
        if flow_se[e] > 0 and pot[u] - pot[source] < 0:
            bad.append(f"entry{e}->source")
        for i in range(n):
            v = m + 1 + i
            if base[e][i] + pot[u] - pot[v] < 0:
                bad.append(f"entry{e}->lot{i}")
            if flow_el[e][i] > 0 and -base[e][i] + pot[v] - pot[u] < 0:
                bad.append(f"lot{i}->entry{e}")
    for i in range(n):
        v = m + 1 + i
        if used[i] < caps[i] and slots[i][used[i]] + pot[v] - pot[sink] < 0:
            bad.append(f"lot{i}->sink")
        if used[i] > 0 and -slots[i][used[i] - 1] + pot[sink] - pot[v] < 0:
            bad.append(f"sink->lot{i}")
    if bad:
        raise RuntimeError(
            "optimality certificate failed on residual arcs: " + ", ".join(bad)
        )


# ============================================================
# Brute-force oracle
# ============================================================

def count_feasible_assignments(capacities: tuple[int, ...], n_vehicles: int) -> int:
    """Number of distinct vehicle-to-lot maps respecting capacities.

    Vehicles are distinguishable, so this counts sequences, not
    multisets: lots (2, 2) with 3 vehicles admit 6 maps.
    """
    ways = [1] + [0] * n_vehicles
    for cap in capacities:
        nxt = [0] * (n_vehicles + 1)
        for total in range(n_vehicles + 1):
            acc = 0
            for j in range(min(cap, total) + 1):
                acc += math.comb(total, j) * ways[total - j]
            nxt[total] = acc
        ways = nxt
    return ways[n_vehicles]


def brute_force_solve(p: AssignmentProblem, guard: int = 10_000_000) -> Assignment:
    """Exact optimum by exhaustive enumeration, for small instances only.

    Raises:
        InstanceTooLargeError: if the feasible-assignment count exceeds
            ``guard``.
        InfeasibleError: if vehicles outnumber slots.
    """
    k_total = p.n_vehicles
    if k_total > p.total_slots:
        raise InfeasibleError(
            f"{k_total} vehicles but only {p.total_slots} slots: "
            "demand exceeds supply"
        )
    total = count_feasible_assignments(p.capacities, k_total)
    if total > guard:
        raise InstanceTooLargeError(
            f"{total} feasible assignments exceed the {guard} guard"
        )
    n = p.n_lots
    caps = list(p.capacities)
    base = p.base_cost_ms.tolist()
    slots = [arr.tolist() for arr in p.slot_cost_ms]
    entry = p.vehicle_entry.tolist()

    best_cost = math.inf
    best: list[int] | None = None
    counts = [0] * n
    choice = [0] * k_total

    def dfs(k: int, cost_so_far: int) -> None:
        nonlocal best_cost, best
        if cost_so_far >= best_cost:
            return
        if k == k_total:
            best_cost = cost_so_far
            best = choice.copy()
            return
        row = base[entry[k]]
        for i in range(n):
            if counts[i] < caps[i]:
                step = row[i] + slots[i][counts[i]]
                counts[i] += 1
                choice[k] = i
                dfs(k + 1, cost_so_far + step)
                counts[i] -= 1

    dfs(0, 0)
    assert best is not None or k_total == 0
    lot_index_of = np.array(best if best is not None else [], dtype=int)
    return _finish_assignment(p, lot_index_of)


# ============================================================
# Validation and export
# ============================================================

def assignment_cost(lot_index_of: np.ndarray, p: AssignmentProblem) -> float:
    """Recompute an assignment's objective in seconds, from scratch.

    Independent of any solver bookkeeping: per-lot slot costs are summed
    for however many vehicles land in each lot.

    Raises:
        InfeasibleError: if the assignment violates a capacity or its
            length is wrong.
    """
    lot_index_of = np.asarray(lot_index_of, dtype=int)
    if len(lot_index_of) != p.n_vehicles:
        raise InfeasibleError(
            f"assignment covers {len(lot_index_of)} vehicles, expected {p.n_vehicles}"
        )
    total_ms = 0
    counts = np.bincount(lot_index_of, minlength=p.n_lots) if len(lot_index_of) else np.zeros(p.n_lots, int)
    for i, c in enumerate(counts):
        if c > p.capacities[i]:
            raise InfeasibleError(
                f"lot {p.lot_ids[i]} over capacity: {c} > {p.capacities[i]}"
            )
        total_ms += int(p.slot_cost_ms[i][:c].sum())
    total_ms += int(p.base_cost_ms[p.vehicle_entry, lot_index_of].sum()) if len(lot_index_of) else 0
    return total_ms / 1000.0


def verify_assignment(a: Assignment, p: AssignmentProblem) -> list[str]:
    """Feasibility and self-consistency check; empty list means valid."""
    problems: list[str] = []
    if len(a.lot_index_of) != p.n_vehicles:
        problems.append("wrong number of assigned vehicles")
        return problems
    counts = np.bincount(a.lot_index_of, minlength=p.n_lots) if p.n_vehicles else np.zeros(p.n_lots, int)
    for i, c in enumerate(counts):
        if c > p.capacities[i]:
            problems.append(
                f"lot {p.lot_ids[i]} over capacity: {c} > {p.capacities[i]}"
            )
    if problems:
        # The cost recomputation below assumes feasibility.
        return problems
    if int(a.per_vehicle_cost_ms.sum()) != a.total_cost_ms:
        problems.append("total_cost_ms does not equal the per-vehicle sum")
    expect = assignment_cost(a.lot_index_of, p)
    if expect != a.total_cost_s:
        problems.append(
            f"recomputed cost {expect} differs from reported {a.total_cost_s}"
        )
    return problems


def write_assignment_csv(
    a: Assignment, p: AssignmentProblem, path: str | Path
) -> None:
    """Export per-vehicle assignment rows with full-precision seconds."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["vehicle_id", "entry_id", "lot_id", "TD_s", "TS_s", "TW_s", "total_s"]
        )
        for k in range(p.n_vehicles):
            e = int(p.vehicle_entry[k])
            i = int(a.lot_index_of[k])
            slot = int(a.slot_index_of[k])
            td = float(p.td_s[e, i])
            ts = float(p.ts_s[i][slot])
            tw = float(p.tw_s[i])
            writer.writerow(
                [
                    k,
                    p.entry_ids[e],
                    p.lot_ids[i],
                    td,
                    ts,
                    tw,
                    td + ts + tw,
                ]
            )
