"""
Simulating a parking search
===========================

Walk through one replication of the stochastic model: sample an
arrival schedule, deal out driver search strategies, run the
event-driven search, and audit the event log.

Run with: python3 demos/search_simulation.py
"""

from __future__ import annotations

from collections import Counter

from eventparking import generate_synthetic, replay_violations, run_replication
from eventparking.sim import mean_rerouting_s

# ============================================================
# One replication, fully logged
# ============================================================

scenario = generate_synthetic(n_lots=5, total_capacity=120, n_entries=3, seed=8)
rep = run_replication(scenario, seed_base=0, replication=0, log_events=True)

print(f"scenario: {len(scenario.lots)} lots, {scenario.vehicle_count} vehicles")
print(f"parked:    {rep.run.parked_count}")
print(f"abandoned: {rep.run.abandoned_count}")
print(f"unused:    {rep.run.unused_total}")
print()

# ============================================================
# Who searched how
# ============================================================

groups = Counter(p.group.value for p in rep.profiles)
print("strategy mix dealt to drivers:")
for name, n in sorted(groups.items()):
    print(f"  {name:>24}: {n}")
print()

hops = Counter(o.lots_visited for o in rep.run.outcomes if o.parked)
print("lots visited before parking:")
for n_lots in sorted(hops):
    print(f"  {n_lots} lot(s): {hops[n_lots]} vehicles")
print()

# ============================================================
# Rerouting against the optimal baseline
# ============================================================

# Each replication also solves the assignment problem on the same
# arrivals, so the realized search can be scored against the optimum.
extra = mean_rerouting_s(rep)
print(f"mean rerouting vs optimal assignment: {extra / 60.0:.2f} min/vehicle")

slowest = max(
    (o for o in rep.run.outcomes if o.parked),
    key=lambda o: o.total_time_s - rep.optimal.per_vehicle_time_s[o.vehicle_id],
)
penalty = slowest.total_time_s - rep.optimal.per_vehicle_time_s[slowest.vehicle_id]
print(
    f"worst-hit vehicle {slowest.vehicle_id}: visited "
    f"{slowest.lots_visited} lots, {penalty / 60.0:.2f} min over its optimum"
)
print()

# ============================================================
# Auditing the event log
# ============================================================

# An event record is (time_s, vehicle_id, kind, lot_index).
kinds = Counter(ev[2] for ev in rep.run.event_log)
print("event log:", dict(sorted(kinds.items())))
capacities = {i: lot.capacity for i, lot in enumerate(scenario.lots)}
problems = replay_violations(rep.run.event_log, capacities)
print(f"replay violations: {problems or 'none'}")
