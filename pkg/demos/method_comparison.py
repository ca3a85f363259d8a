"""
Comparing search strategies
===========================

Replicate the headline experiment on a reduced scenario: how much
rerouting time does each driver population pay relative to the
optimal assignment, and how fast does the estimate converge?

Run with: python3 demos/method_comparison.py
"""

from __future__ import annotations

from eventparking import compare_methods, generate_synthetic, run_many

# A trimmed scenario keeps this demo under a few seconds. The bundled
# berkeley-synthetic scenario gives the full-size picture via:
#   eventparking compare --scenario <path> --runs 10
scenario = generate_synthetic(n_lots=8, total_capacity=600, n_entries=5, seed=14)

# ============================================================
# Paired comparison of three driver populations
# ============================================================

# All methods see identical arrivals and tolerance budgets per
# replication; only the strategy mix differs.
results = compare_methods(scenario, runs=10, seed_base=0)
print(f"{'method':>28} {'mean rerouting':>16} {'failed searches':>16}")
for m in results:
    print(f"{m.method:>28} {m.mean_rerouting_min:>12.2f} min {m.total_failures:>16}")
print()

best = min(results, key=lambda m: m.mean_rerouting_min)
worst = max(results, key=lambda m: m.mean_rerouting_min)
ratio = worst.mean_rerouting_min / best.mean_rerouting_min
print(f"{best.method} beats {worst.method} by {ratio:.1f}x")
print()

# ============================================================
# Convergence of the running mean
# ============================================================

reps, convergence = run_many(scenario, runs=12, seed_base=0)
print("running mean rerouting by replication:")
for r, mean_min, failures in convergence:
    bar = "#" * int(round(mean_min * 20))
    print(f"  r={r:>2}: {mean_min:6.3f} min  {bar}")

tail = [m for _, m, _ in convergence[-3:]]
spread = (max(tail) - min(tail)) / max(tail)
print(f"\nspread over the last 3 replications: {spread * 100:.1f}%")
