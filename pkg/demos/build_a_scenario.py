"""
Building scenarios
==================

Generate a synthetic event scenario, inspect what it contains, check
it for problems, and round-trip it through the JSON file format.

Run with: python3 demos/build_a_scenario.py
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from eventparking import (
    generate_synthetic,
    load_bundled,
    load_scenario,
    save_scenario,
    validate,
)

# ============================================================
# A bundled benchmark scenario ships with the package
# ============================================================

bundled = load_bundled()
print(f"bundled scenario:   {bundled.name}")
print(f"  lots:             {len(bundled.lots)}")
print(f"  total capacity:   {bundled.total_capacity}")
print(f"  vehicles:         {bundled.vehicle_count}")
print(f"  entry links:      {len(bundled.entries)}")
print(f"  arrival window:   {bundled.window_s[0]}..{bundled.window_s[1]} s")
print(f"  validation notes: {validate(bundled) or 'none'}")
print()

# ============================================================
# Generating your own
# ============================================================

# The generator scatters lots inside a rectangular region, pins entry
# links to the boundary, and splits capacity across lots and floors.
# Everything is reproducible from the seed.
scenario = generate_synthetic(
    n_lots=6,
    total_capacity=180,
    n_entries=4,
    seed=42,
    name="demo-event",
)
print(f"generated scenario: {scenario.name}")
for i, lot in enumerate(scenario.lots):
    floors = "x".join(str(c) for c in lot.floor_capacities)
    print(
        f"  lot {i}: capacity {lot.capacity:>3} "
        f"(floors {floors}), ramp {lot.ramp_length_m:.0f} m"
    )
print()

# ============================================================
# Saving and loading
# ============================================================

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo-event.json"
    save_scenario(scenario, path)
    size = path.stat().st_size
    again = load_scenario(path)
    print(f"saved to {path.name} ({size:,} bytes)")
    print(f"round-trip preserves the scenario: {again == scenario}")
