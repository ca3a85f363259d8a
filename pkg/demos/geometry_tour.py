"""
Plane geometry tour
===================

How geographic coordinates become plane coordinates, and how the
library measures street distance between projected points.

Run with: python3 demos/geometry_tour.py
"""

from __future__ import annotations

import math

from eventparking import GeoPoint, build_distance_matrix, manhattan, miller_project
from eventparking.geo import CIRCUMFERENCE_M, EARTH_RADIUS_M

# ============================================================
# Projecting single points
# ============================================================

print("sphere radius:        %.0f m" % EARTH_RADIUS_M)
print("plane width (x span): %.0f m" % CIRCUMFERENCE_M)
print()

# The projection maps (longitude, latitude) in radians onto a flat
# plane measured in meters. The origin of the sphere lands at the
# center of the plane, and y grows southward.
for label, lon, lat in [
    ("sphere origin", 0.0, 0.0),
    ("campus block", -2.1337, 0.6609),
    ("one block east", -2.1337 + 100.0 / EARTH_RADIUS_M, 0.6609),
]:
    p = miller_project(GeoPoint(lon, lat))
    print(f"{label:>14}: lon={lon:+.4f} lat={lat:+.4f} -> x={p.x:,.1f} y={p.y:,.1f}")

print()

# ============================================================
# Street distance
# ============================================================

# Vehicles travel along a grid, so distance is the sum of the axis
# separations rather than the straight line.
a = miller_project(GeoPoint(-2.1337, 0.6609))
b = miller_project(GeoPoint(-2.1337 + 300.0 / EARTH_RADIUS_M, 0.6609))
straight = math.hypot(b.x - a.x, b.y - a.y)
print(f"straight-line distance: {straight:,.1f} m")
print(f"street-grid distance:   {manhattan(a, b):,.1f} m")
print()

# ============================================================
# Distance matrices for a whole scenario
# ============================================================

# Every pairwise distance a simulation needs is precomputed into three
# arrays: entry->lot, lot->lot, and lot->destination.
lots = [
    GeoPoint(-2.1337 + dx / EARTH_RADIUS_M, 0.6609)
    for dx in (0.0, 400.0, 900.0)
]
entries = [GeoPoint(-2.1337 - 200.0 / EARTH_RADIUS_M, 0.6609)]
destination = GeoPoint(-2.1337 + 1_100.0 / EARTH_RADIUS_M, 0.6609)

dm = build_distance_matrix(lots, entries, destination)
print("entry->lot meters:", [f"{d:,.0f}" for d in dm.entry_lot[0]])
print("lot->destination meters:", [f"{d:,.0f}" for d in dm.lot_dest])
print("lot->lot matrix:")
for row in dm.lot_lot:
    print("   ", [f"{d:,.0f}" for d in row])
