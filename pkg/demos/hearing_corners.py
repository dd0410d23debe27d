# Recovering shape from the bounce language alone.
#
# The oracle answers "is this word heard?" and nothing else; everything below
# is computed from those answers.

import math

from bouncespec.geometry import l_shape, regular_polygon, rhombus, triangle_from_angles
from bouncespec.reconstruction import (PolygonOracle, adjacency_pairs, detect_right_angle,
                                       estimate_angle, reconstruct_triangle)

# which edges touch, L-shaped table: C and D meet at the reflex corner
L = PolygonOracle(l_shape())
res = adjacency_pairs(L, 6)
print("L-shape adjacency:", sorted("".join(sorted(p)) for p in res.pairs))
print("cyclic order:", res.cyclic_order, "|", res.certified())

# right angles show up as arbitrarily deep palindromes around the corner
R = PolygonOracle(rhombus(math.pi / 3))
for pair in [("A", "B"), ("B", "C")]:
    print("rhombus corner", pair, "right?", detect_right_angle(R, *pair, 6))

# rational corners are read off exactly
for name, oracle, pair in [("rhombus", R, ("A", "B")),
                           ("equilateral", PolygonOracle(regular_polygon(3)), ("A", "B")),
                           ("L reflex", L, ("C", "D"))]:
    e = estimate_angle(oracle, *pair, 8)
    print("%-12s %s" % (name, e.describe()))

# an irrational corner gets an estimate; a deep enough oracle can also
# mistake it for a nearby rational, certified only to that depth
T = PolygonOracle(triangle_from_angles(1.3, 0.9))
for d in (4, 6, 8):
    e = estimate_angle(T, "C", "A", d)
    print("corner 1.3 rad at depth %d: %s  (error %.4f)" % (d, e.describe(), abs(e.value - 1.3)))

# triangles are pinned down by their angles
tri = reconstruct_triangle(PolygonOracle(triangle_from_angles(math.pi / 2, math.pi / 3)), 6)
print("triangle angles:", ["%.6f" % a for a in tri.angles])
