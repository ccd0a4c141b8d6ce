"""Deciding small polygonal loops and checking hand-made height functions.

``python demos/polygonal_loops.py``
"""
from treelike import Dyadic, HeightFunction, PlanePath, decide_polygonal_loop, quotient_dendrite, verify_height_function
from treelike.plcurve import Point2

a, b, c = Point2.of(0, 0), Point2.of(0, 1), Point2.of(1, 1)

# %% out and back along the legs cancels to nothing
legs = PlanePath.from_points([a, b, c, b, a])
v = decide_polygonal_loop(legs, refine=2)
print(v.kind, "- peak height", max(v.witness["height"].values))

# %% the triangle does not cancel and encloses area
v = decide_polygonal_loop(PlanePath.from_points([a, b, c, a]))
print(v.kind, "- witness", v.witness)

# %% a loop that crosses itself is outside what the decision handles
try:
    decide_polygonal_loop(PlanePath.from_points([a, c, Point2.of(1, 0), b, a]))
except ValueError as exc:
    print("rejected:", exc)

# %% a constant height cannot work for a loop that moves
zero = HeightFunction.of([(0, 0), (1, 0)])
rep = verify_height_function(legs, zero)
print(f"h = 0: {rep.violation_count} violations, first at {rep.violations[0][:2]}")

# %% two peaks give a Y-shaped quotient
two = HeightFunction.of([(0, 0), ("1/4", 1), ("1/2", "1/2"), ("3/4", 1), (1, 0)])
q = quotient_dendrite(two)
print("Y tree edges:", [(v, p, str(ln)) for v, p, ln in q.tree.edges()])
print("distance between the peaks:", q.distance(Dyadic(1, 2), Dyadic(3, 2)))
