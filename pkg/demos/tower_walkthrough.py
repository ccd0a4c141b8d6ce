"""Walk through the first few levels of the tower and draw them.

Run with ``python demos/tower_walkthrough.py``; figures land in the current directory.
"""
from treelike import SQRT2, build_tower, path_length, sup_distance
from treelike.render import render_svg

levels = build_tower(5)

# %% level 1: two legs a->b->c in E_1, one hypotenuse a->c in Et_1
lv1 = levels[0]
print("alpha:", *lv1.curve.points)
print("beta: ", *lv1.curve_t.points)

# %% each step doubles the number of legs and quadruples the triangles
for lv in levels:
    print(f"n={lv.n}: E has {lv.E.n_edges} edges, Et has {lv.Et.n_edges}, "
          f"{len(lv.triangles)} triangles, length of g o pi = {path_length(lv.curve)}")

# the level-2 curve visits the edge midpoints d, e, f
print("gamma_2:", *levels[1].curve.points)

# %% the two curves of a level stay within sqrt(2)/2**(n-1) of each other
for lv in levels:
    gap = sup_distance(lv.curve, lv.curve_t, SQRT2.half(lv.n - 1))
    print(f"n={lv.n}: squared gap {gap.sq_value} at t={gap.at}, within bound: {gap.within_bound}")

# %% collapsing the new leaves moves points by exactly one edge length
for lv in levels[:-1]:
    rho, rho_t = lv.retraction_from_next
    print(f"{lv.n + 1} -> {lv.n}: displacement {rho.sup_displacement()} and {rho_t.sup_displacement()}")

# %% figures: curves in blue and red, then both trees
with open("tower_level2.svg", "w") as fh:
    fh.write(render_svg(levels, 2, ["gamma_n", "gamma_t_n", "trees"]))
with open("tower_level5.svg", "w") as fh:
    fh.write(render_svg(levels, 5, ["gamma_n"], scale=600))
print("wrote tower_level2.svg and tower_level5.svg")
