"""Why alpha and beta are each tree-like equivalent to gamma_n but not to each other.

``python demos/certificates.py``
"""
from treelike import (Dyadic, build_tower, decide_polygonal_loop, height_from_tree_path, loop_concat_reverse,
                      quotient_dendrite, verify_height_function, winding_number)
from treelike.checks import certificate_loops
from treelike.plcurve import Point2

levels = build_tower(4)

# %% alpha * rev(gamma_n) is the image of a loop in the tree E_n, so the
# distance from its base point is a height function for it
for n in range(1, 5):
    for name, tree_loop, plane_loop, L in certificate_loops(levels, n):
        h = height_from_tree_path(tree_loop, L)
        rep = verify_height_function(plane_loop, h, refine=1)
        print(f"n={n} {name}: {rep.pairs_checked} pairs, {rep.violation_count} violations, "
              f"smallest squared slack {rep.min_slack}")

# %% the smallest slack is exactly zero: the inequality is tight wherever the
# loop backtracks along a leaf edge.  At level 2 the loop sits on the far
# leaf w2 at t = 5/8, two edges from the base point
name, tree_loop, plane_loop, L = certificate_loops(levels, 2)[0]
h = height_from_tree_path(tree_loop, L)
print("h(5/8) =", h.eval(Dyadic(5, 3)), "  h(1/4) =", h.eval(Dyadic(1, 2)))

# %% the quotient of [0, 1] by the height function rebuilds a tree
q = quotient_dendrite(h)
print(f"quotient tree: {len(q.tree.vertices)} vertices, {q.tree.n_edges} edges")

# %% alpha * rev(beta) is the boundary of the triangle: a simple closed curve
loop = loop_concat_reverse(levels[0].curve, levels[0].curve_t)
verdict = decide_polygonal_loop(loop)
print(verdict.kind, "-", verdict.reason)
print("winding number about (1/4, 5/8):", winding_number(loop, Point2.of("1/4", "5/8")))
