from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from treelike.construct import build_tower, init_level1
from treelike.exactnum import SQRT2, ZERO, Dyadic, Quad, cmp_sqrt_vs_quad
from treelike.mtree import TreeLocation
from treelike.plcurve import (OrderedTriangle, PlanarMap, PlanePath, Point2, TreePath, density_check,
                              loop_concat_reverse, map_path, orientation, path_length, segment_length,
                              sup_distance, tree_sup_distance)

from conftest import dy, frac, pt, small_dyadics

a, b, c = pt(0, 0), pt(0, 1), pt(1, 1)
d, e, f = pt(0, "1/2"), pt("1/2", 1), pt("1/2", "1/2")


@pytest.fixture(scope="module")
def levels():
    return build_tower(3)


points = st.builds(Point2, small_dyadics, small_dyadics)


@st.composite
def plane_paths(draw):
    k = draw(st.integers(0, 3))
    pts = draw(st.lists(points, min_size=2 ** k + 1, max_size=2 ** k + 1))
    return PlanePath.from_points(pts)


params = st.builds(lambda n, e: Dyadic(n, e), st.integers(0, 64), st.just(6))


# -- evaluation ---------------------------------------------------------------

def test_eval_examples(levels):
    lv1, lv2 = levels[0], levels[1]
    assert lv1.pi.eval(dy("1/2")) == TreeLocation(1)
    assert lv2.curve.eval(dy("1/4")) == f
    assert lv2.curve.eval(dy("1/16")) == pt(0, "1/4")
    with pytest.raises(ValueError):
        lv2.curve.eval(dy("5/4"))
    with pytest.raises(ValueError):
        lv1.pi.eval(dy(-1))


def test_tree_path_eval_on_edges():
    E = init_level1().E
    p = TreePath(E, [dy(0), dy("1/2"), dy(1)], [0, 1, 2])
    assert p.eval(dy("1/4")) == TreeLocation(1, Quad(dy("1/2")))
    assert p.eval(dy("3/4")) == TreeLocation(2, Quad(dy("1/2")))
    # a segment spanning two edges moves along the arc at constant speed
    q = TreePath(E, [dy(0), dy(1)], [0, 2])
    assert q.eval(dy("1/2")) == TreeLocation(1)
    assert q.eval(dy("1/4")) == TreeLocation(1, Quad(dy("1/2")))


def test_tree_path_validation():
    E = init_level1().E
    with pytest.raises(ValueError):
        TreePath(E, [dy(0), dy("1/2")], [0, 1])
    with pytest.raises(ValueError):
        TreePath(E, [dy(0), dy("1/2"), dy("1/2"), dy(1)], [0, 1, 1, 2])
    with pytest.raises(ValueError):
        TreePath(E, [dy(0), dy(1)], [0, 9])


def test_map_path_examples(levels):
    lv1, lv2 = levels[0], levels[1]
    alpha = map_path(lv1.pi, lv1.g)
    assert alpha.params == (dy(0), dy("1/2"), dy(1)) and alpha.points == (a, b, c)
    beta = map_path(lv1.pit, lv1.gt)
    assert beta.params == (dy(0), dy(1)) and beta.points == (a, c)
    gamma2 = map_path(lv2.pi, lv2.g)
    assert gamma2.params == tuple(Dyadic(k, 3) for k in range(9))
    assert gamma2.points == (a, d, f, d, b, e, f, e, c)
    with pytest.raises(ValueError):
        map_path(lv1.pi, lv2.g)


def test_map_path_inserts_vertices_when_image_bends(levels):
    lv2 = levels[1]
    # pi_1 read in E_2 jumps v0 -> v1/2 across u1; g_2 is linear there
    p = lv2.pi.__class__(lv2.E, levels[0].pi.params, levels[0].pi.vertices)
    assert map_path(p, lv2.g).points == (a, b, c)
    # a path from w1 to w2 passes the bend at u1 -> v1/2 -> u2
    w1, w2 = lv2.new_leaves[0]
    bent = TreePath(lv2.E, [dy(0), dy(1)], [w1, w2])
    img = map_path(bent, lv2.g)
    assert len(img.points) > 2 and img.points[0] == f and img.points[-1] == f


@given(params)
def test_map_then_eval_commutes(t):
    lv = build_tower(3)[2]
    assert lv.curve.eval(t) == lv.g.image_of(lv.pi.eval(t))
    assert lv.curve_t.eval(t) == lv.gt.image_of(lv.pit.eval(t))


# -- concatenation ------------------------------------------------------------

def test_loop_concat_reverse_examples(levels):
    lv1, lv2 = levels[0], levels[1]
    alpha, beta = lv1.curve, lv1.curve_t
    aa = loop_concat_reverse(alpha, alpha)
    assert aa.points == (a, b, c, b, a)
    ab = loop_concat_reverse(alpha, beta)
    assert ab.points == (a, b, c, a)
    assert ab.params == (dy(0), dy("1/4"), dy("1/2"), dy(1))
    tl = loop_concat_reverse(lv1.pi.on_tree(lv2.E), lv2.pi)
    assert len(tl.params) == 11
    with pytest.raises(ValueError):
        loop_concat_reverse(alpha, PlanePath.from_points([a, b]))
    with pytest.raises(TypeError):
        loop_concat_reverse(alpha, lv1.pi)


@given(plane_paths())
def test_reverse_involution(p):
    assert p.reverse().reverse() == p
    for t in (dy(0), dy("1/4"), dy("1/2"), dy(1)):
        assert p.reverse().eval(dy(1) - t) == p.eval(t)


@given(plane_paths(), plane_paths())
def test_concat_endpoints(p, q):
    q = PlanePath(q.params, q.points[:-1] + (p.points[-1],))
    loop = loop_concat_reverse(p, q)
    assert loop.eval(dy(0)) == p.eval(dy(0))
    assert loop.eval(dy(1)) == q.eval(dy(0))
    assert loop.eval(dy("1/2")) == p.eval(dy(1))


# -- sup distance ---------------------------------------------------------------

def test_sup_distance_examples(levels):
    lv1, lv2 = levels[0], levels[1]
    sd = sup_distance(lv1.curve, lv1.curve_t, SQRT2)
    assert sd.sq_value == dy("1/2") and sd.at == dy("1/2") and sd.within_bound
    assert lv1.curve.eval(sd.at) == b and lv1.curve_t.eval(sd.at) == f
    assert sup_distance(lv1.curve, lv1.curve).sq_value == Dyadic(0)
    sd2 = sup_distance(lv2.curve, lv2.curve_t, SQRT2.half())
    assert sd2.sq_value == dy("1/8") and sd2.within_bound


def brute_sup_sq(p, q, steps=256):
    """Max squared distance on a fine uniform grid, in exact fractions."""
    def at(path, t):
        k = max(i for i, s in enumerate(path.params) if frac(s) <= t)
        if k == len(path.params) - 1:
            P = path.points[k]
            return frac(P.x), frac(P.y)
        r, s = frac(path.params[k]), frac(path.params[k + 1])
        lam = (t - r) / (s - r)
        P, Q = path.points[k], path.points[k + 1]
        return (frac(P.x) + lam * (frac(Q.x) - frac(P.x)), frac(P.y) + lam * (frac(Q.y) - frac(P.y)))
    best = Fraction(0)
    for i in range(steps + 1):
        t = Fraction(i, steps)
        (x1, y1), (x2, y2) = at(p, t), at(q, t)
        best = max(best, (x1 - x2) ** 2 + (y1 - y2) ** 2)
    return best


@given(plane_paths(), plane_paths())
def test_sup_distance_matches_dense_oracle(p, q):
    # every breakpoint is a multiple of 1/8, so the 1/256 grid contains them all
    assert frac(sup_distance(p, q).sq_value) == brute_sup_sq(p, q)


def _sqrt_le_sum(A, B, C) -> bool:
    # sqrt(A) <= sqrt(B) + sqrt(C), exactly
    lhs = A - B - C
    return lhs <= 0 or lhs * lhs <= 4 * B * C


@given(plane_paths(), plane_paths(), plane_paths())
def test_sup_distance_triangle_inequality(p, q, r):
    A = frac(sup_distance(p, r).sq_value)
    B = frac(sup_distance(p, q).sq_value)
    C = frac(sup_distance(q, r).sq_value)
    assert _sqrt_le_sum(A, B, C)


def test_tree_sup_distance(levels):
    lv1, lv2 = levels[0], levels[1]
    dist, at = tree_sup_distance(lv1.pi.on_tree(lv2.E), lv2.pi)
    assert dist == Quad(dy("1/2"))
    assert lv2.pi.eval(at).vertex in lv2.new_leaves[0]
    assert tree_sup_distance(lv2.pi, lv2.pi)[0] == ZERO


# -- lengths and density ---------------------------------------------------------

def test_path_length_examples(levels):
    assert path_length(levels[0].curve) == Quad(2)
    assert path_length(levels[0].curve_t) == SQRT2
    assert path_length(levels[2].curve) == Quad(8)
    with pytest.raises(ValueError):
        path_length(PlanePath.from_points([a, pt(2, 1)]))
    assert segment_length(a, pt(-3, 3)) == Quad(0, 3)


def test_path_length_matches_direct_summation(levels):
    import math
    lv = levels[2]
    total = sum(math.dist((float(p.x), float(p.y)), (float(q.x), float(q.y))) for p, q in lv.curve_t.segments())
    assert abs(total - float(path_length(lv.curve_t))) < 1e-12


def brute_uncovered(samples, radius_sq_bound, grid):
    """Grid points of the closed triangle abc not within radius of any sample.

    ``radius_sq_bound(d2)`` decides whether squared distance d2 is within radius.
    """
    n = 2 ** grid
    out = []
    for i, j in product(range(n + 1), repeat=2):
        x, y = Fraction(i, n), Fraction(j, n)
        if x > y:
            continue
        if not any(radius_sq_bound((x - frac(s.x)) ** 2 + (y - frac(s.y)) ** 2) for s in samples):
            out.append((x, y))
    return out


def test_density_examples(levels):
    T = OrderedTriangle(a, b, c)
    assert density_check(levels[1].curve.points, T, SQRT2.half(), 4)
    assert not density_check([a, b, c], T, Quad(dy("1/4")), 4)
    missed = brute_uncovered([a, b, c], lambda d2: d2 <= Fraction(1, 16), 4)
    assert (Fraction(1, 2), Fraction(3, 4)) in missed
    assert density_check([a], T, SQRT2, 3)
    with pytest.raises(ValueError):
        density_check([a], T, ZERO, 3)


@given(st.lists(st.builds(Point2, st.builds(Dyadic, st.integers(0, 8), st.just(3)),
                          st.builds(Dyadic, st.integers(0, 8), st.just(3))), min_size=1, max_size=6),
       st.sampled_from([Quad(dy("1/4")), SQRT2.half(2), Quad(dy("1/8"), dy("1/8"))]))
def test_density_matches_brute_force(samples, radius):
    T = OrderedTriangle(a, b, c)
    within = lambda d2: cmp_sqrt_vs_quad(Dyadic.from_fraction(d2), radius) <= 0
    assert density_check(samples, T, radius, 3) == (not brute_uncovered(samples, within, 3))


# -- triangles and maps -------------------------------------------------------------

def test_ordered_triangle():
    T = OrderedTriangle(a, b, c)
    assert T.problems() == []
    assert [t.problems() for t in T.subdivide()] == [[], [], [], []]
    assert T.subdivide() == (OrderedTriangle(a, d, f), OrderedTriangle(f, d, b),
                             OrderedTriangle(b, e, f), OrderedTriangle(f, e, c))
    assert OrderedTriangle(a, c, b).problems()
    assert T.contains(f) and T.contains(a) and not T.contains(pt(1, 0))
    assert orientation(a, b, c) == -1


def test_planar_map_lipschitz():
    lv1 = init_level1()
    g = lv1.g.copy()
    assert g.lipschitz_violations() == [] and g.non_isometric_edges() == []
    g.images[2] = pt(2, 2)
    assert g.lipschitz_violations() == [2]
    g.images[2] = pt("1/2", 1)
    assert g.lipschitz_violations() == [] and g.non_isometric_edges() == [2]
    back = PlanarMap.from_json(lv1.E, lv1.g.to_json())
    assert back.images == lv1.g.images


def test_plane_path_json_round_trip(levels):
    p = levels[1].curve
    assert PlanePath.from_json(p.to_json()) == p
    t = levels[1].pi
    assert TreePath.from_json(levels[1].E, t.to_json()) == t


def test_from_points_spacing():
    p = PlanePath.from_points([a, b, c, a])
    assert p.params == (dy(0), dy("1/4"), dy("1/2"), dy(1))
    q = PlanePath.from_points([a, b, c, b, a])
    assert q.params == tuple(Dyadic(k, 2) for k in range(5))
    with pytest.raises(ValueError):
        PlanePath.from_points([a])
