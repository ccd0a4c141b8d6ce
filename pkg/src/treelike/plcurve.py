"""Piecewise-linear paths in metric trees and in the plane."""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Sequence, Union

import numpy as np

from .exactnum import ONE, ZERO, Dyadic, Quad, cmp_sqrt_vs_quad, common_exponent, quad_sign, quad_sign_array
from .mtree import MetricTree, TreeLocation

__all__ = [
    "Point2",
    "OrderedTriangle",
    "TreePath",
    "PlanePath",
    "PlanarMap",
    "SupDistance",
    "eval_path",
    "map_path",
    "loop_concat_reverse",
    "sup_distance",
    "tree_sup_distance",
    "path_length",
    "density_check",
    "orientation",
]

D0 = Dyadic(0)
D1 = Dyadic(1)
DHALF = Dyadic(1, 1)


@dataclass(frozen=True)
class Point2:
    x: Dyadic
    y: Dyadic

    @classmethod
    def of(cls, x, y) -> "Point2":
        return cls(Dyadic.coerce(x) if not isinstance(x, str) else Dyadic.parse(x),
                   Dyadic.coerce(y) if not isinstance(y, str) else Dyadic.parse(y))

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scale(self, k: Dyadic) -> "Point2":
        return Point2(self.x * k, self.y * k)

    def midpoint(self, other: "Point2") -> "Point2":
        return Point2((self.x + other.x).half(), (self.y + other.y).half())

    def dot(self, other: "Point2") -> Dyadic:
        return self.x * other.x + self.y * other.y

    def sq_dist(self, other: "Point2") -> Dyadic:
        dx, dy = self.x - other.x, self.y - other.y
        return dx * dx + dy * dy

    def lerp(self, other: "Point2", lam: Dyadic) -> "Point2":
        return Point2(self.x + (other.x - self.x) * lam, self.y + (other.y - self.y) * lam)

    def __iter__(self):
        yield self.x
        yield self.y

    def __str__(self):
        return f"({self.x}, {self.y})"

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Point2":
        if isinstance(obj, dict):
            return cls(Dyadic.from_json(obj["x"]), Dyadic.from_json(obj["y"]))
        x, y = obj
        return cls(Dyadic.from_json(x), Dyadic.from_json(y))


def orientation(a: Point2, b: Point2, c: Point2) -> int:
    """+1 if ``a, b, c`` turn counterclockwise, -1 if clockwise, 0 if collinear."""
    return ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).sign()


@dataclass(frozen=True)
class OrderedTriangle:
    """Vertex-ordered isosceles right triangle with the right angle at ``b``."""

    a: Point2
    b: Point2
    c: Point2

    def problems(self) -> list[str]:
        out = []
        if (self.a - self.b).dot(self.c - self.b):
            out.append("legs are not perpendicular at b")
        if self.a.sq_dist(self.b) != self.c.sq_dist(self.b):
            out.append("legs have different lengths")
        if self.a == self.b:
            out.append("degenerate triangle")
        return out

    def leg_sq(self) -> Dyadic:
        return self.a.sq_dist(self.b)

    def contains(self, p: Point2) -> bool:
        o1 = orientation(self.a, self.b, p)
        o2 = orientation(self.b, self.c, p)
        o3 = orientation(self.c, self.a, p)
        return not ((o1 < 0 or o2 < 0 or o3 < 0) and (o1 > 0 or o2 > 0 or o3 > 0))

    def subdivide(self) -> tuple["OrderedTriangle", ...]:
        """The four half-size triangles, in the order the legs path visits them."""
        a, b, c = self.a, self.b, self.c
        d, e, f = a.midpoint(b), b.midpoint(c), a.midpoint(c)
        return (OrderedTriangle(a, d, f), OrderedTriangle(f, d, b),
                OrderedTriangle(b, e, f), OrderedTriangle(f, e, c))

    def to_json(self) -> list:
        return [self.a.to_json(), self.b.to_json(), self.c.to_json()]

    @classmethod
    def from_json(cls, obj) -> "OrderedTriangle":
        return cls(*(Point2.from_json(p) for p in obj))


def _check_params(params: Sequence[Dyadic]) -> None:
    if len(params) < 2:
        raise ValueError("a path needs at least two breakpoints")
    if params[0] != D0 or params[-1] != D1:
        raise ValueError("breakpoint parameters must start at 0 and end at 1")
    for s, t in zip(params, params[1:]):
        if not s < t:
            raise ValueError(f"breakpoint parameters not strictly increasing at {s}, {t}")


def _check_t(t: Dyadic) -> Dyadic:
    t = Dyadic.coerce(t)
    if t < D0 or t > D1:
        raise ValueError(f"parameter {t} outside [0, 1]")
    return t


class TreePath:
    """Path in a metric tree through vertex-valued breakpoints.

    Between breakpoints the path runs at constant speed along the geodesic
    arc joining the two vertices.  Paths built by the tower always step across
    a single edge per segment; coarser paths viewed inside a finer tree span
    several edges.  Equal consecutive vertices give a constant segment.
    """

    def __init__(self, tree: MetricTree, params: Sequence[Dyadic], vertices: Sequence[int]):
        params = [Dyadic.coerce(t) for t in params]
        _check_params(params)
        if len(params) != len(vertices):
            raise ValueError("params and vertices differ in length")
        for v in vertices:
            if v not in tree:
                raise ValueError(f"vertex {v} is not in the tree")
        self.tree = tree
        self.params = tuple(params)
        self.vertices = tuple(vertices)

    @property
    def breakpoints(self) -> list[tuple[Dyadic, int]]:
        return list(zip(self.params, self.vertices))

    def __len__(self):
        return len(self.params)

    def start(self) -> int:
        return self.vertices[0]

    def end(self) -> int:
        return self.vertices[-1]

    def single_edge_segments(self) -> bool:
        adj = self.tree.adjacent
        return all(adj(u, v) for u, v in zip(self.vertices, self.vertices[1:]))

    def eval(self, t: Dyadic) -> TreeLocation:
        t = _check_t(t)
        k = bisect_right(self.params, t) - 1
        if k == len(self.params) - 1 or self.params[k] == t:
            return TreeLocation(self.vertices[k], ZERO)
        r, s = self.params[k], self.params[k + 1]
        u, v = self.vertices[k], self.vertices[k + 1]
        if u == v:
            return TreeLocation(u, ZERO)
        lam = (t - r) / (s - r)
        tr = self.tree
        if tr.parent.get(u) == v:
            return tr.location(u, tr.length[u] * lam)
        if tr.parent.get(v) == u:
            return tr.location(v, tr.length[v] * (D1 - lam))
        return tr.point_on_arc(u, v, tr.distance(u, v) * lam)

    def reverse(self) -> "TreePath":
        return TreePath(self.tree, [D1 - t for t in reversed(self.params)],
                        list(reversed(self.vertices)))

    def on_tree(self, tree: MetricTree) -> "TreePath":
        """The same breakpoints read inside ``tree`` (e.g. a finer subdivision)."""
        return TreePath(tree, self.params, self.vertices)

    def __eq__(self, other):
        return (isinstance(other, TreePath) and self.params == other.params
                and self.vertices == other.vertices)

    def to_json(self) -> list:
        return [[t.to_json(), v] for t, v in zip(self.params, self.vertices)]

    @classmethod
    def from_json(cls, tree: MetricTree, obj) -> "TreePath":
        return cls(tree, [Dyadic.from_json(t) for t, _ in obj], [int(v) for _, v in obj])


class PlanePath:
    """Polygonal path in the plane, linear between breakpoints."""

    def __init__(self, params: Sequence[Dyadic], points: Sequence[Point2]):
        params = [Dyadic.coerce(t) for t in params]
        _check_params(params)
        if len(params) != len(points):
            raise ValueError("params and points differ in length")
        self.params = tuple(params)
        self.points = tuple(points)

    @classmethod
    def from_points(cls, points: Sequence[Point2]) -> "PlanePath":
        """Breakpoints at ``i/2**k`` for the smallest ``k`` with ``2**k >= segments``.

        The last segment absorbs the slack, so the spacing is even exactly
        when the segment count is a power of two.
        """
        n = len(points) - 1
        if n < 1:
            raise ValueError("a path needs at least two points")
        k = (n - 1).bit_length()
        return cls([Dyadic(i, k) for i in range(n)] + [D1], points)

    @property
    def breakpoints(self) -> list[tuple[Dyadic, Point2]]:
        return list(zip(self.params, self.points))

    def __len__(self):
        return len(self.params)

    def eval(self, t: Dyadic) -> Point2:
        t = _check_t(t)
        k = bisect_right(self.params, t) - 1
        if k == len(self.params) - 1 or self.params[k] == t:
            return self.points[k]
        r, s = self.params[k], self.params[k + 1]
        return self.points[k].lerp(self.points[k + 1], (t - r) / (s - r))

    def eval_many(self, ts: Sequence[Dyadic]) -> list[Point2]:
        """Evaluate at a nondecreasing sequence of parameters."""
        out = []
        k = 0
        last = len(self.params) - 1
        params, points = self.params, self.points
        for t in ts:
            while k < last and not t < params[k + 1]:
                k += 1
            if k == last or params[k] == t:
                out.append(points[k])
            else:
                r, s = params[k], params[k + 1]
                out.append(points[k].lerp(points[k + 1], (t - r) / (s - r)))
        return out

    def reverse(self) -> "PlanePath":
        return PlanePath([D1 - t for t in reversed(self.params)], list(reversed(self.points)))

    def segments(self) -> list[tuple[Point2, Point2]]:
        return list(zip(self.points, self.points[1:]))

    def __eq__(self, other):
        return (isinstance(other, PlanePath) and self.params == other.params
                and self.points == other.points)

    def to_json(self) -> dict:
        return {"breakpoints": [[t.to_json(), p.to_json()] for t, p in zip(self.params, self.points)]}

    @classmethod
    def from_json(cls, obj) -> "PlanePath":
        if isinstance(obj, dict):
            obj = obj["breakpoints"]
        return cls([Dyadic.from_json(t) for t, _ in obj], [Point2.from_json(p) for _, p in obj])


@dataclass
class PlanarMap:
    """A map from a metric tree to the plane, linear on every edge."""

    tree: MetricTree
    images: dict = field(default_factory=dict)
    lipschitz: Quad = ONE

    def __call__(self, v: int) -> Point2:
        return self.images[v]

    def image_of(self, loc: TreeLocation) -> Point2:
        p = self.images[loc.vertex]
        if not loc.offset:
            return p
        q = self.images[self.tree.parent[loc.vertex]]
        lam = loc.offset.exact_ratio(self.tree.length[loc.vertex])
        return p.lerp(q, lam)

    def lipschitz_violations(self) -> list[int]:
        """Edges (by child vertex) whose image is longer than ``lipschitz * length``."""
        bad = []
        for v, p, ln in self.tree.edges():
            sq = self.images[v].sq_dist(self.images[p])
            if cmp_sqrt_vs_quad(sq, self.lipschitz * ln) > 0:
                bad.append(v)
        return bad

    def non_isometric_edges(self) -> list[int]:
        """Edges whose Euclidean image length differs from the edge length."""
        bad = []
        for v, p, ln in self.tree.edges():
            sq = self.images[v].sq_dist(self.images[p])
            if cmp_sqrt_vs_quad(sq, ln) != 0:
                bad.append(v)
        return bad

    def copy(self) -> "PlanarMap":
        return PlanarMap(self.tree, dict(self.images), self.lipschitz)

    def to_json(self) -> dict:
        return {"images": [[v, self.images[v].to_json()] for v in sorted(self.images)],
                "lipschitz": self.lipschitz.to_json()}

    @classmethod
    def from_json(cls, tree: MetricTree, obj) -> "PlanarMap":
        images = {int(v): Point2.from_json(p) for v, p in obj["images"]}
        missing = set(tree.depth) - set(images)
        if missing:
            raise ValueError(f"planar map has no image for vertices {sorted(missing)[:5]}")
        return cls(tree, images, Quad.from_json(obj["lipschitz"]))


def eval_path(path: Union[TreePath, PlanePath], t: Dyadic):
    return path.eval(t)


def map_path(path: TreePath, g: PlanarMap) -> PlanePath:
    """``g`` composed with ``path`` as a polygonal path.

    A segment spanning several edges keeps a single plane segment when the
    images of the intermediate vertices sit at their arc-length positions;
    otherwise breakpoints are inserted at those vertices.
    """
    if path.tree is not g.tree:
        raise ValueError("path and map live on different trees")
    tree = path.tree
    params: list[Dyadic] = [path.params[0]]
    points: list[Point2] = [g(path.vertices[0])]
    for k in range(len(path.params) - 1):
        r, s = path.params[k], path.params[k + 1]
        u, v = path.vertices[k], path.vertices[k + 1]
        if u != v and not tree.adjacent(u, v):
            arc = tree.arc(u, v)
            total = tree.distance(u, v)
            pu, pv = g(u), g(v)
            acc = ZERO
            inner = []
            linear = True
            for x, y in zip(arc, arc[1:-1]):
                acc = acc + tree.edge_length(x, y)
                lam = acc.exact_ratio(total)
                inner.append((r + (s - r) * lam, y))
                if g(y) != pu.lerp(pv, lam):
                    linear = False
            if not linear:
                for t, y in inner:
                    params.append(t)
                    points.append(g(y))
        params.append(s)
        points.append(g(v))
    return PlanePath(params, points)


def loop_concat_reverse(first, second):
    """``first`` on [0, 1/2] followed by ``second`` run backwards on [1/2, 1]."""
    if isinstance(first, TreePath) != isinstance(second, TreePath):
        raise TypeError("cannot concatenate a tree path with a plane path")
    if isinstance(first, TreePath):
        if first.tree is not second.tree:
            raise ValueError("paths live on different trees")
        a_end, b_end = first.vertices[-1], second.vertices[-1]
        values_a, values_b = first.vertices, second.vertices
    else:
        a_end, b_end = first.points[-1], second.points[-1]
        values_a, values_b = first.points, second.points
    if a_end != b_end:
        raise ValueError("endpoint mismatch: first(1) != second(1)")
    params = [t.half() for t in first.params]
    values = list(values_a)
    for t, v in zip(reversed(second.params[:-1]), reversed(values_b[:-1])):
        params.append(D1 - t.half())
        values.append(v)
    if isinstance(first, TreePath):
        return TreePath(first.tree, params, values)
    return PlanePath(params, values)


def _union_params(*paths) -> list[Dyadic]:
    return sorted(set().union(*(p.params for p in paths)))


@dataclass(frozen=True)
class SupDistance:
    """Exact sup-distance between two polygonal paths.

    ``sq_value`` is the squared maximum pointwise distance, attained at
    parameter ``at``.  ``within_bound`` compares the (unsquared) distance to
    the bound passed to :func:`sup_distance`.
    """

    sq_value: Dyadic
    at: Dyadic
    within_bound: bool | None = None


def sup_distance(p: PlanePath, q: PlanePath, bound: Quad | None = None) -> SupDistance:
    # p(t) - q(t) is linear on each piece of the common refinement, so its
    # norm is convex there and peaks at a breakpoint of p or q.
    ts = _union_params(p, q)
    best, at = D0, ts[0]
    for t, x, y in zip(ts, p.eval_many(ts), q.eval_many(ts)):
        d = x.sq_dist(y)
        if best < d:
            best, at = d, t
    within = None if bound is None else cmp_sqrt_vs_quad(best, bound) <= 0
    return SupDistance(best, at, within)


def tree_sup_distance(p: TreePath, q: TreePath) -> tuple[Quad, Dyadic]:
    """Exact sup over t of the tree distance between ``p(t)`` and ``q(t)``.

    Both paths move along geodesics between breakpoints and a tree is CAT(0),
    so the distance is convex on each piece of the common refinement.
    """
    if p.tree is not q.tree:
        raise ValueError("paths live on different trees")
    tree = p.tree
    best, at = ZERO, D0
    for t in _union_params(p, q):
        d = tree.geodesic_distance(p.eval(t), q.eval(t))
        if quad_sign(d - best) > 0:
            best, at = d, t
    return best, at


def segment_length(u: Point2, v: Point2) -> Quad:
    dx, dy = abs(u.x - v.x), abs(u.y - v.y)
    if not dx or not dy:
        return Quad(dx + dy)
    if dx == dy:
        return Quad(D0, dx)
    raise ValueError(f"segment {u} -> {v} is neither axis-parallel nor diagonal")


def path_length(p: PlanePath) -> Quad:
    total = ZERO
    for u, v in p.segments():
        total = total + segment_length(u, v)
    return total


def _int_dtype(max_abs: int):
    return np.int64 if max_abs < (1 << 62) else object


def density_check(samples: Iterable[Point2], triangle: OrderedTriangle, radius: Quad,
                  grid: int) -> bool:
    """True iff every grid point of pitch ``1/2**grid`` in the closed triangle
    lies within ``radius`` of some sample."""
    return not _uncovered(samples, triangle, radius, grid)


def _uncovered(samples, triangle: OrderedTriangle, radius: Quad, grid: int,
               limit: int = 10) -> list[Point2]:
    radius = Quad.coerce(radius)
    if quad_sign(radius) <= 0:
        raise ValueError("radius must be positive")
    if grid < 0:
        raise ValueError("grid exponent must be nonnegative")
    samples = list(set(samples))
    corners = (triangle.a, triangle.b, triangle.c)
    coords = [c for p in samples + list(corners) for c in p]
    K = max(grid, common_exponent(coords), common_exponent([radius]))
    pitch = 1 << (K - grid)

    xs = [c.x.scaled(K) for c in corners]
    ys = [c.y.scaled(K) for c in corners]
    i0, i1 = -((-min(xs)) // pitch), max(xs) // pitch
    j0, j1 = -((-min(ys)) // pitch), max(ys) // pitch
    gi = np.arange(i0, i1 + 1, dtype=object)[:, None] * pitch
    gj = np.arange(j0, j1 + 1, dtype=object)[None, :] * pitch
    gi, gj = np.broadcast_arrays(gi, gj)

    def orient(k1, k2):
        return np.sign((xs[k2] - xs[k1]) * (gj - ys[k1]) - (ys[k2] - ys[k1]) * (gi - xs[k1]))

    o1, o2, o3 = orient(0, 1), orient(1, 2), orient(2, 0)
    inside = ~(((o1 < 0) | (o2 < 0) | (o3 < 0)) & ((o1 > 0) | (o2 > 0) | (o3 > 0)))
    covered = np.zeros(inside.shape, dtype=bool)

    P, Q = radius.rat.scaled(K), radius.irr.scaled(K)
    r_up = P + (isqrt(2 * Q * Q) + 1 if Q > 0 else 0)
    w = r_up // pitch + 2
    if samples:
        mag = max(abs(v) for v in [*(p.x.scaled(K) for p in samples), *(p.y.scaled(K) for p in samples),
                                    P, Q, *(x for x in xs), *(y for y in ys)]) + (w + 2) * pitch
        dtype = _int_dtype(64 * mag ** 4)
        sx = np.array([p.x.scaled(K) for p in samples], dtype=dtype)
        sy = np.array([p.y.scaled(K) for p in samples], dtype=dtype)
        bi, bj = sx // pitch, sy // pitch
        rr = P * P + 2 * Q * Q
        cross = 2 * P * Q
        for di in range(-w, w + 2):
            ii = bi + di
            okx = (ii >= i0) & (ii <= i1)
            dx = ii * pitch - sx
            for dj in range(-w, w + 2):
                jj = bj + dj
                ok = okx & (jj >= j0) & (jj <= j1)
                if not ok.any():
                    continue
                dy = jj * pitch - sy
                d2 = dx * dx + dy * dy
                a = rr - d2
                if cross:
                    within = quad_sign_array(a, np.full_like(a, cross)) >= 0
                else:
                    within = a >= 0
                hit = ok & within
                if hit.any():
                    covered[(ii[hit] - i0).astype(np.int64), (jj[hit] - j0).astype(np.int64)] = True
    bad = np.argwhere(inside & ~covered)
    return [Point2(Dyadic(int(i0 + i), grid), Dyadic(int(j0 + j), grid)) for i, j in bad[:limit]]
