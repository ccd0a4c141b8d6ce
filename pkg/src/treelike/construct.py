"""The triangle subdivision step and the tower of trees, paths and planar maps.

Level ``n`` holds two metric trees ``E`` (legs side) and ``Et`` (hypotenuse
side), paths ``pi`` and ``pit`` into them, 1-Lipschitz maps ``g`` and ``gt``
to the plane, and the ordered list of ``4**(n-1)`` triangles that the four
maps parameterize one interval at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .exactnum import ONE, SQRT2, Dyadic, Quad
from .mtree import MetricTree, Retraction, TreeLocation, leaf_collapse_retraction
from .plcurve import OrderedTriangle, PlanarMap, PlanePath, Point2, TreePath, map_path

__all__ = [
    "TowerLevel",
    "LevelBuilder",
    "ParameterizationReport",
    "init_level1",
    "subdivide_interval",
    "subdivide_level",
    "build_tower",
    "check_parameterization",
    "interval_bounds",
    "leg_length",
    "hyp_length",
]

D0 = Dyadic(0)
D1 = Dyadic(1)

A = Point2.of(0, 0)
B = Point2.of(0, 1)
C = Point2.of(1, 1)


def leg_length(n: int) -> Quad:
    """Edge length of ``E_n``: 1/2**(n-1)."""
    return ONE.half(n - 1)


def hyp_length(n: int) -> Quad:
    """Edge length of ``Et_n``: sqrt(2)/2**(n-1)."""
    return SQRT2.half(n - 1)


def interval_bounds(n: int, i: int) -> tuple[Dyadic, Dyadic]:
    """Parameter interval of triangle ``i`` (1-based) at level ``n``."""
    k = 2 * (n - 1)
    return Dyadic(i - 1, k), Dyadic(i, k)


@dataclass(frozen=True)
class TowerLevel:
    n: int
    E: MetricTree
    Et: MetricTree
    pi: TreePath
    pit: TreePath
    g: PlanarMap
    gt: PlanarMap
    triangles: tuple
    # (rho, rho_tilde) from level n+1 back onto this level, once built
    retraction_from_next: tuple[Retraction, Retraction] | None = field(default=None, compare=False)
    new_leaves: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())

    @cached_property
    def curve(self) -> PlanePath:
        """``g o pi``."""
        return map_path(self.pi, self.g)

    @cached_property
    def curve_t(self) -> PlanePath:
        """``gt o pit``."""
        return map_path(self.pit, self.gt)

    @cached_property
    def _index(self) -> tuple[dict, dict]:
        return ({t: k for k, t in enumerate(self.pi.params)},
                {t: k for k, t in enumerate(self.pit.params)})

    @property
    def n_intervals(self) -> int:
        return 4 ** (self.n - 1)


def init_level1() -> TowerLevel:
    E = MetricTree(root=0)
    v_half = E.add_child(0, ONE)
    v_one = E.add_child(v_half, ONE)
    Et = MetricTree(root=0)
    vt_one = Et.add_child(0, SQRT2)
    pi = TreePath(E, [D0, Dyadic(1, 1), D1], [0, v_half, v_one])
    pit = TreePath(Et, [D0, D1], [0, vt_one])
    g = PlanarMap(E, {0: A, v_half: B, v_one: C}, ONE)
    gt = PlanarMap(Et, {0: A, vt_one: C}, ONE)
    return TowerLevel(1, E, Et, pi, pit, g, gt, (OrderedTriangle(A, B, C),))


@dataclass
class ParameterizationReport:
    """Outcome of the three parameterization conditions on one interval."""

    index: int
    interval: tuple[Dyadic, Dyadic]
    injective: bool = True
    corners: bool = True
    linear: bool = True
    witnesses: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.injective and self.corners and self.linear

    def fail(self, condition: str, msg: str) -> None:
        setattr(self, condition, False)
        self.witnesses.append(f"{condition}: {msg}")


def _slice(params, lo, hi) -> range:
    from bisect import bisect_left, bisect_right
    return range(bisect_left(params, lo), bisect_right(params, hi))


def _expand_arc(tree: MetricTree, verts) -> list[int]:
    out = [verts[0]]
    for u, v in zip(verts, verts[1:]):
        if u == v:
            out.append(v)
        elif tree.adjacent(u, v):
            out.append(v)
        else:
            out.extend(tree.arc(u, v)[1:])
    return out


def _linear_on(path: PlanePath, lo: Dyadic, hi: Dyadic, p: Point2, q: Point2) -> str | None:
    for k in _slice(path.params, lo, hi):
        t = path.params[k]
        want = p.lerp(q, (t - lo) / (hi - lo))
        if path.points[k] != want:
            return f"image at t={t} is {path.points[k]}, linear interpolation gives {want}"
    return None


def check_parameterization(level: TowerLevel, i: int) -> ParameterizationReport:
    """Check that the level's four maps parameterize triangle ``i`` on its interval."""
    if not 1 <= i <= len(level.triangles):
        raise IndexError(f"triangle index {i} out of range")
    r, s = interval_bounds(level.n, i)
    mid = (r + s).half()
    tri = level.triangles[i - 1]
    rep = ParameterizationReport(i, (r, s))
    idx, idx_t = level._index

    # (1) injectivity and vertex conditions
    for t in (r, mid, s):
        if t not in idx:
            rep.fail("injective", f"pi({t}) is not a breakpoint vertex")
    for t in (r, s):
        if t not in idx_t:
            rep.fail("injective", f"pit({t}) is not a breakpoint vertex")
    for name, path in (("pi", level.pi), ("pit", level.pit)):
        rng = _slice(path.params, r, s)
        verts = _expand_arc(path.tree, [path.vertices[k] for k in rng])
        if len(set(verts)) != len(verts):
            rep.fail("injective", f"{name} revisits a vertex on [{r}, {s}]: {verts}")
    if not rep.injective:
        return rep

    # (2) corner images
    gpi = level.g(level.pi.vertices[idx[r]]), level.g(level.pi.vertices[idx[mid]]), \
        level.g(level.pi.vertices[idx[s]])
    gpit = level.gt(level.pit.vertices[idx_t[r]]), level.gt(level.pit.vertices[idx_t[s]])
    for label, got, want in (("g pi(r)", gpi[0], tri.a), ("g pi(mid)", gpi[1], tri.b),
                             ("g pi(s)", gpi[2], tri.c), ("gt pit(r)", gpit[0], tri.a),
                             ("gt pit(s)", gpit[1], tri.c)):
        if got != want:
            rep.fail("corners", f"{label} = {got}, expected {want}")

    # (3) linearity on the two legs and on the hypotenuse
    for path, lo, hi, p, q in ((level.curve, r, mid, tri.a, tri.b),
                               (level.curve, mid, s, tri.b, tri.c),
                               (level.curve_t, r, s, tri.a, tri.c)):
        msg = _linear_on(path, lo, hi, p, q)
        if msg:
            rep.fail("linear", msg)
    return rep


class LevelBuilder:
    """Level ``n+1`` under construction from a finished level ``n``.

    Call :meth:`subdivide_interval` for every interval in order, then
    :meth:`finish`.  Vertex ids are allocated in interval order, so the result
    is deterministic.
    """

    def __init__(self, level: TowerLevel):
        self.old = level
        self.E = level.E.copy()
        self.Et = level.Et.copy()
        self.g = dict(level.g.images)
        self.gt = dict(level.gt.images)
        self.pi: list[tuple[Dyadic, int]] = []
        self.pit: list[tuple[Dyadic, int]] = []
        self.triangles: list[OrderedTriangle] = []
        self.leaves: list[int] = []
        self.leaves_t: list[int] = []
        self._done = 0

    def _ensure(self, tree: MetricTree, images: dict, loc: TreeLocation) -> int:
        # locate the point on the current (possibly already split) edge
        v, off = loc.vertex, loc.offset
        while off and not (off - tree.length[v]).sign() < 0:
            off = off - tree.length[v]
            v = tree.parent[v]
        if not off:
            return v
        p = tree.parent[v]
        lam = off.exact_ratio(tree.length[v])
        w = tree.subdivide(v, lam)
        images[w] = images[v].lerp(images[p], lam)
        return w

    def subdivide_interval(self, i: int) -> None:
        if i != self._done + 1:
            raise ValueError(f"intervals must be subdivided in order; expected {self._done + 1}, got {i}")
        old = self.old
        rep = check_parameterization(old, i)
        if not rep.passed:
            raise ValueError(f"interval {i} is not parameterized: {rep.witnesses}")
        r, s = interval_bounds(old.n, i)
        q1, mid, q3 = (r * 3 + s).half(2), (r + s).half(), (r + s * 3).half(2)
        sp = [(r * (8 - k) + s * k).half(3) for k in range(9)]
        tri = old.triangles[i - 1]
        f = tri.a.midpoint(tri.c)

        # legs side
        v_r = old.pi.eval(r).vertex
        v_m = old.pi.eval(mid).vertex
        v_s = old.pi.eval(s).vertex
        u1 = self._ensure(self.E, self.g, old.pi.eval(q1))
        u2 = self._ensure(self.E, self.g, old.pi.eval(q3))
        half_leg = old.E.distance(v_r, v_m).half()
        w1 = self.E.add_child(u1, half_leg)
        self.g[w1] = f
        w2 = self.E.add_child(u2, half_leg)
        self.g[w2] = f
        self.leaves += [w1, w2]
        for t, v in zip(sp[:8], (v_r, u1, w1, u1, v_m, u2, w2, u2)):
            self.pi.append((t, v))

        # hypotenuse side
        vt_r = old.pit.eval(r).vertex
        vt_s = old.pit.eval(s).vertex
        ut = self._ensure(self.Et, self.gt, old.pit.eval(mid))
        wt = self.Et.add_child(ut, old.Et.distance(vt_r, vt_s).half())
        self.gt[wt] = tri.b
        self.leaves_t.append(wt)
        for t, v in zip(sp[0:8:2], (vt_r, ut, wt, ut)):
            self.pit.append((t, v))

        self.triangles.extend(tri.subdivide())
        self._done = i
        self._last = (v_s, vt_s)

    def finish(self) -> tuple[TowerLevel, TowerLevel]:
        """Return ``(old level with retractions attached, new level)``."""
        if self._done != self.old.n_intervals:
            raise ValueError("not every interval has been subdivided")
        v_end, vt_end = self._last
        pi = TreePath(self.E, [t for t, _ in self.pi] + [D1], [v for _, v in self.pi] + [v_end])
        pit = TreePath(self.Et, [t for t, _ in self.pit] + [D1], [v for _, v in self.pit] + [vt_end])
        new = TowerLevel(
            self.old.n + 1, self.E, self.Et, pi, pit,
            PlanarMap(self.E, self.g, ONE), PlanarMap(self.Et, self.gt, ONE),
            tuple(self.triangles),
            new_leaves=(tuple(self.leaves), tuple(self.leaves_t)),
        )
        rho = leaf_collapse_retraction(self.E, self.leaves)
        rho_t = leaf_collapse_retraction(self.Et, self.leaves_t)
        return replace(self.old, retraction_from_next=(rho, rho_t)), new


def subdivide_interval(builder: LevelBuilder, i: int) -> LevelBuilder:
    builder.subdivide_interval(i)
    return builder


def subdivide_level(level: TowerLevel) -> tuple[TowerLevel, TowerLevel]:
    """Apply the subdivision step to every interval of ``level``.

    Returns the input level with its retraction pair attached, and the next level.
    """
    b = LevelBuilder(level)
    for i in range(1, level.n_intervals + 1):
        b.subdivide_interval(i)
    return b.finish()


def build_tower(N: int) -> list[TowerLevel]:
    if N < 1:
        raise ValueError("need at least one level")
    levels = [init_level1()]
    while len(levels) < N:
        done, nxt = subdivide_level(levels[-1])
        levels[-1] = done
        levels.append(nxt)
    return levels
