"""Height functions, the tree-like inequality, quotient dendrites and loop verdicts.

A height function ``h`` for a loop ``alpha`` must satisfy, for all ``s <= t``::

    |alpha(t) - alpha(s)| <= h(s) + h(t) - 2 * min(h on [s, t])

:func:`verify_height_function` checks this exactly on every ordered pair of a
finite parameter grid.  When ``h`` comes from :func:`height_from_tree_path`
the inequality holds on the whole square, since the loop factors through a
tree by a 1-Lipschitz map; the grid check is the machine-checked part.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import ONE, ZERO, Dyadic, Quad, cmp_sqrt_vs_quad, common_exponent, quad_sign, quad_sign_array
from .exactnum import _sign_rat_irr
from .mtree import MetricTree, TreeLocation
from .plcurve import PlanarMap, PlanePath, Point2, TreePath, orientation, segment_length

__all__ = [
    "HeightFunction",
    "HeightReport",
    "ClassReport",
    "QuotientTree",
    "Verdict",
    "NotGraphLikeError",
    "height_from_tree_path",
    "height_inequality",
    "verify_height_function",
    "class_consistency_check",
    "quotient_dendrite",
    "decide_polygonal_loop",
    "winding_number",
]

D0 = Dyadic(0)
D1 = Dyadic(1)


class NotGraphLikeError(ValueError):
    """Loop segments meet somewhere other than at shared breakpoint endpoints."""


@dataclass(frozen=True)
class HeightFunction:
    """Nonnegative piecewise-linear function on [0, 1]."""

    params: tuple
    values: tuple

    def __post_init__(self):
        if len(self.params) != len(self.values) or len(self.params) < 2:
            raise ValueError("height function needs matching params and values")
        if self.params[0] != D0 or self.params[-1] != D1:
            raise ValueError("height function must be defined on [0, 1]")
        for s, t in zip(self.params, self.params[1:]):
            if not s < t:
                raise ValueError("height function params must increase strictly")
        for v in self.values:
            if quad_sign(v) < 0:
                raise ValueError(f"height value {v} is negative")

    @classmethod
    def of(cls, pairs) -> "HeightFunction":
        ps, vs = zip(*pairs)
        return cls(tuple(Dyadic.coerce(p) if not isinstance(p, str) else Dyadic.parse(p) for p in ps),
                   tuple(Quad.coerce(v) if not isinstance(v, str) else Quad(Dyadic.parse(v)) for v in vs))

    @property
    def breakpoints(self):
        return list(zip(self.params, self.values))

    def eval_many(self, ts: Sequence[Dyadic]) -> list[Quad]:
        out = []
        k, last = 0, len(self.params) - 1
        params, values = self.params, self.values
        for t in ts:
            while k < last and not t < params[k + 1]:
                k += 1
            if k == last or params[k] == t:
                out.append(values[k])
            else:
                lam = (t - params[k]) / (params[k + 1] - params[k])
                out.append(values[k] + (values[k + 1] - values[k]) * lam)
        return out

    def eval(self, t: Dyadic) -> Quad:
        t = Dyadic.coerce(t)
        if t < D0 or t > D1:
            raise ValueError(f"parameter {t} outside [0, 1]")
        return self.eval_many([t])[0]

    def inf_on(self, s: Dyadic, t: Dyadic) -> Quad:
        """Exact minimum of ``h`` over ``[s, t]``."""
        cands = [self.eval(s), self.eval(t)]
        cands += [v for p, v in zip(self.params, self.values) if s < p < t]
        return min(cands)

    def to_json(self) -> dict:
        return {"breakpoints": [[p.to_json(), v.to_json()] for p, v in zip(self.params, self.values)]}

    @classmethod
    def from_json(cls, obj) -> "HeightFunction":
        if isinstance(obj, dict):
            obj = obj["breakpoints"]
        return cls(tuple(Dyadic.from_json(p) for p, _ in obj), tuple(Quad.from_json(v) for _, v in obj))


def height_from_tree_path(path: TreePath, g_lipschitz: Quad = ONE) -> HeightFunction:
    """``t -> L * d(path(0), path(t))`` as an exact piecewise-linear function."""
    if path.vertices[0] != path.vertices[-1]:
        raise ValueError("not a loop: path(0) != path(1)")
    L = Quad.coerce(g_lipschitz)
    if quad_sign(L) <= 0:
        raise ValueError("Lipschitz constant must be positive")
    tree = path.tree
    base = path.vertices[0]
    dist = tree.distances_from(base)
    params = [path.params[0]]
    values = [dist[base] * L]
    for k in range(len(path.params) - 1):
        r, s = path.params[k], path.params[k + 1]
        u, v = path.vertices[k], path.vertices[k + 1]
        if u != v and not tree.adjacent(u, v):
            # a multi-edge segment dips toward the base point where the arc
            # passes closest to it
            duv = tree.distance(u, v)
            to_mid = (dist[u] + duv - dist[v]).half()
            if quad_sign(to_mid) > 0 and quad_sign(duv - to_mid) > 0:
                params.append(r + (s - r) * to_mid.exact_ratio(duv))
                values.append((dist[u] - to_mid) * L)
        params.append(s)
        values.append(dist[v] * L)
    return HeightFunction(tuple(params), tuple(values))


def height_inequality(loop: PlanePath, h: HeightFunction, s: Dyadic, t: Dyadic):
    """Scalar form of the check at one pair: ``(|a(t)-a(s)|**2, rhs, holds)``."""
    s, t = Dyadic.coerce(s), Dyadic.coerce(t)
    if t < s:
        s, t = t, s
    lhs = loop.eval(s).sq_dist(loop.eval(t))
    rhs = h.eval(s) + h.eval(t) - h.inf_on(s, t) * 2
    return lhs, rhs, cmp_sqrt_vs_quad(lhs, rhs) <= 0


# ---------------------------------------------------------------------------
# pair-grid machinery


def _refine(params: list[Dyadic], times: int) -> list[Dyadic]:
    for _ in range(times):
        out = [params[0]]
        for a, b in zip(params, params[1:]):
            out.append((a + b).half())
            out.append(b)
        params = out
    return params


class _PairGrid:
    """Loop points and heights on a parameter grid, as exact scaled integers."""

    def __init__(self, loop: PlanePath, h: HeightFunction, refine: int):
        if refine < 0:
            raise ValueError("refine must be nonnegative")
        if loop.params[0] != h.params[0] or loop.params[-1] != h.params[-1]:
            raise ValueError("loop and height function have different domains")
        params = _refine(sorted(set(loop.params) | set(h.params)), refine)
        pts = loop.eval_many(params)
        hs = h.eval_many(params)
        K = max(common_exponent([c for p in pts for c in p]), common_exponent(hs))
        self.params, self.points, self.heights, self.K = params, pts, hs, K
        X = [p.x.scaled(K) for p in pts]
        Y = [p.y.scaled(K) for p in pts]
        HP = [v.rat.scaled(K) for v in hs]
        HQ = [v.irr.scaled(K) for v in hs]
        if not any(HQ):
            self.mode = "rat"
        elif not any(HP):
            self.mode = "irr"
        else:
            self.mode = "mixed"
        uniq = sorted(set(hs))
        rank_of = {v: k for k, v in enumerate(uniq)}
        M = max(map(abs, X + Y + HP + HQ), default=0) + 1
        bound = 64 * M * M if self.mode != "mixed" else (1 << 13) * M ** 4
        dtype = np.int64 if bound < (1 << 62) else object
        self.X = np.array(X, dtype=dtype)
        self.Y = np.array(Y, dtype=dtype)
        self.HP = np.array(HP, dtype=dtype)
        self.HQ = np.array(HQ, dtype=dtype)
        self.rank = np.array([rank_of[v] for v in hs], dtype=np.int64)
        self.UP = np.array([v.rat.scaled(K) for v in uniq], dtype=dtype)
        self.UQ = np.array([v.irr.scaled(K) for v in uniq], dtype=dtype)

    def __len__(self):
        return len(self.params)

    def arrays(self):
        return (self.X, self.Y, self.HP, self.HQ, self.rank, self.UP, self.UQ, self.mode)


_SHARED = None


def _init_worker(arrays):
    global _SHARED
    _SHARED = arrays


def _scan_rows(rows: range, max_keep: int, arrays=None) -> dict:
    X, Y, HP, HQ, rank, UP, UQ, mode = arrays if arrays is not None else _SHARED
    pairs = 0
    violations: list[tuple[int, int]] = []
    n_viol = 0
    best = None  # (a, b, i, j) of minimal squared slack a + b sqrt2
    related = 0
    rel_bad: list[tuple[int, int]] = []
    n_rel_bad = 0
    for i in rows:
        if i + 1 >= len(X):
            continue
        m = np.minimum(np.minimum.accumulate(rank[i + 1:]), rank[i])
        P = HP[i] + HP[i + 1:] - 2 * UP[m]
        Q = HQ[i] + HQ[i + 1:] - 2 * UQ[m]
        dx = X[i + 1:] - X[i]
        dy = Y[i + 1:] - Y[i]
        D = dx * dx + dy * dy
        pairs += len(D)
        if mode == "rat":
            A = P * P - D
            bad = A < 0
        elif mode == "irr":
            A = 2 * Q * Q - D
            bad = A < 0
        else:
            A = P * P + 2 * Q * Q - D
            Bv = 2 * P * Q
            bad = quad_sign_array(A, Bv) < 0
        nb = int(np.count_nonzero(bad))
        if nb:
            n_viol += nb
            if len(violations) < max_keep:
                for j in np.flatnonzero(bad)[: max_keep - len(violations)]:
                    violations.append((i, i + 1 + int(j)))
        # minimal squared slack on this row
        if mode != "mixed":
            j = int(np.argmin(A))
            cand = (int(A[j]), 0, i, i + 1 + j)
            if best is None or cand[0] < best[0]:
                best = cand
        else:
            for j in range(len(A)):
                a, b = int(A[j]), int(Bv[j])
                if best is None or _sign_rat_irr(a - best[0], b - best[1]) < 0:
                    best = (a, b, i, i + 1 + j)
        # class relation: equal heights that are also the minimum in between
        rel = (rank[i + 1:] == rank[i]) & (m == rank[i])
        related += int(np.count_nonzero(rel))
        mism = rel & ((dx != 0) | (dy != 0))
        nm = int(np.count_nonzero(mism))
        if nm:
            n_rel_bad += nm
            for j in np.flatnonzero(mism)[: max(0, max_keep - len(rel_bad))]:
                rel_bad.append((i, i + 1 + int(j)))
    return {"pairs": pairs, "violations": violations, "n_viol": n_viol, "best": best,
            "related": related, "rel_bad": rel_bad, "n_rel_bad": n_rel_bad}


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("TREELIKE_WORKERS", "1") or 1)
    return max(1, workers)


def _scan(grid: _PairGrid, workers: int | None, max_keep: int) -> dict:
    n = len(grid)
    workers = _resolve_workers(workers)
    arrays = grid.arrays()
    if workers == 1 or n < 256:
        return _scan_rows(range(n), max_keep, arrays)
    # interleave rows so every chunk gets a similar amount of work
    chunks = [range(k, n, workers * 4) for k in range(workers * 4)]
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(arrays,)) as ex:
        parts = list(ex.map(_scan_rows, chunks, [max_keep] * len(chunks)))
    out = {"pairs": 0, "violations": [], "n_viol": 0, "best": None,
           "related": 0, "rel_bad": [], "n_rel_bad": 0}
    for p in parts:
        for k in ("pairs", "n_viol", "related", "n_rel_bad"):
            out[k] += p[k]
        out["violations"] += p["violations"]
        out["rel_bad"] += p["rel_bad"]
        b = p["best"]
        if b is not None and (out["best"] is None
                              or _sign_rat_irr(b[0] - out["best"][0], b[1] - out["best"][1]) < 0):
            out["best"] = b
    out["violations"] = sorted(out["violations"])[:max_keep]
    out["rel_bad"] = sorted(out["rel_bad"])[:max_keep]
    return out


@dataclass
class HeightReport:
    """Result of checking the tree-like inequality on a grid.

    ``min_slack`` is the smallest squared slack ``rhs**2 - lhs**2`` over all
    pairs, attained at ``min_slack_pair``; it is negative exactly when some
    pair violates the inequality.
    """

    pairs_checked: int
    violation_count: int
    violations: list = field(default_factory=list)
    min_slack: Quad | None = None
    min_slack_pair: tuple | None = None
    grid: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "pairs_checked": self.pairs_checked,
            "violation_count": self.violation_count,
            "violations": [{"s": s.to_json(), "t": t.to_json(), "lhs_sq": l.to_json(), "rhs": r.to_json()}
                           for s, t, l, r in self.violations],
            "min_slack": None if self.min_slack is None else self.min_slack.to_json(),
            "slack_kind": "squared",
            "min_slack_pair": None if self.min_slack_pair is None
            else [x.to_json() for x in self.min_slack_pair],
            "grid": self.grid,
        }


@dataclass
class ClassReport:
    """Pairs with ``s ~_h t`` and those among them whose loop values differ."""

    related_pairs: int
    violation_count: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_json(self) -> dict:
        return {"passed": self.passed, "related_pairs": self.related_pairs,
                "violation_count": self.violation_count,
                "violations": [[s.to_json(), t.to_json()] for s, t in self.violations]}


def _grid_info(grid: _PairGrid, refine: int) -> dict:
    return {"points": len(grid), "refine": refine, "scale_exponent": grid.K, "mode": grid.mode}


def _height_report(grid: _PairGrid, res: dict, refine: int) -> HeightReport:
    viol = []
    for i, j in res["violations"]:
        s, t = grid.params[i], grid.params[j]
        lhs = grid.points[i].sq_dist(grid.points[j])
        rhs = grid.heights[i] + grid.heights[j] - min(grid.heights[i:j + 1]) * 2
        viol.append((s, t, lhs, rhs))
    best = res["best"]
    slack = pair = None
    if best is not None:
        k2 = 2 * grid.K
        slack = Quad(Dyadic(best[0], k2), Dyadic(best[1], k2))
        pair = (grid.params[best[2]], grid.params[best[3]])
    return HeightReport(res["pairs"], res["n_viol"], viol, slack, pair, _grid_info(grid, refine))


def verify_height_function(loop: PlanePath, h: HeightFunction, refine: int = 0,
                           workers: int | None = 1, max_violations: int = 20) -> HeightReport:
    """Check the tree-like inequality on every pair ``s < t`` of the grid.

    The grid is the union of the loop's and ``h``'s breakpoints, with
    midpoints inserted ``refine`` times.  All comparisons are exact.
    """
    grid = _PairGrid(loop, h, refine)
    return _height_report(grid, _scan(grid, workers, max_violations), refine)


def verify_with_classes(loop: PlanePath, h: HeightFunction, refine: int = 0,
                        workers: int | None = 1, max_violations: int = 20):
    """One pass over the grid producing both the height report and the class report."""
    grid = _PairGrid(loop, h, refine)
    res = _scan(grid, workers, max_violations)
    return _height_report(grid, res, refine), _class_report(grid, res)


def _class_report(grid: _PairGrid, res: dict) -> ClassReport:
    return ClassReport(res["related"], res["n_rel_bad"],
                       [(grid.params[i], grid.params[j]) for i, j in res["rel_bad"]])


def class_consistency_check(loop: PlanePath, h: HeightFunction, samples: int = 0,
                            workers: int | None = 1) -> ClassReport:
    """Check that ``s ~_h t`` forces ``loop(s) == loop(t)`` on the grid.

    ``samples`` is the number of midpoint refinements of the breakpoint grid.
    """
    grid = _PairGrid(loop, h, samples)
    return _class_report(grid, _scan(grid, workers, 20))


# ---------------------------------------------------------------------------
# quotient dendrite


@dataclass
class QuotientTree:
    """The tree ``[0,1] / ~_h`` for a piecewise-linear ``h``.

    The root is the class at height ``base = min h``; a point of the tree at
    depth ``x`` is a class at height ``base + x``.
    """

    tree: MetricTree
    h: HeightFunction
    base: Quad
    class_of: dict
    _crit_params: list = field(repr=False, default_factory=list)
    _crit_vertex: list = field(repr=False, default_factory=list)
    _anchor: list = field(repr=False, default_factory=list)

    def locate(self, t: Dyadic) -> TreeLocation:
        from bisect import bisect_right
        t = Dyadic.coerce(t)
        k = bisect_right(self._crit_params, t) - 1
        if self._crit_params[k] == t or k == len(self._anchor):
            # h is constant after its last critical point
            return TreeLocation(self._crit_vertex[k], ZERO)
        y = self.h.eval(t) - self.base
        tree = self.tree
        v = self._anchor[k]
        while True:
            c = quad_sign(tree.depth[v] - y)
            if c == 0:
                return TreeLocation(v, ZERO)
            p = tree.parent[v]
            if quad_sign(tree.depth[p] - y) < 0:
                return TreeLocation(v, tree.depth[v] - y)
            v = p

    def distance(self, s: Dyadic, t: Dyadic) -> Quad:
        return self.tree.geodesic_distance(self.locate(s), self.locate(t))


def quotient_dendrite(h: HeightFunction) -> QuotientTree:
    """Merge tree of the superlevel sets of ``h``.

    Local maxima become leaves and local minima become branch points; edge
    lengths are height differences.
    """
    # collapse plateaus, then keep only turning points
    pts = [(h.params[0], h.values[0])]
    for p, v in zip(h.params[1:], h.values[1:]):
        if v != pts[-1][1]:
            pts.append((p, v))
    crit = [pts[0]]
    for k in range(1, len(pts) - 1):
        a = quad_sign(pts[k][1] - pts[k - 1][1])
        b = quad_sign(pts[k + 1][1] - pts[k][1])
        if a != b:
            crit.append(pts[k])
    if len(pts) > 1:
        crit.append(pts[-1])

    base = min(h.values)
    tree = MetricTree(root=0)
    stack = [0]
    y0 = crit[0][1] - base
    if quad_sign(y0) > 0:
        stack.append(tree.add_child(0, y0))
    crit_vertex = [stack[-1]]
    anchor = []
    for _, val in crit[1:]:
        y = val - base
        top = stack[-1]
        if quad_sign(y - tree.depth[top]) > 0:
            v = tree.add_child(top, y - tree.depth[top])
            stack.append(v)
            anchor.append(v)
        else:
            anchor.append(top)
            while len(stack) > 1 and quad_sign(tree.depth[stack[-2]] - y) >= 0:
                stack.pop()
            top = stack[-1]
            if quad_sign(tree.depth[top] - y) > 0:
                w = tree.split(top, tree.depth[top] - y)
                stack[-1] = w
        crit_vertex.append(stack[-1])
    qt = QuotientTree(tree, h, base, {}, [p for p, _ in crit], crit_vertex, anchor)
    qt.class_of = {p: qt.locate(p) for p in h.params}
    return qt


# ---------------------------------------------------------------------------
# polygonal loops


@dataclass
class Verdict:
    kind: str  # "TreeLike", "NotTreeLike" or "Inconclusive"
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        w = {}
        for k, v in self.witness.items():
            if hasattr(v, "to_json"):
                w[k] = v.to_json()
            elif isinstance(v, int):
                w[k] = v
            else:
                w[k] = v
        return {"kind": self.kind, "reason": self.reason, "witness": w}


def _on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    if orientation(a, b, p):
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)) and (min(a.y, b.y) <= p.y <= max(a.y, b.y))


def winding_number(loop: PlanePath, p: Point2) -> int:
    """Signed number of turns of a closed polygonal loop around ``p``."""
    pts = loop.points
    if pts[0] != pts[-1]:
        raise ValueError("not a closed loop")
    for a, b in zip(pts, pts[1:]):
        if _on_segment(p, a, b):
            raise ValueError(f"point {p} lies on the loop")
    w = 0
    for a, b in zip(pts, pts[1:]):
        if a.y <= p.y:
            if b.y > p.y and orientation(a, b, p) > 0:
                w += 1
        elif b.y <= p.y and orientation(a, b, p) < 0:
            w -= 1
    return w


def _segments_compatible(s1, s2) -> bool:
    p1, q1 = s1
    p2, q2 = s2
    if {p1, q1} == {p2, q2}:
        return True
    o1, o2 = orientation(p1, q1, p2), orientation(p1, q1, q2)
    o3, o4 = orientation(p2, q2, p1), orientation(p2, q2, q1)
    shared = {p1, q1} & {p2, q2}
    if o1 == o2 == o3 == o4 == 0:
        # collinear: disjoint, or meeting in a single shared endpoint
        if shared:
            x = next(iter(shared))
            y1 = q1 if p1 == x else p1
            y2 = q2 if p2 == x else p2
            return (y1 - x).dot(y2 - x) < 0
        return not (_on_segment(p2, p1, q1) or _on_segment(q2, p1, q1)
                    or _on_segment(p1, p2, q2) or _on_segment(q1, p2, q2))
    if shared:
        return True
    if o1 * o2 < 0 and o3 * o4 < 0:
        return False
    return not (_on_segment(p2, p1, q1) or _on_segment(q2, p1, q1)
                or _on_segment(p1, p2, q2) or _on_segment(q1, p2, q2))


def _dyadic_between(lo: Fraction, hi: Fraction) -> Dyadic:
    k = 0
    while True:
        m = (lo * (1 << k)).__floor__() + 1
        if Fraction(m, 1 << k) < hi:
            return Dyadic(m, k)
        k += 1


def _interior_point(cycle: list[Point2]) -> Point2:
    """A dyadic point strictly inside a simple polygon."""
    ys = sorted({p.y for p in cycle})
    y = (ys[0] + ys[1]).half()
    yf = y.to_fraction()
    xs = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if (a.y < y) != (b.y < y):
            ax, ay, bx, by = (c.to_fraction() for c in (a.x, a.y, b.x, b.y))
            xs.append(ax + (yf - ay) * (bx - ax) / (by - ay))
    xs.sort()
    return Point2(_dyadic_between(xs[0], xs[1]), y)


def _tree_length(a: Point2, b: Point2) -> Quad:
    try:
        return segment_length(a, b)
    except ValueError:
        # an L1 bound keeps the factoring map 1-Lipschitz
        return Quad(abs(a.x - b.x) + abs(a.y - b.y))


def decide_polygonal_loop(loop: PlanePath, refine: int = 0) -> Verdict:
    """Classify a closed polygonal loop whose segments meet only at endpoints.

    Simple closed curves are refuted; loops whose edge word in the image graph
    cancels to nothing get an explicit tree factorization and a verified
    height function; anything else is inconclusive.
    """
    pts = loop.points
    if pts[0] != pts[-1]:
        raise ValueError("not a closed loop: loop(0) != loop(1)")
    segs = [(a, b) for a, b in zip(pts, pts[1:]) if a != b]
    for x in range(len(segs)):
        for y in range(x + 1, len(segs)):
            if not _segments_compatible(segs[x], segs[y]):
                raise NotGraphLikeError(
                    f"segments {segs[x][0]}-{segs[x][1]} and {segs[y][0]}-{segs[y][1]} "
                    "intersect away from a shared endpoint")

    cycle = [a for a, _ in segs]
    if len(cycle) >= 3 and len(set(cycle)) == len(cycle):
        inner = _interior_point(cycle)
        w = winding_number(loop, inner)
        return Verdict("NotTreeLike", "simple closed curve",
                       {"point": inner, "winding_number": w})

    # cancel immediate backtracks while laying the loop out in a tree
    tree = MetricTree(root=0)
    where = {0: pts[0]}
    child_at: dict[tuple[int, Point2], int] = {}
    cur = 0
    verts = [0]
    for a, b in zip(pts, pts[1:]):
        if a != b:
            par = tree.parent.get(cur)
            if par is not None and where[par] == b:
                cur = par
            else:
                nxt = child_at.get((cur, b))
                if nxt is None:
                    nxt = tree.add_child(cur, _tree_length(a, b))
                    where[nxt] = b
                    child_at[(cur, b)] = nxt
                cur = nxt
        verts.append(cur)
    if cur != 0:
        return Verdict("Inconclusive", "edge word does not cancel to the empty word")

    path = TreePath(tree, loop.params, verts)
    g = PlanarMap(tree, where, ONE)
    if g.lipschitz_violations():
        raise AssertionError("witness map is not 1-Lipschitz")
    h = height_from_tree_path(path, ONE)
    report = verify_height_function(loop, h, refine=refine)
    if not report.passed:
        raise AssertionError("tree-derived height function failed verification")
    return Verdict("TreeLike", "edge word cancels to the empty word",
                   {"tree": tree, "path": path, "map": g, "height": h, "report": report})
