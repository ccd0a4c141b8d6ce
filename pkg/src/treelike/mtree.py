"""Rooted metric simplicial trees with exact edge lengths."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .exactnum import ZERO, Dyadic, Quad, quad_sign

__all__ = [
    "MetricTree",
    "TreeLocation",
    "Retraction",
    "attach_leaf",
    "subdivide_edge",
    "geodesic_distance",
    "leaf_collapse_retraction",
]


@dataclass(frozen=True)
class TreeLocation:
    """A point on the closed edge from ``vertex`` toward its parent.

    ``offset`` is measured from ``vertex``; use :meth:`MetricTree.location`
    to build one, which also normalizes a point sitting on the parent.
    """

    vertex: int
    offset: Quad = ZERO

    @property
    def is_vertex(self) -> bool:
        return not self.offset


class MetricTree:
    """Parent-pointer tree with cached exact depths.

    Vertex ids are never reused, so a vertex keeps its identity through later
    subdivisions and leaf attachments.
    """

    def __init__(self, root: int = 0):
        self.root = root
        self.parent: dict[int, int] = {}
        self.length: dict[int, Quad] = {}
        self.depth: dict[int, Quad] = {root: ZERO}
        self.children: dict[int, list[int]] = {root: []}
        self._next_id = root + 1
        self._levels: dict[int, int] | None = None

    # structure ------------------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        return list(self.depth)

    def __contains__(self, v) -> bool:
        return v in self.depth

    def __len__(self) -> int:
        return len(self.depth)

    @property
    def n_edges(self) -> int:
        return len(self.parent)

    def edges(self) -> Iterator[tuple[int, int, Quad]]:
        """Yield ``(child, parent, length)`` for every edge."""
        for v, p in self.parent.items():
            yield v, p, self.length[v]

    def neighbors(self, v: int) -> list[int]:
        out = list(self.children[v])
        if v in self.parent:
            out.append(self.parent[v])
        return out

    def degree(self, v: int) -> int:
        return len(self.children[v]) + (v in self.parent)

    def is_leaf(self, v: int) -> bool:
        return v != self.root and not self.children[v]

    def adjacent(self, u: int, v: int) -> bool:
        return self.parent.get(u) == v or self.parent.get(v) == u

    def edge_length(self, u: int, v: int) -> Quad:
        if self.parent.get(u) == v:
            return self.length[u]
        if self.parent.get(v) == u:
            return self.length[v]
        raise ValueError(f"vertices {u} and {v} are not adjacent")

    def copy(self) -> "MetricTree":
        t = MetricTree.__new__(MetricTree)
        t.root = self.root
        t.parent = dict(self.parent)
        t.length = dict(self.length)
        t.depth = dict(self.depth)
        t.children = {v: list(c) for v, c in self.children.items()}
        t._next_id = self._next_id
        t._levels = self._levels
        return t

    def _require(self, v: int) -> None:
        if v not in self.depth:
            raise KeyError(f"unknown vertex {v}")

    def _new_id(self) -> int:
        v = self._next_id
        self._next_id += 1
        return v

    def add_child(self, at: int, length: Quad, vid: int | None = None) -> int:
        self._require(at)
        length = Quad.coerce(length)
        if quad_sign(length) <= 0:
            raise ValueError(f"edge length must be positive, got {length}")
        if vid is None:
            vid = self._new_id()
        elif vid in self.depth:
            raise ValueError(f"vertex {vid} already exists")
        else:
            self._next_id = max(self._next_id, vid + 1)
        self.parent[vid] = at
        self.length[vid] = length
        self.depth[vid] = self.depth[at] + length
        self.children[vid] = []
        self.children[at].append(vid)
        if self._levels is not None:
            self._levels[vid] = self._levels[at] + 1
        return vid

    def subdivide(self, child: int, fraction: Dyadic) -> int:
        fraction = Dyadic.coerce(fraction)
        if not (0 < fraction < 1):
            raise ValueError(f"fraction must lie strictly between 0 and 1, got {fraction}")
        self._require(child)
        if child not in self.parent:
            raise ValueError("the root has no parent edge to subdivide")
        return self.split(child, self.length[child] * fraction)

    def split(self, child: int, offset: Quad) -> int:
        """Insert a vertex on the edge above ``child`` at distance ``offset`` from it."""
        self._require(child)
        if child not in self.parent:
            raise ValueError("the root has no parent edge to subdivide")
        total = self.length[child]
        if quad_sign(offset) <= 0 or quad_sign(total - offset) <= 0:
            raise ValueError(f"offset {offset} is not interior to an edge of length {total}")
        p = self.parent[child]
        w = self._new_id()
        self.parent[w] = p
        self.length[w] = total - offset
        self.depth[w] = self.depth[child] - offset
        self.children[w] = [child]
        siblings = self.children[p]
        siblings[siblings.index(child)] = w
        self.parent[child] = w
        self.length[child] = offset
        self._levels = None
        return w

    def remove_leaf(self, v: int) -> None:
        if not self.is_leaf(v):
            raise ValueError(f"vertex {v} is not a leaf")
        p = self.parent.pop(v)
        del self.length[v], self.depth[v], self.children[v]
        self.children[p].remove(v)
        if self._levels is not None:
            self._levels.pop(v, None)

    # locations ------------------------------------------------------------

    def location(self, vertex: int, offset: Quad = ZERO) -> TreeLocation:
        """Validated, normalized location ``offset`` above ``vertex``."""
        self._require(vertex)
        offset = Quad.coerce(offset)
        s = quad_sign(offset)
        if s < 0:
            raise ValueError("negative offset")
        if s == 0:
            return TreeLocation(vertex, ZERO)
        if vertex not in self.parent:
            raise ValueError("the root carries offset 0 only")
        c = quad_sign(offset - self.length[vertex])
        if c > 0:
            raise ValueError(f"offset {offset} exceeds edge length {self.length[vertex]}")
        if c == 0:
            return TreeLocation(self.parent[vertex], ZERO)
        return TreeLocation(vertex, offset)

    def validate_location(self, loc: TreeLocation) -> None:
        if loc.vertex not in self.depth:
            raise ValueError(f"location {loc} does not belong to this tree")
        if loc.offset and (loc.vertex not in self.parent
                           or quad_sign(loc.offset - self.length[loc.vertex]) > 0
                           or quad_sign(loc.offset) < 0):
            raise ValueError(f"location {loc} does not belong to this tree")

    def loc_depth(self, loc: TreeLocation) -> Quad:
        return self.depth[loc.vertex] - loc.offset

    def ensure_vertex(self, loc: TreeLocation) -> tuple[int, bool]:
        """Make ``loc`` a vertex, subdividing if needed.

        ``loc`` may refer to an edge that has since been split; the offset is
        then resolved by walking up.  Returns ``(vertex, created)``.
        """
        v, off = loc.vertex, loc.offset
        while off:
            ln = self.length[v]
            c = quad_sign(off - ln)
            if c < 0:
                break
            off = off - ln
            v = self.parent[v]
        if not off:
            return v, False
        return self.subdivide(v, off.exact_ratio(self.length[v])), True

    # distances ------------------------------------------------------------

    def levels(self) -> dict[int, int]:
        if self._levels is None:
            lv = {self.root: 0}
            stack = [self.root]
            while stack:
                v = stack.pop()
                for c in self.children[v]:
                    lv[c] = lv[v] + 1
                    stack.append(c)
            self._levels = lv
        return self._levels

    def lca(self, u: int, v: int) -> int:
        lv = self.levels()
        while lv[u] > lv[v]:
            u = self.parent[u]
        while lv[v] > lv[u]:
            v = self.parent[v]
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u

    def distance(self, u: int, v: int) -> Quad:
        w = self.lca(u, v)
        return self.depth[u] + self.depth[v] - self.depth[w] * 2

    def geodesic_distance(self, p: TreeLocation, q: TreeLocation) -> Quad:
        self.validate_location(p)
        self.validate_location(q)
        a, b = p.vertex, q.vertex
        if a == b:
            return abs(p.offset - q.offset)
        w = self.lca(a, b)
        dp, dq = self.loc_depth(p), self.loc_depth(q)
        if w == a:
            # p sits above a, on the root path of q
            return dq - dp
        if w == b:
            return dp - dq
        return dp + dq - self.depth[w] * 2

    def distances_from(self, src: int) -> dict[int, Quad]:
        """Geodesic distance from ``src`` to every vertex."""
        self._require(src)
        dist = {src: ZERO}
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + self.edge_length(v, w)
                    queue.append(w)
        return dist

    def arc(self, u: int, v: int) -> list[int]:
        """Vertices of the unique arc from ``u`` to ``v``, both included."""
        w = self.lca(u, v)
        up = [u]
        while up[-1] != w:
            up.append(self.parent[up[-1]])
        down = [v]
        while down[-1] != w:
            down.append(self.parent[down[-1]])
        return up + down[-2::-1]

    def point_on_arc(self, u: int, v: int, dist: Quad) -> TreeLocation:
        """The point at distance ``dist`` from ``u`` along the arc to ``v``."""
        path = self.arc(u, v)
        rem = Quad.coerce(dist)
        if quad_sign(rem) < 0:
            raise ValueError("negative distance along arc")
        for x, y in zip(path, path[1:]):
            ln = self.edge_length(x, y)
            c = quad_sign(rem - ln)
            if c < 0:
                if self.parent.get(x) == y:
                    return self.location(x, rem)
                return self.location(y, ln - rem)
            rem = rem - ln
        if rem:
            raise ValueError("distance exceeds arc length")
        return TreeLocation(v, ZERO)

    def check(self) -> list[str]:
        """Structural invariant violations (empty when the tree is sound)."""
        problems = []
        seen = set()
        for v in self.depth:
            x, steps = v, 0
            while x != self.root:
                if x not in self.parent:
                    problems.append(f"vertex {v} does not reach the root")
                    break
                x = self.parent[x]
                steps += 1
                if steps > len(self.depth):
                    problems.append(f"cycle through vertex {v}")
                    break
            seen.add(v)
        for v, p, ln in self.edges():
            if quad_sign(ln) <= 0:
                problems.append(f"edge {v}-{p} has non-positive length {ln}")
            if self.depth[v] != self.depth[p] + ln:
                problems.append(f"cached depth of {v} is inconsistent")
        if self.depth[self.root]:
            problems.append("root depth is not zero")
        return problems

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "vertices": sorted(self.depth),
            "edges": [[v, self.parent[v], self.length[v].to_json()]
                      for v in sorted(self.parent)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MetricTree":
        t = cls(int(obj["root"]))
        pending: dict[int, list[tuple[int, Quad]]] = {}
        for child, par, ln in obj["edges"]:
            pending.setdefault(int(par), []).append((int(child), Quad.from_json(ln)))
        stack = [t.root]
        while stack:
            v = stack.pop()
            for child, ln in pending.pop(v, []):
                t.add_child(v, ln, vid=child)
                stack.append(child)
        if pending:
            raise ValueError("tree edges do not connect to the root")
        listed = {int(v) for v in obj.get("vertices", t.depth)}
        if listed != set(t.depth):
            raise ValueError("vertex list does not match edge list")
        t._next_id = max(t.depth) + 1
        return t


def attach_leaf(tree: MetricTree, at: int, length: Quad) -> int:
    return tree.add_child(at, length)


def subdivide_edge(tree: MetricTree, child: int, fraction: Dyadic) -> int:
    """Split the edge above ``child`` at ``fraction`` of its length from ``child``."""
    return tree.subdivide(child, fraction)


def geodesic_distance(tree: MetricTree, p: TreeLocation | int, q: TreeLocation | int) -> Quad:
    if isinstance(p, int):
        p = TreeLocation(p, ZERO)
    if isinstance(q, int):
        q = TreeLocation(q, ZERO)
    return tree.geodesic_distance(p, q)


@dataclass(frozen=True)
class Retraction:
    """Collapse of pendant leaf edges onto their attachment vertices."""

    source: MetricTree
    target: MetricTree
    collapsed_leaves: frozenset

    def apply(self, loc: TreeLocation) -> TreeLocation:
        self.source.validate_location(loc)
        if loc.vertex in self.collapsed_leaves:
            return TreeLocation(self.source.parent[loc.vertex], ZERO)
        return loc

    def apply_vertex(self, v: int) -> int:
        return self.source.parent[v] if v in self.collapsed_leaves else v

    def sup_displacement(self) -> Quad:
        best = ZERO
        for w in self.collapsed_leaves:
            ln = self.source.length[w]
            if quad_sign(ln - best) > 0:
                best = ln
        return best

    def check(self) -> list[str]:
        """Retraction and monotonicity conditions, checked structurally."""
        problems = []
        src, tgt = self.source, self.target
        for w in self.collapsed_leaves:
            if not src.is_leaf(w):
                problems.append(f"collapsed vertex {w} is not a leaf")
            elif src.parent[w] in self.collapsed_leaves:
                problems.append(f"collapsed leaf {w} hangs off another collapsed leaf")
        expected = set(src.depth) - set(self.collapsed_leaves)
        if set(tgt.depth) != expected:
            problems.append("target vertex set is not source minus collapsed leaves")
            return problems
        for v in tgt.depth:
            if tgt.parent.get(v) != src.parent.get(v) or tgt.length.get(v) != src.length.get(v):
                problems.append(f"target edge at {v} differs from source")
        # each point preimage is a vertex plus whole pendant edges: a star,
        # hence connected
        return problems


def leaf_collapse_retraction(source: MetricTree, leaves: Iterable[int]) -> Retraction:
    leaves = frozenset(leaves)
    target = source.copy()
    for w in sorted(leaves):
        if w not in source or not source.is_leaf(w):
            raise ValueError(f"vertex {w} is not a leaf of the source tree")
    for w in sorted(leaves):
        target.remove_leaf(w)
    return Retraction(source, target, leaves)
