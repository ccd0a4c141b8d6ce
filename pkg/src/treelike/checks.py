"""Exact invariant checks over a built tower.

Each check returns a :class:`CheckResult`; :func:`run_suite` gathers the
families that ``treelike verify`` reports on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .construct import A, B, C, TowerLevel, check_parameterization, hyp_length, leg_length
from .exactnum import SQRT2, Dyadic, Quad, common_exponent, quad_sign
from .plcurve import (PlanePath, density_check, loop_concat_reverse, map_path, path_length,
                      sup_distance, tree_sup_distance)
from .verify import Verdict, decide_polygonal_loop, height_from_tree_path, verify_with_classes, winding_number

__all__ = [
    "CheckResult",
    "check_edge_lengths",
    "check_retraction",
    "check_isometry",
    "check_restriction",
    "check_triangles",
    "check_parameterizations",
    "check_hypotheses",
    "check_curve_gap",
    "check_cauchy",
    "check_containment",
    "check_lengths",
    "check_counts",
    "check_density",
    "certificate_loops",
    "check_certificates",
    "refute_alpha_beta",
    "default_refine",
    "run_suite",
]


@dataclass
class CheckResult:
    name: str
    level: int | None
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "level": self.level, "passed": self.passed,
                "detail": self.detail, "data": self.data}


def _result(name, level, problems: list[str], **data) -> CheckResult:
    return CheckResult(name, level, not problems, "; ".join(problems[:5]), data)


# ---------------------------------------------------------------------------
# inductive hypotheses


def check_edge_lengths(level: TowerLevel) -> CheckResult:
    """(1) every edge of E_n has length 1/2**(n-1) and every edge of Et_n sqrt(2)/2**(n-1)."""
    bad = []
    for name, tree, want in (("E", level.E, leg_length(level.n)), ("Et", level.Et, hyp_length(level.n))):
        bad += [f"{name} edge {v}-{p} has length {ln}, expected {want}"
                for v, p, ln in tree.edges() if ln != want]
        bad += [f"{name}: {msg}" for msg in tree.check()]
    return _result("edge_lengths", level.n, bad)


def _same_tree(a, b) -> bool:
    return a.root == b.root and a.parent == b.parent and a.length == b.length


def _subdivides(fine, coarse) -> list[str]:
    """Problems preventing ``fine`` from being a subdivision of ``coarse``."""
    if fine.root != coarse.root:
        return ["roots differ"]
    missing = set(coarse.parent) - set(fine.parent)
    if missing:
        return [f"vertices {sorted(missing)[:5]} are missing"]
    bad = []
    for v in fine.parent:
        if v not in coarse.parent and fine.degree(v) != 2:
            bad.append(f"extra vertex {v} has degree {fine.degree(v)}")
    for v, p in coarse.parent.items():
        # merge the subdivided edges above v until the next coarse vertex
        total, u = fine.length[v], fine.parent[v]
        while u != coarse.root and u not in coarse.parent:
            total, u = total + fine.length[u], fine.parent[u]
        if u != p or total != coarse.length[v]:
            bad.append(f"edge above {v} is not the subdivided edge {v}-{p}")
    return bad


def check_retraction(prev: TowerLevel, level: TowerLevel) -> CheckResult:
    """(2) and (3): leaf collapse retracts level n onto level n-1 with the right displacement."""
    bad = []
    pair = prev.retraction_from_next
    disp = {}
    if pair is None:
        return _result("retraction", level.n, ["no retraction recorded"])
    for name, rho, src, tgt, want in (("E", pair[0], level.E, prev.E, leg_length(level.n)),
                                      ("Et", pair[1], level.Et, prev.Et, hyp_length(level.n))):
        if not _same_tree(rho.source, src):
            bad.append(f"{name}: retraction source differs from level {level.n}")
        bad += [f"{name}: retraction target vs level {prev.n}: {m}" for m in _subdivides(rho.target, tgt)]
        bad += [f"{name}: {m}" for m in rho.check()]
        got = rho.sup_displacement()
        disp[name] = got.to_json()
        if got != want:
            bad.append(f"{name}: sup displacement {got}, expected {want}")
    return _result("retraction", level.n, bad, displacement=disp)


def check_isometry(level: TowerLevel) -> CheckResult:
    """(4) each edge maps isometrically, so both maps are 1-Lipschitz."""
    bad = []
    for name, g in (("g", level.g), ("gt", level.gt)):
        bad += [f"{name} stretches edge at {v}" for v in g.lipschitz_violations()]
        bad += [f"{name} is not isometric on edge at {v}" for v in g.non_isometric_edges()]
    return _result("isometry", level.n, bad)


def check_restriction(prev: TowerLevel, level: TowerLevel) -> CheckResult:
    """(5) the new maps extend the old ones."""
    bad = []
    for name, old, new in (("g", prev.g, level.g), ("gt", prev.gt, level.gt)):
        for v, p in old.images.items():
            if new.images.get(v) != p:
                bad.append(f"{name}({v}) changed from {p} to {new.images.get(v)}")
    return _result("restriction", level.n, bad)


def check_triangles(level: TowerLevel) -> CheckResult:
    """(6) 4**(n-1) vertex-ordered isosceles right triangles with legs 1/2**(n-1)."""
    bad = []
    want = 4 ** (level.n - 1)
    if len(level.triangles) != want:
        bad.append(f"{len(level.triangles)} triangles, expected {want}")
    leg_sq = Dyadic(1, 2 * (level.n - 1))
    for k, tri in enumerate(level.triangles, 1):
        bad += [f"triangle {k}: {m}" for m in tri.problems()]
        if tri.leg_sq() != leg_sq:
            bad.append(f"triangle {k}: squared leg {tri.leg_sq()}, expected {leg_sq}")
    return _result("triangles", level.n, bad, count=len(level.triangles))


def check_parameterizations(level: TowerLevel) -> CheckResult:
    """(7) the four maps parameterize every triangle on its interval."""
    bad = []
    for i in range(1, len(level.triangles) + 1):
        rep = check_parameterization(level, i)
        if not rep.passed:
            bad += [f"interval {i}: {w}" for w in rep.witnesses]
    return _result("parameterization", level.n, bad)


def check_hypotheses(levels: list[TowerLevel], n: int) -> list[CheckResult]:
    """Hypotheses (1) to (7) at level ``n``."""
    level = levels[n - 1]
    out = [check_edge_lengths(level)]
    if n > 1:
        prev = levels[n - 2]
        out += [check_retraction(prev, level), check_restriction(prev, level)]
    out += [check_isometry(level), check_triangles(level), check_parameterizations(level)]
    return out


# ---------------------------------------------------------------------------
# convergence surrogates


def check_curve_gap(level: TowerLevel) -> CheckResult:
    """Squared sup distance between the two level curves is at most 2/4**(n-1)."""
    bound = hyp_length(level.n)
    sd = sup_distance(level.curve, level.curve_t, bound)
    bad = [] if sd.within_bound else [f"squared sup distance {sd.sq_value} exceeds {bound}**2"]
    return _result("curve_gap", level.n, bad, sq_value=sd.sq_value.to_json(), at=sd.at.to_json())


def check_cauchy(prev: TowerLevel, level: TowerLevel) -> CheckResult:
    """Consecutive tree paths stay within a/2**(n-1), with a = 2 on E and 2*sqrt(2) on Et."""
    bad = []
    data = {}
    for name, p_old, p_new, a in (("E", prev.pi, level.pi, Quad(2)),
                                  ("Et", prev.pit, level.pit, SQRT2 * Quad(2))):
        d, at = tree_sup_distance(p_old.on_tree(p_new.tree), p_new)
        bound = a.half(level.n - 1)
        data[name] = {"sup": d.to_json(), "at": at.to_json()}
        if quad_sign(bound - d) < 0:
            bad.append(f"{name}: sup distance {d} at t={at} exceeds {bound}")
    return _result("cauchy", level.n, bad, **data)


def _contained(level_n: int, tris, curve: PlanePath) -> list[str]:
    """Points of ``curve`` with params in interval i must lie in triangle i."""
    pts = curve.points
    K = max(common_exponent([c for p in pts for c in p]),
            common_exponent([c for t in tris for p in (t.a, t.b, t.c) for c in p]))
    X = np.array([p.x.scaled(K) for p in pts], dtype=np.int64)
    Y = np.array([p.y.scaled(K) for p in pts], dtype=np.int64)
    k = 2 * (level_n - 1)
    scaled_t = [t.scaled(max(k, t.exp)) for t in curve.params]
    shift = [max(k, t.exp) - k for t in curve.params]
    lo = np.array([s >> sh for s, sh in zip(scaled_t, shift)], dtype=np.int64)
    on_boundary = np.array([(s & ((1 << sh) - 1)) == 0 for s, sh in zip(scaled_t, shift)])
    bad = []
    for idx, on_b in ((lo, None), (lo - 1, on_boundary)):
        sel = (idx >= 0) & (idx < len(tris))
        if on_b is not None:
            sel &= on_b
        ii = np.flatnonzero(sel)
        if not len(ii):
            continue
        corner = np.array([[c.x.scaled(K), c.y.scaled(K)] for t in tris for c in (t.a, t.b, t.c)],
                          dtype=np.int64).reshape(len(tris), 3, 2)[idx[ii]]
        px, py = X[ii], Y[ii]
        signs = []
        for u, v in ((0, 1), (1, 2), (2, 0)):
            ex = corner[:, v, 0] - corner[:, u, 0]
            ey = corner[:, v, 1] - corner[:, u, 1]
            signs.append(np.sign(ex * (py - corner[:, u, 1]) - ey * (px - corner[:, u, 0])))
        s = np.stack(signs)
        out = (s < 0).any(axis=0) & (s > 0).any(axis=0)
        for j in ii[out][:5]:
            bad.append(f"point at t={curve.params[j]} leaves triangle {int(idx[j]) + 1}")
    return bad


def check_containment(levels: list[TowerLevel], n: int) -> CheckResult:
    """Every later curve stays in the level-n triangle of its parameter interval."""
    level = levels[n - 1]
    bad = []
    for m in range(n, len(levels) + 1):
        for curve in (levels[m - 1].curve, levels[m - 1].curve_t):
            bad += [f"level {m}: {b}" for b in _contained(n, level.triangles, curve)]
    return _result("containment", n, bad, later_levels=len(levels) - n + 1)


def check_lengths(level: TowerLevel) -> CheckResult:
    n = level.n
    got, got_t = path_length(level.curve), path_length(level.curve_t)
    want, want_t = Quad(1 << n), SQRT2 * Quad(1 << (n - 1))
    bad = []
    if got != want:
        bad.append(f"length of g o pi is {got}, expected {want}")
    if got_t != want_t:
        bad.append(f"length of gt o pit is {got_t}, expected {want_t}")
    return _result("lengths", n, bad, length=got.to_json(), length_t=got_t.to_json())


def expected_counts(n: int) -> dict:
    e, et = 2, 1
    for k in range(1, n):
        e, et = 2 * e + 2 * 4 ** (k - 1), 2 * et + 4 ** (k - 1)
    return {"edges_E": e, "edges_Et": et, "breakpoints_pi": 2 * 4 ** (n - 1) + 1,
            "breakpoints_pit": 4 ** (n - 1) + 1}


def level_counts(level: TowerLevel) -> dict:
    return {"edges_E": level.E.n_edges, "edges_Et": level.Et.n_edges,
            "breakpoints_pi": len(level.pi.params), "breakpoints_pit": len(level.pit.params)}


def check_counts(level: TowerLevel) -> CheckResult:
    got, want = level_counts(level), expected_counts(level.n)
    bad = [f"{k} = {got[k]}, expected {want[k]}" for k in want if got[k] != want[k]]
    return _result("counts", level.n, bad, **got)


def check_density(level: TowerLevel) -> CheckResult:
    """Breakpoint images are sqrt(2)/2**(n-1)-dense on the grid of pitch 1/2**(n+1)."""
    from .plcurve import OrderedTriangle
    radius = hyp_length(level.n)
    ok = density_check(level.curve.points, OrderedTriangle(A, B, C), radius, level.n + 1)
    return _result("density", level.n, [] if ok else ["some grid point is not covered"])


# ---------------------------------------------------------------------------
# the headline scenario


def default_refine(n: int) -> int:
    return 1 if n <= 4 else 0


def certificate_loops(levels: list[TowerLevel], n: int):
    """Tree loops pi_1 * rev(pi_n) in E_n and pit_1 * rev(pit_n) in Et_n, with their plane images."""
    first, level = levels[0], levels[n - 1]
    out = []
    for name, p1, pn, g in (("alpha_vs_gamma", first.pi, level.pi, level.g),
                            ("beta_vs_gamma_t", first.pit, level.pit, level.gt)):
        loop = loop_concat_reverse(p1.on_tree(pn.tree), pn)
        out.append((name, loop, map_path(loop, g), g.lipschitz))
    return out


def check_certificates(levels: list[TowerLevel], n: int, refine: int | None = None,
                       workers: int | None = 1) -> list[CheckResult]:
    """Tree-derived height functions certify both loops; classes are consistent."""
    if refine is None:
        refine = default_refine(n)
    out = []
    for name, tloop, ploop, L in certificate_loops(levels, n):
        h = height_from_tree_path(tloop, L)
        rep, cls = verify_with_classes(ploop, h, refine=refine, workers=workers)
        out.append(CheckResult(
            f"certificate_{name}", n, rep.passed,
            "" if rep.passed else f"{rep.violation_count} violating pairs",
            rep.to_json()))
        out.append(CheckResult(
            f"classes_{name}", n, cls.passed,
            "" if cls.passed else f"{cls.violation_count} related pairs map to different points",
            cls.to_json()))
    return out


def refute_alpha_beta(first: TowerLevel) -> tuple[Verdict, CheckResult]:
    """alpha * rev(beta) is a simple closed curve, hence not tree-like."""
    from .plcurve import Point2
    loop = loop_concat_reverse(first.curve, first.curve_t)
    verdict = decide_polygonal_loop(loop)
    probe = Point2(Dyadic(1, 2), Dyadic(5, 3))
    w = winding_number(loop, probe)
    bad = []
    if verdict.kind != "NotTreeLike":
        bad.append(f"verdict is {verdict.kind}")
    if w == 0:
        bad.append("winding number about (1/4, 5/8) is zero")
    res = _result("refutation_alpha_beta", 1, bad, verdict=verdict.to_json(),
                  probe=probe.to_json(), winding_number=w)
    return verdict, res


def _guarded(name: str, level: int | None, fn, *args) -> list[CheckResult]:
    """Run a check; an exception on corrupt input becomes a failed result."""
    try:
        out = fn(*args)
    except (ValueError, KeyError, IndexError, AssertionError, ZeroDivisionError) as exc:
        return [CheckResult(name, level, False, f"check raised {type(exc).__name__}: {exc}")]
    return out if isinstance(out, list) else [out]


def run_suite(levels: list[TowerLevel], refine: int | None = None, workers: int | None = 1,
              certificate_levels: int | None = None) -> dict:
    """Every invariant family over ``levels``; returns a JSON-ready report."""
    N = len(levels)
    sections: dict[str, list[CheckResult]] = {
        "hypotheses": [], "curve_gap": [], "cauchy": [], "containment": [],
        "lengths": [], "counts": [], "density": [], "certificates": [], "refutation": [],
    }
    for n in range(1, N + 1):
        level = levels[n - 1]
        hyp = [("edge_lengths", check_edge_lengths, level)]
        if n > 1:
            hyp += [("retraction", check_retraction, levels[n - 2], level),
                    ("restriction", check_restriction, levels[n - 2], level)]
        hyp += [("isometry", check_isometry, level), ("triangles", check_triangles, level),
                ("parameterization", check_parameterizations, level)]
        for name, fn, *args in hyp:
            sections["hypotheses"] += _guarded(name, n, fn, *args)
        sections["curve_gap"] += _guarded("curve_gap", n, check_curve_gap, level)
        if n > 1:
            sections["cauchy"] += _guarded("cauchy", n, check_cauchy, levels[n - 2], level)
            sections["density"] += _guarded("density", n, check_density, level)
        sections["containment"] += _guarded("containment", n, check_containment, levels, n)
        sections["lengths"] += _guarded("lengths", n, check_lengths, level)
        sections["counts"] += _guarded("counts", n, check_counts, level)
    cert_top = N if certificate_levels is None else min(N, certificate_levels)
    verdicts = {"alpha_vs_gamma": "Unverified", "beta_vs_gamma_t": "Unverified"}
    for n in range(1, cert_top + 1):
        r = refine if refine is not None else default_refine(n)
        res = _guarded("certificates", n, check_certificates, levels, n, r, workers)
        sections["certificates"] += res
        if n == cert_top:
            for c in res:
                if c.name.startswith("certificate_") and c.passed:
                    verdicts[c.name[len("certificate_"):]] = "TreeLike"
    try:
        verdict, res = refute_alpha_beta(levels[0])
        sections["refutation"].append(res)
        verdicts["alpha_vs_beta"] = verdict.kind
    except (ValueError, KeyError, IndexError) as exc:
        sections["refutation"].append(CheckResult("refutation_alpha_beta", 1, False, f"check raised {exc!r}"))
        verdicts["alpha_vs_beta"] = "Unverified"
    passed = {k: all(c.passed for c in v) for k, v in sections.items()}
    return {
        "levels": N,
        "passed": all(passed.values()),
        "section_passed": passed,
        "verdicts": verdicts,
        "sections": {k: [c.to_json() for c in v] for k, v in sections.items()},
    }
