"""SVG figures of the tower.  The only place numbers become floats."""
from __future__ import annotations

import re
from xml.sax.saxutils import escape

from .construct import TowerLevel
from .mtree import MetricTree
from .plcurve import PlanePath

BLUE = "#1f4fd8"
RED = "#d62728"
MARGIN = 20

__all__ = ["BLUE", "RED", "CURVE_NAMES", "parse_curves", "render_svg", "tree_layout"]

CURVE_NAMES = ("alpha", "beta", "gamma_n", "gamma_t_n", "trees")
_LEVEL_CURVE = re.compile(r"^(gamma|gamma_t)_(\d+)$")


def parse_curves(text: str, max_level: int) -> list[str]:
    """Validate a comma-separated curve list; ``gamma_K`` and ``gamma_t_K`` pick level K."""
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise ValueError("no curves requested")
    for name in names:
        if name in CURVE_NAMES:
            continue
        m = _LEVEL_CURVE.match(name)
        if not m:
            raise ValueError(f"unknown curve {name!r}; choose from {', '.join(CURVE_NAMES)} "
                             "or gamma_K / gamma_t_K")
        k = int(m.group(2))
        if not 1 <= k <= max_level:
            raise ValueError(f"{name}: level {k} is not in 1..{max_level}")
    return names


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _polyline(path: PlanePath, scale: int, ox: float, oy: float, colour: str, width: float,
              label: str) -> str:
    pts = " ".join(f"{_fmt(ox + float(p.x) * scale)},{_fmt(oy + (1 - float(p.y)) * scale)}"
                   for p in path.points)
    return (f'<polyline class="{label}" points="{pts}" fill="none" stroke="{colour}" '
            f'stroke-width="{_fmt(width)}" stroke-linejoin="round"/>')


def tree_layout(tree: MetricTree) -> dict[int, tuple[float, float]]:
    """Layered layout: x is the exact depth, y spreads leaves in DFS order."""
    pos: dict[int, tuple[float, float]] = {}
    ys: dict[int, float] = {}
    slot = 0
    stack = [(tree.root, False)]
    while stack:
        v, done = stack.pop()
        kids = sorted(tree.children.get(v, ()))
        if not done and kids:
            stack.append((v, True))
            stack.extend((c, False) for c in reversed(kids))
            continue
        if kids:
            ys[v] = (ys[kids[0]] + ys[kids[-1]]) / 2
        else:
            ys[v] = float(slot)
            slot += 1
        pos[v] = (float(tree.depth[v]), ys[v])
    return pos


def _tree_panel(tree: MetricTree, colour: str, sx: float, scale: int, ox: float, oy: float,
                label: str) -> tuple[str, float]:
    pos = tree_layout(tree)
    rows = max(y for _, y in pos.values()) + 1
    row_h = max(4.0, min(24.0, 0.6 * scale / rows))

    def at(v):
        x, y = pos[v]
        return ox + x * sx, oy + y * row_h

    parts = [f'<g class="{label}">']
    for v, p, _ in tree.edges():
        (x1, y1), (x2, y2) = at(v), at(p)
        parts.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                     f'stroke="{colour}" stroke-width="1"/>')
    r = max(1.0, min(3.0, row_h / 4))
    for v in tree.vertices:
        x, y = at(v)
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{colour}"/>')
    parts.append("</g>")
    return "\n".join(parts), rows * row_h


def render_svg(levels: list[TowerLevel], level: int, curves: list[str], scale: int = 400) -> str:
    """SVG with the requested curves (blue for g o pi, red for gt o pit) and trees."""
    if scale < 1:
        raise ValueError("scale must be at least 1")
    if not 1 <= level <= len(levels):
        raise ValueError(f"level {level} is not in 1..{len(levels)}")
    lv = levels[level - 1]
    stroke = max(0.5, 2.0 / (1 + level // 3))
    body = []
    y0 = MARGIN
    plane = [c for c in curves if c != "trees"]
    if plane:
        body.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{scale}" height="{scale}" '
                    f'fill="none" stroke="#eeeeee"/>')
        for name in plane:
            if name == "alpha":
                path, colour = levels[0].curve, BLUE
            elif name == "beta":
                path, colour = levels[0].curve_t, RED
            elif name == "gamma_n":
                path, colour = lv.curve, BLUE
            elif name == "gamma_t_n":
                path, colour = lv.curve_t, RED
            else:
                m = _LEVEL_CURVE.match(name)
                k = int(m.group(2))
                tilde = m.group(1) == "gamma_t"
                path = levels[k - 1].curve_t if tilde else levels[k - 1].curve
                colour = RED if tilde else BLUE
            body.append(_polyline(path, scale, MARGIN, MARGIN, colour, stroke, name))
        y0 += scale + MARGIN
    if "trees" in curves:
        # one horizontal scale for both trees so their lengths compare
        reach = max(float(d) for t in (lv.E, lv.Et) for d in t.depth.values()) or 1.0
        for label, tree, colour in (("tree_E", lv.E, BLUE), ("tree_Et", lv.Et, RED)):
            svg, h = _tree_panel(tree, colour, scale / reach, scale, MARGIN, y0, label)
            body.append(svg)
            y0 += h + MARGIN
    width, height = scale + 2 * MARGIN, y0
    title = escape(f"level {level}: {', '.join(curves)}")
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
            f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n<title>{title}</title>\n'
            + "\n".join(body) + "\n</svg>\n")
