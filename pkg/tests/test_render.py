import re
import xml.etree.ElementTree as ET

import pytest

from treelike.construct import build_tower
from treelike.render import BLUE, RED, parse_curves, render_svg, tree_layout

NS = {"s": "http://www.w3.org/2000/svg"}


@pytest.fixture(scope="module")
def levels():
    return build_tower(3)


def polylines(svg):
    root = ET.fromstring(svg)
    return {p.get("class"): (p.get("stroke"), p.get("points")) for p in root.iterfind(".//s:polyline", NS)}


def plane_points(points, scale=400, margin=20):
    out = []
    for pair in points.split():
        x, y = (float(v) for v in pair.split(","))
        out.append(((x - margin) / scale, 1 - (y - margin) / scale))
    return out


def test_level2_curves(levels):
    lines = polylines(render_svg(levels, 2, ["gamma_n", "gamma_t_n"]))
    colour, pts = lines["gamma_n"]
    assert colour == BLUE
    assert plane_points(pts) == [(0, 0), (0, .5), (.5, .5), (0, .5), (0, 1), (.5, 1), (.5, .5), (.5, 1), (1, 1)]
    colour, pts = lines["gamma_t_n"]
    assert colour == RED
    assert plane_points(pts) == [(0, 0), (.5, .5), (0, 1), (.5, .5), (1, 1)]


def test_level1_trees(levels):
    root = ET.fromstring(render_svg(levels, 1, ["trees"]))
    groups = {g.get("class"): g for g in root.iterfind(".//s:g", NS)}
    assert len(groups["tree_E"].findall("s:line", NS)) == 2
    assert len(groups["tree_E"].findall("s:circle", NS)) == 3
    assert len(groups["tree_Et"].findall("s:line", NS)) == 1
    assert groups["tree_Et"].find("s:line", NS).get("stroke") == RED


def test_named_levels_and_scale(levels):
    svg = render_svg(levels, 3, ["alpha", "beta", "gamma_2", "gamma_t_3"], scale=100)
    lines = polylines(svg)
    assert set(lines) == {"alpha", "beta", "gamma_2", "gamma_t_3"}
    assert plane_points(lines["alpha"][1], scale=100) == [(0, 0), (0, 1), (1, 1)]
    assert re.search(r'width="140"', svg)


def test_parse_curves():
    assert parse_curves("alpha, trees", 3) == ["alpha", "trees"]
    assert parse_curves("gamma_3", 3) == ["gamma_3"]
    for bad in ("delta", "gamma_4", "", "gamma_t_0"):
        with pytest.raises(ValueError):
            parse_curves(bad, 3)


def test_layout_uses_depths(levels):
    lv = levels[1]
    pos = tree_layout(lv.E)
    assert all(pos[v][0] == float(lv.E.depth[v]) for v in lv.E.vertices)
    leaves = [v for v in lv.E.vertices if lv.E.is_leaf(v) and v != lv.E.root]
    assert len({pos[v][1] for v in leaves}) == len(leaves)


def test_render_errors(levels):
    with pytest.raises(ValueError):
        render_svg(levels, 4, ["alpha"])
    with pytest.raises(ValueError):
        render_svg(levels, 1, ["alpha"], scale=0)
