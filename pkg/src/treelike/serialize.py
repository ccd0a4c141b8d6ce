"""Tower state files: deterministic JSON with a content digest."""
from __future__ import annotations

import hashlib
import json
from dataclasses import replace
from pathlib import Path

from .construct import TowerLevel
from .mtree import MetricTree, leaf_collapse_retraction
from .plcurve import OrderedTriangle, PlanarMap, TreePath

FORMAT_VERSION = 1

__all__ = ["FORMAT_VERSION", "StateError", "canonical_json", "digest", "tower_to_json", "tower_from_json",
           "save_state", "load_state"]


class StateError(ValueError):
    """A state file that cannot be read back into a tower."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(levels_json: list) -> str:
    return hashlib.sha256(canonical_json(levels_json).encode()).hexdigest()


def _level_to_json(level: TowerLevel) -> dict:
    out = {
        "n": level.n,
        "E": level.E.to_json(),
        "Et": level.Et.to_json(),
        "pi": level.pi.to_json(),
        "pit": level.pit.to_json(),
        "g": level.g.to_json(),
        "gt": level.gt.to_json(),
        "triangles": [t.to_json() for t in level.triangles],
    }
    if level.n > 1:
        # leaves collapsed by the retraction onto the previous level
        out["collapsed_leaves"] = {"E": sorted(level.new_leaves[0]), "Et": sorted(level.new_leaves[1])}
    return out


def tower_to_json(levels: list[TowerLevel]) -> dict:
    body = [_level_to_json(lv) for lv in levels]
    meta = {
        "levels": len(levels),
        "counts": [{"n": lv.n, "edges_E": lv.E.n_edges, "edges_Et": lv.Et.n_edges,
                    "breakpoints_pi": len(lv.pi.params), "breakpoints_pit": len(lv.pit.params),
                    "triangles": len(lv.triangles)} for lv in levels],
    }
    return {"format_version": FORMAT_VERSION, "digest": digest(body), "metadata": meta, "levels": body}


def _level_from_json(obj: dict) -> TowerLevel:
    E = MetricTree.from_json(obj["E"])
    Et = MetricTree.from_json(obj["Et"])
    leaves = obj.get("collapsed_leaves", {"E": [], "Et": []})
    return TowerLevel(
        int(obj["n"]), E, Et,
        TreePath.from_json(E, obj["pi"]), TreePath.from_json(Et, obj["pit"]),
        PlanarMap.from_json(E, obj["g"]), PlanarMap.from_json(Et, obj["gt"]),
        tuple(OrderedTriangle.from_json(t) for t in obj["triangles"]),
        new_leaves=(tuple(int(v) for v in leaves["E"]), tuple(int(v) for v in leaves["Et"])),
    )


def tower_from_json(obj: dict, check_digest: bool = True) -> tuple[list[TowerLevel], bool]:
    """Rebuild the levels; returns ``(levels, digest_ok)``.

    With ``check_digest`` a mismatch raises; otherwise it is reported through
    the flag so that a verifier can still examine a tampered file.
    """
    try:
        if obj.get("format_version") != FORMAT_VERSION:
            raise StateError(f"unsupported format_version {obj.get('format_version')!r}")
        body = obj["levels"]
        ok = digest(body) == obj["digest"]
        if check_digest and not ok:
            raise StateError("digest does not match the level data")
        levels = [_level_from_json(lv) for lv in body]
    except StateError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise StateError(f"malformed state: {exc!r}") from exc
    if not levels:
        raise StateError("state holds no levels")
    for k, lv in enumerate(levels, 1):
        if lv.n != k:
            raise StateError(f"level {k} is labelled n={lv.n}")
    for k in range(len(levels) - 1):
        nxt = levels[k + 1]
        try:
            pair = (leaf_collapse_retraction(nxt.E, nxt.new_leaves[0]),
                    leaf_collapse_retraction(nxt.Et, nxt.new_leaves[1]))
        except ValueError as exc:
            raise StateError(f"level {k + 2}: {exc}") from exc
        levels[k] = replace(levels[k], retraction_from_next=pair)
    return levels, ok


def save_state(levels: list[TowerLevel], path) -> dict:
    obj = tower_to_json(levels)
    Path(path).write_text(canonical_json(obj) + "\n")
    return obj


def load_state(path, check_digest: bool = True) -> tuple[list[TowerLevel], bool]:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateError(f"not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise StateError("state must be a JSON object")
    return tower_from_json(obj, check_digest)
