"""Exact tower of metric trees whose planar images fill a triangle, with tree-like certificates.

Every length, height and coordinate is an exact dyadic rational or an element
``a + b*sqrt(2)`` with dyadic ``a`` and ``b``; no check uses floating point.
"""
from .exactnum import HALF, ONE, SQRT2, ZERO, Dyadic, Quad, cmp_sqrt_vs_quad, quad_arith, quad_sign
from .mtree import (MetricTree, Retraction, TreeLocation, attach_leaf, geodesic_distance,
                    leaf_collapse_retraction, subdivide_edge)
from .plcurve import (OrderedTriangle, PlanarMap, PlanePath, Point2, SupDistance, TreePath, density_check,
                      loop_concat_reverse, map_path, path_length, sup_distance, tree_sup_distance)
from .construct import (LevelBuilder, ParameterizationReport, TowerLevel, build_tower, check_parameterization,
                        init_level1, subdivide_interval, subdivide_level)
from .verify import (ClassReport, HeightFunction, HeightReport, NotGraphLikeError, QuotientTree, Verdict,
                     class_consistency_check, decide_polygonal_loop, height_from_tree_path, height_inequality,
                     quotient_dendrite, verify_height_function, winding_number)

__version__ = "0.1.0"

__all__ = [
    "Dyadic", "Quad", "ZERO", "ONE", "HALF", "SQRT2", "quad_arith", "quad_sign", "cmp_sqrt_vs_quad",
    "MetricTree", "TreeLocation", "Retraction", "attach_leaf", "subdivide_edge", "geodesic_distance",
    "leaf_collapse_retraction",
    "Point2", "OrderedTriangle", "TreePath", "PlanePath", "PlanarMap", "SupDistance", "map_path",
    "loop_concat_reverse", "sup_distance", "tree_sup_distance", "path_length", "density_check",
    "TowerLevel", "LevelBuilder", "ParameterizationReport", "init_level1", "subdivide_interval",
    "subdivide_level", "build_tower", "check_parameterization",
    "HeightFunction", "HeightReport", "ClassReport", "QuotientTree", "Verdict", "NotGraphLikeError",
    "height_from_tree_path", "height_inequality", "verify_height_function", "class_consistency_check",
    "quotient_dendrite", "decide_polygonal_loop", "winding_number",
]
