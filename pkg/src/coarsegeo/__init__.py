"""Coarse-geometry machinery on hyperbolic groups, with a circle harness.

Exact word arithmetic over free and surface groups supplies Cayley-graph
distances and geodesics at any scale; on top of that sit finite Cayley
balls, boundary points as eventually periodic rays, visual metrics,
coarse projections of boundary triples with their explicit constants,
broken-geodesic recognition, geodesic reconstruction from coarse data,
and perturbation experiments for boundary actions on the circle.
"""

__version__ = "0.1.0"

from .models import GroupModel, free_reduce, get_model, is_trivial, multiply, normal_form
from .ball import Ball, GeodesicPath, build_ball, distance, geodesics_between, get_ball, gromov_product
from .boundary import (
    BoundaryPoint,
    VisualMetricParams,
    gromov_product_infinity,
    make_boundary_point,
    minsep,
    truncate,
    visual_distance,
)
from .hyperbolicity import (
    HyperbolicityCertificate,
    SampleSpec,
    certify_delta,
    four_point_delta,
    ray_product_bound_check,
    thin_constant,
)
from .triples import (
    ConstantsLedger,
    ProjectionResult,
    Triple,
    build_ledger,
    coarse_projection,
    make_triple,
    projection_diameter,
    vertex_preimage,
)
from .recognition import (
    CoarseGeodesicData,
    PiecewiseGeodesic,
    ReconstructionResult,
    check_broken_geodesic,
    corner_products,
    r_connected_components,
    reconstruct,
)
from .circle import (
    CircleAction,
    FuchsianGenus2Spec,
    SchottkySpec,
    SemiConjugacy,
    attracting_fixed_point,
    build_semiconjugacy,
    minimal_set,
    perturb,
    standard_action,
    verify_semiconjugacy,
)

__all__ = [
    "__version__",
    "GroupModel", "free_reduce", "get_model", "is_trivial", "multiply", "normal_form",
    "Ball", "GeodesicPath", "build_ball", "distance", "geodesics_between", "get_ball", "gromov_product",
    "BoundaryPoint", "VisualMetricParams", "gromov_product_infinity", "make_boundary_point",
    "minsep", "truncate", "visual_distance",
    "HyperbolicityCertificate", "SampleSpec", "certify_delta", "four_point_delta",
    "ray_product_bound_check", "thin_constant",
    "ConstantsLedger", "ProjectionResult", "Triple", "build_ledger", "coarse_projection",
    "make_triple", "projection_diameter", "vertex_preimage",
    "CoarseGeodesicData", "PiecewiseGeodesic", "ReconstructionResult",
    "check_broken_geodesic", "corner_products", "r_connected_components", "reconstruct",
    "CircleAction", "FuchsianGenus2Spec", "SchottkySpec", "SemiConjugacy",
    "attracting_fixed_point", "build_semiconjugacy", "minimal_set", "perturb",
    "standard_action", "verify_semiconjugacy",
]
