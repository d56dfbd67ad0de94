"""Minimal spacelike surfaces in the pseudo-Euclidean space R^4_2.

Construct minimal isoclinic surfaces from Cauchy data, solve the Bjorling
problem along analytic strips, build surfaces from Weierstrass chart data or
holomorphic pairs, and verify the geometry numerically (fundamental forms,
Gauss curvature two ways, isoclinicity, hyperbolic angles, geodesic and
asymptotic lines, metric singularities).
"""

from .algebra import (
    CausalClass,
    Causality,
    PlaneAngleReport,
    apply_L,
    apply_N,
    causal,
    cross,
    inner,
    plane_hyperbolic_angle,
    sphere_param,
)
from .curves import CurveR4, Triad, VecExpr
from .diagnostics import (
    Jet2,
    asymptotic_check,
    first_form,
    gauss_curvature,
    geodesic_check,
    hyperbolic_angle_at,
    isoclinic_residual,
    jet,
    minimality_residual,
    singular_scan,
)
from .domain import Domain
from .errors import IsoclinicError
from .expressions import differentiate, evaluate, parse, to_text
from .gallery import GALLERY_NAMES, gallery_config, run_gallery
from .quadrature import QuadConfig, path_integral
from .quadric import (
    INFINITY,
    ProjPoint,
    QuadricClass,
    QuadricSign,
    cbilinear,
    classify,
    normal_J,
    orthobasis_check,
    phi_chart,
    sign_from_chart,
    w_point,
)
from .surfaces import (
    GoodFrame,
    Surface,
    frenet_good_frame,
    graph_pair,
    solve_bjorling,
    solve_cauchy_isoclinic,
    solve_schwarz_direct,
    weierstrass_surface,
)

__version__ = "0.1.0"

__all__ = [
    "CausalClass",
    "Causality",
    "PlaneAngleReport",
    "apply_L",
    "apply_N",
    "causal",
    "cross",
    "inner",
    "plane_hyperbolic_angle",
    "sphere_param",
    "CurveR4",
    "Triad",
    "VecExpr",
    "Jet2",
    "asymptotic_check",
    "first_form",
    "gauss_curvature",
    "geodesic_check",
    "hyperbolic_angle_at",
    "isoclinic_residual",
    "jet",
    "minimality_residual",
    "singular_scan",
    "Domain",
    "IsoclinicError",
    "differentiate",
    "evaluate",
    "parse",
    "to_text",
    "GALLERY_NAMES",
    "gallery_config",
    "run_gallery",
    "QuadConfig",
    "path_integral",
    "INFINITY",
    "ProjPoint",
    "QuadricClass",
    "QuadricSign",
    "cbilinear",
    "classify",
    "normal_J",
    "orthobasis_check",
    "phi_chart",
    "sign_from_chart",
    "w_point",
    "GoodFrame",
    "Surface",
    "frenet_good_frame",
    "graph_pair",
    "solve_bjorling",
    "solve_cauchy_isoclinic",
    "solve_schwarz_direct",
    "weierstrass_surface",
    "__version__",
]
