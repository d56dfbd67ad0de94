"""Linear algebra of the pseudo-Euclidean space R^4_2.

The ambient space is R^4 with the signature (-,-,+,+) inner product

    <v, w> = -v1*w1 - v2*w2 + v3*w3 + v4*w4,

oriented by the volume form dx1^dx2^dx3^dx4.  Everything here is a pure
function on arrays whose last axis has length 4; all operations broadcast
over leading axes and work unchanged on complex arrays (giving the complex
bilinear -- not Hermitian -- extension of the metric).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NotIsothermic, NotSpacelike

__all__ = [
    "METRIC_SIGNS",
    "E1",
    "E2",
    "E3",
    "E4",
    "Causality",
    "CausalClass",
    "PlaneAngleReport",
    "vec4",
    "inner",
    "apply_L",
    "apply_N",
    "cross",
    "causal",
    "sphere_param",
    "plane_hyperbolic_angle",
    "pr12",
    "pr34",
]

METRIC_SIGNS = np.array([-1.0, -1.0, 1.0, 1.0])

E1 = np.array([1.0, 0.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0, 0.0])
E4 = np.array([0.0, 0.0, 0.0, 1.0])

TAU_NULL_DEFAULT = 1e-9
TAU_ISO_DEFAULT = 1e-9


def vec4(v) -> np.ndarray:
    """Validate and return a real 4-vector (finite components required)."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 4:
        raise ValueError(f"expected 4 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def inner(v, w):
    """Signature (-,-,+,+) inner product; bilinear over C on complex input."""
    v = np.asarray(v)
    w = np.asarray(w)
    return (
        -v[..., 0] * w[..., 0]
        - v[..., 1] * w[..., 1]
        + v[..., 2] * w[..., 2]
        + v[..., 3] * w[..., 3]
    )


def apply_L(v):
    """L(v) = (-v2, v1, -v4, v3); orientation- and metric-preserving, L^2 = -I."""
    v = np.asarray(v)
    return np.stack([-v[..., 1], v[..., 0], -v[..., 3], v[..., 2]], axis=-1)


def apply_N(v):
    """N(v) = (-v3, v4, -v1, v2); metric-preserving, N^2 = I, LN + NL = 0."""
    v = np.asarray(v)
    return np.stack([-v[..., 2], v[..., 3], -v[..., 0], v[..., 1]], axis=-1)


def pr12(v):
    """Orthogonal projection onto the (negative) coordinate plane pi_12."""
    v = np.asarray(v)
    out = np.zeros_like(v)
    out[..., 0] = v[..., 0]
    out[..., 1] = v[..., 1]
    return out


def pr34(v):
    """Orthogonal projection onto the (positive) coordinate plane pi_34."""
    v = np.asarray(v)
    out = np.zeros_like(v)
    out[..., 2] = v[..., 2]
    out[..., 3] = v[..., 3]
    return out


def _minor(m, cols):
    return np.linalg.det(m[..., cols])


def cross(x, y, z):
    """Ternary cross product X(x,y,z), the metric dual of the volume form.

    Defined by <X(x,y,z), v> = omega(x,y,z,v) for every v, where omega is the
    determinant of the rows (x, y, z, v).  In coordinates,
    X = (D234, -D134, -D124, D123) with D_ijk the 3x3 minors of the rows
    (x, y, z).  Multilinear and alternating; extends C-trilinearly to complex
    arguments.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    z = np.asarray(z)
    m = np.stack(np.broadcast_arrays(x, y, z), axis=-2)
    d234 = _minor(m, [1, 2, 3])
    d134 = _minor(m, [0, 2, 3])
    d124 = _minor(m, [0, 1, 3])
    d123 = _minor(m, [0, 1, 2])
    return np.stack([d234, -d134, -d124, d123], axis=-1)


class Causality(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NULL = "null"


@dataclass(frozen=True)
class CausalClass:
    kind: Causality
    value: float  # <v, v>


def causal(v, tau_null: float = TAU_NULL_DEFAULT) -> CausalClass:
    """Classify a vector by the sign of <v,v> with a +-tau_null null band."""
    if tau_null < 0:
        raise ValueError("tau_null must be >= 0")
    q = float(inner(v, v).real)
    if q > tau_null:
        kind = Causality.POSITIVE
    elif q < -tau_null:
        kind = Causality.NEGATIVE
    else:
        kind = Causality.NULL
    return CausalClass(kind, q)


def sphere_param(kind: str, phi: float, theta: float, eta: float) -> np.ndarray:
    """Parametrize the unit spheres S^3_2(eps), eps in {-1, +1, 0}.

    negative: F = (cosh phi cos th, cosh phi sin th, sinh phi cos eta, sinh phi sin eta)
    positive: G = (sinh phi cos th, sinh phi sin th, cosh phi cos eta, cosh phi sin eta)
    null:     H = e^phi (cos th, sin th, cos eta, sin eta)
    """
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if kind == "negative":
        a, b = np.cosh(phi), np.sinh(phi)
    elif kind == "positive":
        a, b = np.sinh(phi), np.cosh(phi)
    elif kind == "null":
        a = b = np.exp(phi)
    else:
        raise ValueError(f"unknown sphere kind {kind!r}")
    return np.stack(
        np.broadcast_arrays(a * np.cos(theta), a * np.sin(theta), b * np.cos(eta), b * np.sin(eta)),
        axis=-1,
    )


@dataclass(frozen=True)
class PlaneAngleReport:
    """Hyperbolic angle of a spacelike plane against its reference plane.

    E, F, G are the projected metric coefficients of the normalized basis;
    cosh^2 of the angle sweeps [coshsq_min, coshsq_max] as the direction
    rotates, and the plane is isoclinic iff that range (and F) collapse.
    """

    E: float
    F: float
    G: float
    coshsq_min: float
    coshsq_max: float
    isoclinic: bool


def plane_hyperbolic_angle(
    v1,
    v2,
    sign: str,
    tau_iso: float = TAU_ISO_DEFAULT,
) -> PlaneAngleReport:
    """Angle report of span{v1, v2} against pi_12 (negative) or pi_34 (positive).

    The basis is normalized to unit vectors internally; it must be isothermic
    (orthogonal after normalization, |<v1,v2>| <= tau_iso) and of the declared
    causal sign.  For a negative plane E = -<pr12 v1, pr12 v1> etc.; for a
    positive plane E = +<pr34 v1, pr34 v1> etc.  cosh^2 extremes are those of
    the quadratic form E cos^2 + 2F cos sin + G sin^2.
    """
    v1 = vec4(v1)
    v2 = vec4(v2)
    want = 1.0 if sign == "positive" else -1.0
    q1 = float(inner(v1, v1))
    q2 = float(inner(v2, v2))
    if q1 * want <= 0 or q2 * want <= 0:
        raise NotSpacelike(
            f"basis is not {sign}: <v1,v1> = {q1:.3g}, <v2,v2> = {q2:.3g}"
        )
    u1 = v1 / np.sqrt(abs(q1))
    u2 = v2 / np.sqrt(abs(q2))
    f12 = float(inner(u1, u2))
    if abs(f12) > tau_iso:
        raise NotIsothermic(f"normalized basis not orthogonal: <u1,u2> = {f12:.3g}")

    if sign == "negative":
        p1, p2 = pr12(u1), pr12(u2)
        s = -1.0
    else:
        p1, p2 = pr34(u1), pr34(u2)
        s = 1.0
    E = s * float(inner(p1, p1))
    F = s * float(inner(p1, p2))
    G = s * float(inner(p2, p2))

    # extremes of the quadratic form on the unit circle: eigenvalues of [[E,F],[F,G]]
    mean = 0.5 * (E + G)
    radius = np.hypot(0.5 * (E - G), F)
    lo, hi = mean - radius, mean + radius
    iso = (hi - lo) <= tau_iso and abs(F) <= tau_iso
    return PlaneAngleReport(E=E, F=F, G=G, coshsq_min=lo, coshsq_max=hi, isoclinic=bool(iso))
