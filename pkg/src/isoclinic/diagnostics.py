"""Pointwise and grid-level geometric verification of solved surfaces.

Second partials come from the symbolic derivative g' through the structural
identities f_uu = Re g', f_uv = -Im g', f_vv = -Re g' (so f_uu + f_vv = 0
exactly); the independent minimality check finite-differences the
quadrature-evaluated immersion instead.  Gauss curvature is computed two
ways (conformal-factor Laplacian and second fundamental form) that must
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import apply_L, inner, plane_hyperbolic_angle, PlaneAngleReport
from .errors import CurveOffSurface, NearSingular, NotSpacelike
from .quadrature import path_integral, segment_integral
from .quadric import normal_J
from .surfaces import Surface

__all__ = [
    "Jet2",
    "FirstForm",
    "PointReport",
    "CellFlag",
    "jet",
    "first_form",
    "gauss_curvature",
    "isoclinic_residual",
    "hyperbolic_angle_at",
    "minimality_residual",
    "normal_frame",
    "geodesic_check",
    "asymptotic_check",
    "singular_scan",
    "point_report",
]

TAU_SING_DEFAULT = 1e-6


@dataclass(frozen=True)
class Jet2:
    """Second-order pointwise data of an immersion at w."""

    w: complex
    f: np.ndarray
    f_u: np.ndarray
    f_v: np.ndarray
    f_uu: np.ndarray
    f_uv: np.ndarray
    f_vv: np.ndarray
    quad_error: float


def jet(s: Surface, w: complex) -> Jet2:
    """Assemble f (by quadrature) and all derivatives (exact, from g and g')."""
    w = complex(w)
    vals, est = path_integral(s.integrand.evaluate, w, s.quad)
    f = s.base + vals.real
    g = s.g_at(np.asarray(w)).reshape(4)
    gp = s.gprime_at(np.asarray(w)).reshape(4)
    return Jet2(
        w=w,
        f=f,
        f_u=g.real,
        f_v=-g.imag,
        f_uu=gp.real,
        f_uv=-gp.imag,
        f_vv=-gp.real,
        quad_error=est,
    )


@dataclass(frozen=True)
class FirstForm:
    E: float
    F: float
    G: float
    lam2: float  # |E| for a conformal immersion
    kind: str  # "positive" | "negative" | "null"


def first_form(j: Jet2, tau_sing: float = TAU_SING_DEFAULT) -> FirstForm:
    E = float(inner(j.f_u, j.f_u))
    F = float(inner(j.f_u, j.f_v))
    G = float(inner(j.f_v, j.f_v))
    if E > tau_sing:
        kind = "positive"
    elif E < -tau_sing:
        kind = "negative"
    else:
        kind = "null"
    return FirstForm(E=E, F=F, G=G, lam2=abs(E), kind=kind)


def _lam2_at(s: Surface, w) -> np.ndarray:
    g = s.g_at(np.asarray(w, dtype=complex))
    fu = g.real
    return np.abs(inner(np.moveaxis(fu, 0, -1), np.moveaxis(fu, 0, -1)))


def normal_frame(s: Surface, w: complex, tau_sing: float = TAU_SING_DEFAULT):
    """Orthonormal basis {N1, N2} of the normal plane at w, with metric signs.

    Built from the quadric point of the orthogonal complement, normal_J([g]),
    by metric Gram-Schmidt on its real and imaginary parts.
    """
    g = s.g_at(np.asarray(w)).reshape(4)
    zn = normal_J(g).z
    n1 = zn.real
    q1 = float(inner(n1, n1))
    if abs(q1) <= tau_sing * float(np.dot(n1, n1)):
        raise NearSingular(f"normal plane degenerates at w = {w:.6g}")
    e1 = 1 if q1 > 0 else -1
    n1 = n1 / np.sqrt(abs(q1))
    n2 = zn.imag - e1 * float(inner(zn.imag, n1)) * n1
    q2 = float(inner(n2, n2))
    if abs(q2) <= tau_sing * float(np.dot(n2, n2)):
        raise NearSingular(f"normal plane degenerates at w = {w:.6g}")
    e2 = 1 if q2 > 0 else -1
    n2 = n2 / np.sqrt(abs(q2))
    return n1, n2, e1, e2


def gauss_curvature(
    s: Surface,
    w: complex,
    method: str = "conformal",
    h: float = 1e-3,
    richardson: bool = False,
    tau_sing: float = TAU_SING_DEFAULT,
) -> float:
    """Gauss curvature at w by one of two independent routes.

    conformal:  K = -eps (1/lam^2) Laplacian(ln lam), eps the surface sign
                (+1 positive, -1 negative: the induced metric of a negative
                surface is -lam^2 (du^2+dv^2) and K flips with the metric
                sign).  The Laplacian uses a 5-point stencil of exact
                lam values with optional Richardson extrapolation.
    secondform: K = (e1 det B^1 + e2 det B^2) / det g over the normal frame
                from normal_J, e_k = <N_k, N_k>; quadrature- and FD-free.
    """
    w = complex(w)
    lam2_c = float(_lam2_at(s, w))
    if lam2_c <= tau_sing:
        raise NearSingular(f"lam^2 = {lam2_c:.3g} at w = {w:.6g}")
    eps = 1.0 if s.sign == "positive" else -1.0

    if method == "secondform":
        g = s.g_at(np.asarray(w)).reshape(4)
        gp = s.gprime_at(np.asarray(w)).reshape(4)
        f_u, f_v = g.real, -g.imag
        f_uu, f_uv, f_vv = gp.real, -gp.imag, -gp.real
        n1, n2, e1, e2 = normal_frame(s, w, tau_sing)
        det_g = float(inner(f_u, f_u)) * float(inner(f_v, f_v)) - float(inner(f_u, f_v)) ** 2
        total = 0.0
        for n, e in ((n1, e1), (n2, e2)):
            b11 = float(inner(f_uu, n))
            b12 = float(inner(f_uv, n))
            b22 = float(inner(f_vv, n))
            total += e * (b11 * b22 - b12 * b12)
        return total / det_g
    if method != "conformal":
        raise ValueError(f"unknown curvature method {method!r}")

    def lap_lnlam(step):
        pts = np.array(
            [w + step, w - step, w + 1j * step, w - 1j * step, w], dtype=complex
        )
        lam2 = _lam2_at(s, pts)
        if np.any(lam2 <= tau_sing):
            raise NearSingular(f"lam^2 vanishes inside the stencil at w = {w:.6g}")
        ln = 0.5 * np.log(lam2)
        return (ln[0] + ln[1] + ln[2] + ln[3] - 4 * ln[4]) / step**2

    lap = lap_lnlam(h)
    if richardson:
        lap = (4.0 * lap_lnlam(h / 2) - lap) / 3.0
    return -eps * lap / lam2_c


def isoclinic_residual(j: Jet2, tau_sing: float = TAU_SING_DEFAULT) -> float:
    """min over orientation of |f_v -+ L f_u| / lam; zero iff tangent isoclinic."""
    ff = first_form(j, tau_sing)
    if ff.kind == "null":
        raise NotSpacelike(f"tangent plane is null at w = {j.w:.6g}")
    lam = np.sqrt(ff.lam2)
    lf = apply_L(j.f_u)
    r = min(
        float(np.linalg.norm(j.f_v - lf)),
        float(np.linalg.norm(j.f_v + lf)),
    )
    return r / lam


def hyperbolic_angle_at(j: Jet2, tau_iso: float = 1e-9, tau_sing: float = TAU_SING_DEFAULT) -> PlaneAngleReport:
    """Hyperbolic-angle report of the tangent plane at the jet's point."""
    ff = first_form(j, tau_sing)
    if ff.kind == "null":
        raise NotSpacelike(f"tangent plane is null at w = {j.w:.6g}")
    lam = np.sqrt(ff.lam2)
    return plane_hyperbolic_angle(j.f_u / lam, j.f_v / lam, ff.kind, tau_iso)


def minimality_residual(
    s: Surface, w: complex, h: float = 1e-3, richardson: bool = True
) -> float:
    """|FD Laplacian of f| at w, with f evaluated through quadrature.

    Independent of the structural identity f_uu + f_vv = 0: it validates the
    quadrature and the holomorphic extension together.  Stencil values are
    integrals over the four short segments from w, so the common integral
    from 0 cancels exactly instead of being divided by h^2; Richardson
    (default) removes the O(h^2) truncation term, which on oscillatory
    gallery surfaces already exceeds 1e-5 at h = 1e-3.
    """
    w = complex(w)

    def lap(step):
        shifts = np.array([step, -step, 1j * step, -1j * step], dtype=complex)
        deltas = segment_integral(
            s.integrand.evaluate, np.full(4, w, dtype=complex), w + shifts, s.quad.nodes
        )
        return np.sum(deltas.real, axis=1) / step**2

    value = lap(h)
    if richardson:
        value = (4.0 * lap(h / 2) - value) / 3.0
    return float(np.linalg.norm(value))


def _tangent_projection(s: Surface, t: float, vec, tau_sing: float):
    g = s.g_at(np.asarray(complex(t))).reshape(4)
    f_u, f_v = g.real, -g.imag
    E = float(inner(f_u, f_u))
    if abs(E) <= tau_sing:
        raise NearSingular(f"tangent plane degenerates at t = {t:.6g}")
    lam = np.sqrt(abs(E))
    eps = 1 if E > 0 else -1
    t1, t2 = f_u / lam, f_v / lam
    return eps * float(inner(vec, t1)) * t1 + eps * float(inner(vec, t2)) * t2


def _require_on_surface(s: Surface, c, t: float):
    c = c if c is not None else s.curve
    if c is None:
        raise CurveOffSurface("no curve given and surface was not built from one")
    gap = float(np.max(np.abs(s.position(complex(t)) - c.at(t))))
    if gap > max(10 * s.quad.tol, 1e-9):
        raise CurveOffSurface(f"f(t,0) misses the curve by {gap:.3g} at t = {t:.6g}")
    return c


def geodesic_check(s: Surface, c, t: float, tau_sing: float = TAU_SING_DEFAULT) -> float:
    """|tangential component of c''| / |c''| at t; ~0 iff c is a geodesic.

    c may be None for a surface built from a curve.
    """
    c = _require_on_surface(s, c, t)
    c2 = c.second.evaluate_real(t)
    tang = _tangent_projection(s, t, c2, tau_sing)
    norm = float(np.linalg.norm(c2))
    return float(np.linalg.norm(tang)) / (norm if norm > 0 else 1.0)


def asymptotic_check(s: Surface, c, t: float, tau_sing: float = TAU_SING_DEFAULT) -> float:
    """|normal component of c''| / |c''| at t; ~0 iff c is an asymptotic line."""
    c = _require_on_surface(s, c, t)
    c2 = c.second.evaluate_real(t)
    tang = _tangent_projection(s, t, c2, tau_sing)
    norm = float(np.linalg.norm(c2))
    return float(np.linalg.norm(c2 - tang)) / (norm if norm > 0 else 1.0)


@dataclass(frozen=True)
class CellFlag:
    """A grid cell whose corners witness a metric singularity."""

    i: int
    j: int
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    reason: str  # "sign-change" | "near-null"


def singular_scan(
    s: Surface,
    u_range=None,
    v_range=None,
    nu: int = 33,
    nv: int = 33,
    tau_sing: float = TAU_SING_DEFAULT,
) -> list[CellFlag]:
    """Scan a grid for cells where the conformal factor vanishes or changes sign.

    E = <f_u, f_u> is evaluated at the cell corners; a cell is flagged when E
    changes sign across it or |E| < tau_sing at a corner (for graph pairs this
    is exactly the |Psi'| = |Phi'| locus).  Ranges default to the domain's
    bounding rectangle.
    """
    (u0, u1), (v0, v1) = s.domain.bounding_rect()
    if u_range is not None:
        u0, u1 = map(float, u_range)
    if v_range is not None:
        v0, v1 = map(float, v_range)
    us = np.linspace(u0, u1, nu)
    vs = np.linspace(v0, v1, nv)
    W = us[:, None] + 1j * vs[None, :]
    g = s.g_at(W)
    fu = g.real
    E = inner(np.moveaxis(fu, 0, -1), np.moveaxis(fu, 0, -1))
    flags = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            corners = E[i : i + 2, j : j + 2].ravel()
            if np.any(np.abs(corners) < tau_sing):
                reason = "near-null"
            elif corners.min() < 0 < corners.max():
                reason = "sign-change"
            else:
                continue
            flags.append(
                CellFlag(
                    i=i,
                    j=j,
                    u_range=(float(us[i]), float(us[i + 1])),
                    v_range=(float(vs[j]), float(vs[j + 1])),
                    reason=reason,
                )
            )
    return flags


@dataclass(frozen=True)
class PointReport:
    """All pointwise diagnostics bundled for reporting."""

    w: complex
    E: float
    F: float
    G: float
    lam2: float
    kind: str
    conformal_gap: float  # max(|E - G|, |2F|) / lam2
    isoclinic: float
    coshsq: float
    K_conformal: float
    K_secondform: float
    minimality: float


def point_report(s: Surface, w: complex, tau_sing: float = TAU_SING_DEFAULT) -> PointReport:
    j = jet(s, w)
    ff = first_form(j, tau_sing)
    if ff.kind == "null":
        raise NearSingular(f"lam^2 = {ff.E:.3g} at w = {w:.6g}")
    angle = hyperbolic_angle_at(j, tau_sing=tau_sing)
    return PointReport(
        w=complex(w),
        E=ff.E,
        F=ff.F,
        G=ff.G,
        lam2=ff.lam2,
        kind=ff.kind,
        conformal_gap=max(abs(ff.E - ff.G), 2 * abs(ff.F)) / ff.lam2,
        isoclinic=isoclinic_residual(j, tau_sing),
        coshsq=0.5 * (angle.coshsq_min + angle.coshsq_max),
        K_conformal=gauss_curvature(s, w, "conformal", tau_sing=tau_sing),
        K_secondform=gauss_curvature(s, w, "secondform", tau_sing=tau_sing),
        minimality=minimality_residual(s, w),
    )
