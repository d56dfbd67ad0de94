"""The constructive solvers and the Surface object they produce.

Every solver assembles a holomorphic integrand g (four expressions) and the
surface is

    f(w) = base + Re integral_0^w g(xi) d xi,

so the first derivatives are quadrature-free exact identities

    f_u(w) = Re g(w),      f_v(w) = -Im g(w),      f_w = g / 2,

and the second derivatives come from the symbolic derivative g'.  Conformal
minimality is equivalent to <<g, g>> = 0 with g holomorphic; the causal class
of the tangent plane is the quadric class of [g(w)].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import expressions as ex
from .algebra import cross, inner
from .curves import CurveR4, Triad, VecExpr, cross_expr, inner_expr, interior_grid
from .domain import Domain
from .errors import (
    IncompatibleDPrime,
    NotGoodCurve,
    SignMismatch,
    SingularDomain,
    WrongCausalSign,
)
from .quadrature import QuadConfig, path_integral_many
from .quadric import QuadricSign, classify, sign_from_chart

__all__ = [
    "Surface",
    "GoodFrame",
    "solve_cauchy_isoclinic",
    "solve_bjorling",
    "solve_schwarz_direct",
    "weierstrass_surface",
    "graph_pair",
    "frenet_good_frame",
]

_SIGN_TO_CLASS = {"positive": QuadricSign.POS, "negative": QuadricSign.NEG}


def _check_sign(sign: str):
    if sign not in _SIGN_TO_CLASS:
        raise ValueError(f"sign must be 'positive' or 'negative', got {sign!r}")


@dataclass(frozen=True, eq=False)
class Surface:
    """A solved conformal minimal immersion, immutable after construction."""

    base: np.ndarray
    integrand: VecExpr
    quad: QuadConfig
    domain: Domain
    provenance: str
    sign: str
    label: str = ""
    closed_form: object = None  # callable w-array -> (4,)+shape real, when exact
    curve: CurveR4 | None = None

    @cached_property
    def integrand_prime(self) -> VecExpr:
        return self.integrand.derivative()

    def g_at(self, w) -> np.ndarray:
        return self.integrand.evaluate(w)

    def gprime_at(self, w) -> np.ndarray:
        return self.integrand_prime.evaluate(w)

    def positions(self, ws, force_quadrature: bool = False) -> np.ndarray:
        """f on an array of parameter points, shape (4,) + shape(ws)."""
        ws = np.asarray(ws, dtype=complex)
        if self.closed_form is not None and not force_quadrature:
            return np.asarray(self.closed_form(ws), dtype=float)
        vals, _ = path_integral_many(self.integrand.evaluate, ws, self.quad)
        return self.base.reshape((4,) + (1,) * ws.ndim) + vals.real

    def position(self, w) -> np.ndarray:
        return self.positions(np.asarray(w, dtype=complex).reshape(()))

    def conformality_residual(self, ws) -> np.ndarray:
        """|<<g,g>>| / |g|^2 at the given points (0 for exact conformality)."""
        g = self.g_at(ws)
        zz = np.abs(inner(np.moveaxis(g, 0, -1), np.moveaxis(g, 0, -1)))
        scale = np.sum(np.abs(g) ** 2, axis=0)
        return zz / np.maximum(scale, 1e-300)


def _axis_quadric_check(g: VecExpr, radius: float, sign: str, n: int = 17):
    """Defensive post-check: [g(t)] lies in the declared class along I."""
    t = interior_grid(radius, n)
    vals = g.evaluate(t.astype(complex))
    want = _SIGN_TO_CLASS[sign]
    for k in range(vals.shape[1]):
        cls = classify(vals[:, k])
        if cls.kind is not want:
            raise WrongCausalSign(
                f"integrand classifies as {cls.kind.value} at t = {t[k]:.6g}, "
                f"expected {want.value}"
            )


def solve_cauchy_isoclinic(
    curve: CurveR4,
    sign: str,
    quad: QuadConfig = QuadConfig(),
    domain: Domain | None = None,
    tau_null: float = 1e-9,
) -> Surface:
    """Isoclinic minimal surface through a spacelike curve: g = C' - i L(C').

    The curve must have the declared causal sign strictly on I.  The result
    satisfies f(t, 0) = c(t) and f_v = L(f_u) identically.
    """
    _check_sign(sign)
    actual = curve.causal_sign_on_axis(tau_null)
    if actual != sign:
        raise WrongCausalSign(f"curve is {actual} on I, declared {sign}")
    cp = curve.prime
    g = cp.minus_i_times(cp.apply_L())
    _axis_quadric_check(g, curve.radius, sign)
    return Surface(
        base=curve.at(0.0),
        integrand=g,
        quad=quad,
        domain=domain or Domain.disc(0j, curve.radius),
        provenance="cauchy",
        sign=sign,
        label=curve.label or "cauchy",
        curve=curve,
    )


def solve_bjorling(
    triad: Triad,
    sign: str,
    quad: QuadConfig = QuadConfig(),
    domain: Domain | None = None,
    tau_null: float = 1e-9,
    triad_tau: float = 1e-8,
) -> Surface:
    """Bjorling solution through a strip: g = C' - i X(C', A, B).

    The normal plane [A + iB] must lie in the class opposite to the curve
    (negative plane field for a positive curve and vice versa); along I the
    solved surface has normal bundle [A(t) + iB(t)].
    """
    _check_sign(sign)
    curve = triad.curve
    actual = curve.causal_sign_on_axis(tau_null)
    if actual != sign:
        raise WrongCausalSign(f"curve is {actual} on I, declared {sign}")
    triad.validate(sign, triad_tau)
    dprime = cross_expr(curve.prime, triad.A, triad.B)
    g = curve.prime.minus_i_times(dprime)
    _axis_quadric_check(g, curve.radius, sign)
    return Surface(
        base=curve.at(0.0),
        integrand=g,
        quad=quad,
        domain=domain or Domain.disc(0j, curve.radius),
        provenance="bjorling",
        sign=sign,
        label=triad.label or curve.label or "bjorling",
        curve=curve,
    )


def solve_schwarz_direct(
    curve: CurveR4,
    dprime: VecExpr,
    sign: str,
    quad: QuadConfig = QuadConfig(),
    domain: Domain | None = None,
    tau_null: float = 1e-9,
    tau: float = 1e-8,
) -> Surface:
    """Schwarz integral with a precomputed d': g = C' - i D'.

    d' plays the role of f_v along the axis, so it must be pointwise
    orthogonal to c' with <d', d'> = <c', c'>.
    """
    _check_sign(sign)
    actual = curve.causal_sign_on_axis(tau_null)
    if actual != sign:
        raise WrongCausalSign(f"curve is {actual} on I, declared {sign}")
    t = interior_grid(curve.radius, 65).astype(complex)
    mixed = np.abs(ex.evaluate(inner_expr(curve.prime, dprime), t))
    q_c = ex.evaluate(inner_expr(curve.prime, curve.prime), t).real
    q_d = ex.evaluate(inner_expr(dprime, dprime), t).real
    scale = float(np.max(np.abs(q_c))) + 1.0
    if float(np.max(mixed)) > tau * scale:
        raise IncompatibleDPrime(
            f"<c', d'> residual {float(np.max(mixed)):.3g} exceeds tolerance"
        )
    if float(np.max(np.abs(q_d - q_c))) > tau * scale:
        raise IncompatibleDPrime(
            f"<d', d'> - <c', c'> residual {float(np.max(np.abs(q_d - q_c))):.3g} "
            "exceeds tolerance"
        )
    g = curve.prime.minus_i_times(dprime)
    _axis_quadric_check(g, curve.radius, sign)
    return Surface(
        base=curve.at(0.0),
        integrand=g,
        quad=quad,
        domain=domain or Domain.disc(0j, curve.radius),
        provenance="schwarz-direct",
        sign=sign,
        label=curve.label or "schwarz-direct",
        curve=curve,
    )


def weierstrass_surface(
    mu: ex.Expr,
    x: ex.Expr,
    y: ex.Expr,
    base,
    sign: str,
    quad: QuadConfig = QuadConfig(),
    domain: Domain | None = None,
) -> Surface:
    """Weierstrass data (mu, x, y): g = 2 mu(w) W(x(w), y(w)).

    W(x, y) = (x + y, -i(x - y), 1 + xy, i(1 - xy)); the declared sign is
    verified against the chart class sign((1-|x|^2)(1-|y|^2)) on domain
    samples.
    """
    _check_sign(sign)
    domain = domain or Domain.disc(0j, 1.0)
    xy = ex.mul(x, y)
    w_vec = VecExpr(
        (
            ex.add(x, y),
            ex.mul(ex.const(-1j), ex.sub(x, y)),
            ex.add(ex.const(1.0), xy),
            ex.mul(ex.const(1j), ex.sub(ex.const(1.0), xy)),
        )
    )
    g = w_vec.scaled(ex.mul(ex.const(2.0), mu))
    samples = domain.samples(24)
    mu_vals = ex.evaluate(mu, samples)
    if float(np.max(np.abs(mu_vals))) < 1e-14:
        raise SignMismatch("mu vanishes at every sampled point")
    x_vals = np.atleast_1d(ex.evaluate(x, samples))
    y_vals = np.atleast_1d(ex.evaluate(y, samples))
    want = _SIGN_TO_CLASS[sign]
    for k in range(samples.size):
        got = sign_from_chart(complex(x_vals[k]), complex(y_vals[k]))
        if got is not want:
            raise SignMismatch(
                f"chart class {got.value} at w = {samples[k]:.6g}, declared {want.value}"
            )
    return Surface(
        base=np.asarray(base, dtype=float),
        integrand=g,
        quad=quad,
        domain=domain,
        provenance="weierstrass",
        sign=sign,
        label="weierstrass",
    )


def graph_pair(
    psi: ex.Expr,
    phi: ex.Expr,
    sign: str,
    domain: Domain,
    quad: QuadConfig = QuadConfig(),
    check: bool = True,
) -> Surface:
    """Isoclinic surface of a holomorphic pair: f = (Re Psi, Im Psi, Re Phi, Im Phi).

    g = (Psi', -i Psi', Phi', -i Phi'); positive surfaces need |Psi'| < |Phi'|
    on the domain and negative ones the reverse.  With check=False the sign
    certification is skipped so that surfaces with metric singularities can be
    built for singular-set scans.
    """
    _check_sign(sign)
    dpsi = ex.differentiate(psi)
    dphi = ex.differentiate(phi)
    g = VecExpr(
        (
            dpsi,
            ex.mul(ex.const(-1j), dpsi),
            dphi,
            ex.mul(ex.const(-1j), dphi),
        )
    )
    if check:
        samples = domain.samples(120)
        gap = (
            np.abs(ex.evaluate(dphi, samples)) ** 2
            - np.abs(ex.evaluate(dpsi, samples)) ** 2
        )
        bad = samples[gap <= 0] if sign == "positive" else samples[gap >= 0]
        if bad.size:
            listed = ", ".join(f"{w:.4g}" for w in bad[:5])
            raise SingularDomain(
                f"|Psi'| vs |Phi'| violates sign {sign!r} at {bad.size} samples "
                f"(e.g. {listed})"
            )

    def closed_form(ws):
        ws = np.asarray(ws, dtype=complex)
        pv = ex.evaluate(psi, ws)
        fv = ex.evaluate(phi, ws)
        return np.stack(
            [np.broadcast_to(a, ws.shape) for a in (pv.real, pv.imag, fv.real, fv.imag)]
        )

    base = closed_form(np.zeros((), dtype=complex)).reshape(4).astype(float)
    return Surface(
        base=base,
        integrand=g,
        quad=quad,
        domain=domain,
        provenance="graph-pair",
        sign=sign,
        label="graph-pair",
        closed_form=closed_form,
    )


# ---------------------------------------------------------------------------
# Frenet-type frames for good curves


@dataclass(frozen=True)
class GoodFrame:
    """Orthonormal frame {T, N1, N2, N3} of a good curve at a parameter value.

    signs holds <X, X> = +-1 for each frame vector; N3 = cross_sign *
    X(T, N1, N2) with cross_sign chosen so the frame is a positive basis.
    """

    t: float
    speed: float
    T: np.ndarray
    N1: np.ndarray
    N2: np.ndarray
    N3: np.ndarray
    signs: tuple[int, int, int, int]
    cross_sign: int


def _unitize(v, tau, stage):
    q = float(inner(v, v))
    scale = float(np.dot(v, v))  # Euclidean, for degeneracy relative to size
    if scale <= tau or abs(q) <= tau * scale:
        raise NotGoodCurve(f"{stage} (|<v,v>| = {abs(q):.3g} with |v|^2 = {scale:.3g})")
    s = 1 if q > 0 else -1
    return v / np.sqrt(abs(q)), s


def frenet_good_frame(curve: CurveR4, t: float, tau_frame: float = 1e-9) -> GoodFrame:
    """Metric Gram-Schmidt frame of c', c'', c''' plus the cross-product normal.

    Raises NotGoodCurve naming the stage that degenerated (null tangent, null
    or tangential c'', or null/dependent c''').
    """
    t = float(t)
    c1 = curve.prime.evaluate_real(t)
    c2 = curve.second.evaluate_real(t)
    c3 = curve.third.evaluate_real(t)

    q1 = float(inner(c1, c1))
    if abs(q1) <= tau_frame:
        raise NotGoodCurve(f"tangent is null at t = {t:.6g}")
    eps_t = 1 if q1 > 0 else -1
    speed = float(np.sqrt(abs(q1)))
    T = c1 / speed

    p2 = c2 - eps_t * float(inner(c2, T)) * T
    N1, eps_1 = _unitize(p2, tau_frame, f"first normal degenerates at t = {t:.6g}")

    p3 = c3 - eps_t * float(inner(c3, T)) * T - eps_1 * float(inner(c3, N1)) * N1
    N2, eps_2 = _unitize(p3, tau_frame, f"second normal degenerates at t = {t:.6g}")

    X = cross(T, N1, N2).real
    eps_3 = eps_t * eps_1 * eps_2  # <X, X> = det Gram(T, N1, N2)
    cross_sign = 1 if eps_3 > 0 else -1
    N3 = cross_sign * X  # makes det(T, N1, N2, N3) = +1; <N3, N3> stays eps_3
    return GoodFrame(
        t=t,
        speed=speed,
        T=T,
        N1=N1,
        N2=N2,
        N3=N3,
        signs=(eps_t, eps_1, eps_2, eps_3),
        cross_sign=cross_sign,
    )
