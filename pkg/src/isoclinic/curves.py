"""Analytic curves, frame fields, and 4-component expression vectors.

A VecExpr is four expressions of one variable; evaluated at real t it is a
curve/field in R^4_2 and evaluated at complex w it is the unique holomorphic
extension.  The symbolic algebra here (L, the ternary cross product, inner
products, normalization) is what the solvers use to assemble holomorphic
integrands whose derivatives are again exact expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import expressions as ex
from .errors import EvaluationError, TriadInvalid, WrongCausalSign
from .expressions import Expr

__all__ = ["VecExpr", "CurveR4", "Triad", "interior_grid"]


@dataclass(frozen=True)
class VecExpr:
    """Four expressions of one shared variable."""

    components: tuple[Expr, Expr, Expr, Expr]

    @staticmethod
    def parse(texts) -> "VecExpr":
        if len(texts) != 4:
            raise ValueError(f"expected 4 component expressions, got {len(texts)}")
        return VecExpr(tuple(ex.parse(t) for t in texts))

    def evaluate(self, w) -> np.ndarray:
        """Array of shape (4,) + shape(w), complex."""
        w = np.asarray(w, dtype=complex)
        return np.stack([np.broadcast_to(ex.evaluate(c, w), w.shape) for c in self.components])

    def evaluate_real(self, t, tol: float = 1e-9) -> np.ndarray:
        """Evaluate on the real axis and require a real result."""
        vals = self.evaluate(np.asarray(t, dtype=float))
        bad = float(np.max(np.abs(vals.imag), initial=0.0))
        scale = float(np.max(np.abs(vals), initial=0.0)) + 1.0
        if bad > tol * scale:
            raise EvaluationError(
                f"field is not real on the axis (max imaginary part {bad:.3g})"
            )
        return vals.real

    def derivative(self) -> "VecExpr":
        return VecExpr(tuple(ex.differentiate(c) for c in self.components))

    def apply_L(self) -> "VecExpr":
        """Componentwise symbolic L: (-v2, v1, -v4, v3)."""
        c1, c2, c3, c4 = self.components
        return VecExpr((ex.neg(c2), c1, ex.neg(c4), c3))

    def scaled(self, factor: Expr) -> "VecExpr":
        return VecExpr(tuple(ex.mul(factor, c) for c in self.components))

    def divided(self, denom: Expr) -> "VecExpr":
        return VecExpr(tuple(ex.div(c, denom) for c in self.components))

    def minus_i_times(self, other: "VecExpr") -> "VecExpr":
        """Components of self - i*other (holomorphic combination)."""
        return VecExpr(
            tuple(
                ex.sub(a, ex.mul(ex.const(1j), b))
                for a, b in zip(self.components, other.components)
            )
        )


def inner_expr(a: VecExpr, b: VecExpr) -> Expr:
    """Symbolic <a, b> = -a1 b1 - a2 b2 + a3 b3 + a4 b4."""
    a1, a2, a3, a4 = a.components
    b1, b2, b3, b4 = b.components
    pos = ex.add(ex.mul(a3, b3), ex.mul(a4, b4))
    neg = ex.add(ex.mul(a1, b1), ex.mul(a2, b2))
    return ex.sub(pos, neg)


def _det3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    t1 = ex.mul(a, ex.sub(ex.mul(e, i), ex.mul(f, h)))
    t2 = ex.mul(b, ex.sub(ex.mul(d, i), ex.mul(f, g)))
    t3 = ex.mul(c, ex.sub(ex.mul(d, h), ex.mul(e, g)))
    return ex.add(ex.sub(t1, t2), t3)


def cross_expr(x: VecExpr, y: VecExpr, z: VecExpr) -> VecExpr:
    """Symbolic ternary cross product (same minors as algebra.cross)."""

    def minor(cols):
        return _det3(
            [
                [x.components[c] for c in cols],
                [y.components[c] for c in cols],
                [z.components[c] for c in cols],
            ]
        )

    d234 = minor((1, 2, 3))
    d134 = minor((0, 2, 3))
    d124 = minor((0, 1, 3))
    d123 = minor((0, 1, 2))
    return VecExpr((d234, ex.neg(d134), ex.neg(d124), d123))


def interior_grid(radius: float, n: int = 65) -> np.ndarray:
    """Sample grid of the open interval (-radius, radius), endpoints excluded."""
    return np.linspace(-radius, radius, n + 2)[1:-1]


@dataclass(frozen=True)
class CurveR4:
    """Real-analytic curve from I = (-r, r) into R^4_2, as four expressions."""

    components: VecExpr
    radius: float
    label: str = ""

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("interval radius must be > 0")
        # invariant: finite on a sample grid of I
        vals = self.components.evaluate_real(interior_grid(self.radius, 33))
        if not np.all(np.isfinite(vals)):
            raise ValueError("curve does not evaluate finitely on its interval")

    @staticmethod
    def parse(texts, radius: float, label: str = "") -> "CurveR4":
        return CurveR4(VecExpr.parse(texts), radius, label)

    @cached_property
    def prime(self) -> VecExpr:
        return self.components.derivative()

    @cached_property
    def second(self) -> VecExpr:
        return self.prime.derivative()

    @cached_property
    def third(self) -> VecExpr:
        return self.second.derivative()

    def at(self, t) -> np.ndarray:
        return self.components.evaluate_real(t)

    def causal_sign_on_axis(self, tau_null: float, n: int = 65) -> str:
        """Strict causal sign of c' on I; raises on null or mixed samples."""
        from .errors import SingularOnAxis

        t = interior_grid(self.radius, n)
        speed2 = inner_expr(self.prime, self.prime)
        q = ex.evaluate(speed2, t.astype(complex)).real
        if np.any(np.abs(q) <= tau_null):
            worst = float(t[np.argmin(np.abs(q))])
            raise SingularOnAxis(f"<c',c'> vanishes near t = {worst:.6g}")
        if np.all(q > 0):
            return "positive"
        if np.all(q < 0):
            return "negative"
        raise WrongCausalSign("<c',c'> changes sign on the interval")


@dataclass(frozen=True)
class Triad:
    """Bjorling data: a curve plus an orthonormal frame {A, B} of its normal plane.

    With normalize=True the given fields are rescaled symbolically by
    1/sqrt(s <A,A>) (s the causal sign at t=0), so e.g. the parabola data
    A = (t,0,1,0)/sqrt(1-t^2) can be entered as the raw polynomial field.
    """

    curve: CurveR4
    frame_a: VecExpr
    frame_b: VecExpr
    normalize: bool = False
    label: str = ""
    _normalized: tuple[VecExpr, VecExpr] = field(init=False, repr=False, default=None)

    def __post_init__(self):
        a, b = self.frame_a, self.frame_b
        if self.normalize:
            a = _normalize_field(a)
            b = _normalize_field(b)
        object.__setattr__(self, "_normalized", (a, b))

    @property
    def A(self) -> VecExpr:
        return self._normalized[0]

    @property
    def B(self) -> VecExpr:
        return self._normalized[1]

    def validate(self, curve_sign: str, tau: float = 1e-8, n: int = 65):
        """Check the triad invariants on a grid of I; raise TriadInvalid."""
        t = interior_grid(self.curve.radius, n).astype(complex)
        want = -1.0 if curve_sign == "positive" else 1.0  # sign of <A,A>, <B,B>
        checks = {
            f"<A,A> = {want:+.0f}": ex.sub(inner_expr(self.A, self.A), ex.const(want)),
            f"<B,B> = {want:+.0f}": ex.sub(inner_expr(self.B, self.B), ex.const(want)),
            "<A,B> = 0": inner_expr(self.A, self.B),
            "<A,c'> = 0": inner_expr(self.A, self.curve.prime),
            "<B,c'> = 0": inner_expr(self.B, self.curve.prime),
        }
        for name, expr in checks.items():
            worst = float(np.max(np.abs(ex.evaluate(expr, t))))
            if worst > tau:
                raise TriadInvalid(f"triad violates {name} (residual {worst:.3g} > {tau:.3g})")


def _normalize_field(v: VecExpr) -> VecExpr:
    """Divide v by sqrt(s <v,v>), s = sign of <v,v> at 0 (constant on I by contract)."""
    norm2 = inner_expr(v, v)
    q0 = complex(ex.evaluate(norm2, 0.0)).real
    if q0 == 0:
        raise TriadInvalid("frame field is null at t = 0; cannot normalize")
    s = 1.0 if q0 > 0 else -1.0
    radicand = ex.mul(ex.const(s), norm2)
    return v.divided(ex.sqrt_expr(radicand))
