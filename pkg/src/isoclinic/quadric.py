"""Oriented spacelike planes as points of the quadric Q^2 in CP^3.

A plane with isothermic basis {v, w} is encoded by the projective point
[v + iw].  The complex-bilinear extension <<.,.>> of the ambient metric cuts
out the quadric <<z,z>> = 0, partitioned by the sign of the real number
<<z, conj z>> into positive / negative / null plane classes.

The chart used throughout is

    Phi([z]) = ( (z1 + i z2)/(z3 - i z4), (z1 - i z2)/(z3 - i z4) )

with inverse W(x, y) = mu (x + y, -i(x - y), 1 + xy, i(1 - xy)).  Points with
z3 - i z4 = 0 are resolved through the on-quadric identity
(z1 + i z2)(z1 - i z2) = (z3 + i z4)(z3 - i z4), which extends Phi
continuously to all of Q^2; infinite chart coordinates are represented by the
module constant INFINITY.  In this convention

    [z(x, y)] -> [1,  i, x, -ix]   as y -> inf,
    [z(x, y)] -> [1, -i, y, -iy]   as x -> inf,
    [z(x, y)] -> [0, 0, 1, -i]     as both -> inf,

and the degenerate pi_12 representatives land at [1, i, 0, 0] -> (0, inf)
and [1, -i, 0, 0] -> (inf, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import inner
from .errors import OffQuadric, WrongClass

__all__ = [
    "INFINITY",
    "is_infinite",
    "ext_inv",
    "cbilinear",
    "ProjPoint",
    "QuadricSign",
    "QuadricClass",
    "classify",
    "phi_chart",
    "w_point",
    "sign_from_chart",
    "normal_J",
    "orthobasis_check",
]

#: The single point at infinity of the Riemann sphere.
INFINITY = complex(np.inf, 0.0)

TAU_Q_DEFAULT = 1e-9
TAU_PROJ_DEFAULT = 1e-9
RHO_MIN_DEFAULT = 1e-12


def is_infinite(z: complex) -> bool:
    return not np.isfinite(complex(z))


def ext_inv(z: complex) -> complex:
    """1/z on the Riemann sphere: 1/0 = INFINITY, 1/INFINITY = 0."""
    if is_infinite(z):
        return 0j
    z = complex(z)
    if z == 0:
        return INFINITY
    return 1.0 / z


def cbilinear(z, w):
    """Complex-bilinear (not Hermitian) extension of the R^4_2 inner product."""
    return inner(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))


class ProjPoint:
    """A point of CP^3, stored as a nonzero representative in C^4."""

    __slots__ = ("z",)

    def __init__(self, z, rho_min: float = RHO_MIN_DEFAULT):
        z = np.asarray(z, dtype=complex)
        if z.shape != (4,):
            raise ValueError(f"representative must have shape (4,), got {z.shape}")
        if not (np.all(np.isfinite(z.real)) and np.all(np.isfinite(z.imag))):
            raise ValueError("representative has non-finite components")
        if np.max(np.abs(z)) < rho_min:
            raise ValueError("representative is (numerically) zero")
        self.z = z

    def normalized(self) -> np.ndarray:
        """Representative scaled so its max-modulus component equals 1."""
        k = int(np.argmax(np.abs(self.z)))
        return self.z / self.z[k]

    def proportional_to(self, other: "ProjPoint", tau: float = TAU_PROJ_DEFAULT) -> bool:
        return bool(np.max(np.abs(self.normalized() - other.normalized())) <= tau)

    def __repr__(self):
        return f"ProjPoint({np.array2string(self.z, precision=6)})"


class QuadricSign(Enum):
    POS = "pos"
    NEG = "neg"
    NULL = "null"
    OFF_QUADRIC = "off-quadric"


@dataclass(frozen=True)
class QuadricClass:
    kind: QuadricSign
    zz: complex  # <<z, z>>
    zzbar: float  # <<z, conj z>> (real)


def _as_point(p) -> ProjPoint:
    return p if isinstance(p, ProjPoint) else ProjPoint(p)


def classify(p, tau_q: float = TAU_Q_DEFAULT) -> QuadricClass:
    """Quadric membership and plane class of [z]; scale invariant."""
    p = _as_point(p)
    z = p.z
    scale = float(np.sum(np.abs(z) ** 2))
    zz = complex(cbilinear(z, z))
    zzbar = float(cbilinear(z, np.conj(z)).real)
    band = tau_q * scale
    if abs(zz) > band:
        kind = QuadricSign.OFF_QUADRIC
    elif zzbar > band:
        kind = QuadricSign.POS
    elif zzbar < -band:
        kind = QuadricSign.NEG
    else:
        kind = QuadricSign.NULL
    return QuadricClass(kind, zz, zzbar)


def _resolve_ratio(num, den, alt_num, alt_den, eps):
    """num/den on the Riemann sphere, falling back to the on-quadric identity."""
    if abs(den) > eps:
        return num / den
    if abs(num) > eps:
        return INFINITY
    if abs(alt_den) > eps:
        return alt_num / alt_den
    return INFINITY


def phi_chart(p, tau_q: float = TAU_Q_DEFAULT) -> tuple[complex, complex]:
    """Chart coordinates (x, y) of an on-quadric point; INFINITY allowed."""
    p = _as_point(p)
    cls = classify(p, tau_q)
    if cls.kind is QuadricSign.OFF_QUADRIC:
        raise OffQuadric(f"<<z,z>> = {cls.zz:.3g} is not zero relative to |z|^2")
    z = p.normalized()
    plus = z[0] + 1j * z[1]
    minus = z[0] - 1j * z[1]
    q = z[2] - 1j * z[3]
    s = z[2] + 1j * z[3]
    eps = 1e-14
    x = _resolve_ratio(plus, q, s, minus, eps)
    y = _resolve_ratio(minus, q, s, plus, eps)
    return x, y


def w_point(x: complex, y: complex, mu: complex = 1.0) -> ProjPoint:
    """Inverse chart: the representative mu (x+y, -i(x-y), 1+xy, i(1-xy)).

    Infinite coordinates use the continuous limits of the finite formula:
    (x, inf) -> [1, i, x, -ix], (inf, y) -> [1, -i, y, -iy],
    (inf, inf) -> [0, 0, 1, -i].  Always lands on the quadric.
    """
    mu = complex(mu)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    xi, yi = is_infinite(x), is_infinite(y)
    if xi and yi:
        rep = np.array([0, 0, 1, -1j], dtype=complex)
    elif yi:
        x = complex(x)
        rep = np.array([1, 1j, x, -1j * x], dtype=complex)
    elif xi:
        y = complex(y)
        rep = np.array([1, -1j, y, -1j * y], dtype=complex)
    else:
        x = complex(x)
        y = complex(y)
        rep = np.array([x + y, -1j * (x - y), 1 + x * y, 1j * (1 - x * y)], dtype=complex)
    return ProjPoint(mu * rep)


def sign_from_chart(x: complex, y: complex, tau: float = TAU_Q_DEFAULT) -> QuadricSign:
    """Plane class from chart coordinates: the sign of (1-|x|^2)(1-|y|^2).

    Verified against the brute-force expansion <<z, conj z>> =
    2|mu|^2 (1-|x|^2)(1-|y|^2); infinite coordinates contribute the sign
    limit of their factor, and |x| = 1 or |y| = 1 (within tau) gives NULL.
    """
    factors = []
    for c in (x, y):
        if is_infinite(c):
            factors.append(-1.0)
        else:
            m = abs(complex(c))
            if abs(m - 1.0) <= tau:
                return QuadricSign.NULL
            factors.append(1.0 - m * m)
    prod = factors[0] * factors[1]
    return QuadricSign.POS if prod > 0 else QuadricSign.NEG


def normal_J(p, tau_q: float = TAU_Q_DEFAULT) -> ProjPoint:
    """Normal operator: the quadric point of the orthogonal-complement plane.

    In chart coordinates (x, y) -> (x, 1/conj(y)); an involution that swaps
    the positive and negative classes and fixes the null class.  The result
    is pointwise <<.,.>>-orthogonal to p and to conj(p).
    """
    x, y = phi_chart(p, tau_q)
    if is_infinite(y):
        y_new: complex = 0j
    else:
        y_new = ext_inv(np.conj(complex(y)))
    return w_point(x, y_new)


def orthobasis_check(zneg, zpos, tau: float = TAU_PROJ_DEFAULT) -> bool:
    """True iff the two planes' real bases assemble to an orthogonal basis of R^4_2.

    Requires [zneg] negative and [zpos] positive; the condition is
    |<<zneg, zpos>>| <= tau and |<<zneg, conj zpos>>| <= tau on unit-norm
    representatives, equivalent to the Re/Im parts being mutually orthogonal.
    """
    pn = _as_point(zneg)
    pp = _as_point(zpos)
    cn = classify(pn)
    cp = classify(pp)
    if cn.kind is not QuadricSign.NEG:
        raise WrongClass(f"first argument classifies as {cn.kind.value}, want neg")
    if cp.kind is not QuadricSign.POS:
        raise WrongClass(f"second argument classifies as {cp.kind.value}, want pos")
    a = pn.z / np.linalg.norm(pn.z)
    b = pp.z / np.linalg.norm(pp.z)
    return bool(
        abs(cbilinear(a, b)) <= tau and abs(cbilinear(a, np.conj(b))) <= tau
    )
