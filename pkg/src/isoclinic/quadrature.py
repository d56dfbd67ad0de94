"""Composite Gauss-Legendre quadrature along straight segments in C.

All integrands here are holomorphic on a star-shaped (about 0) domain, so
line integrals are path independent and the straight segment [0, w] is a
legitimate path.  The error estimate compares n panels against 2n panels and
the refinement loop doubles the panel count until the target tolerance is
met.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ToleranceNotMet

__all__ = ["QuadConfig", "path_integral", "path_integral_many", "segment_integral"]


@dataclass(frozen=True)
class QuadConfig:
    panels: int = 4
    nodes: int = 16
    tol: float = 1e-10
    max_refinements: int = 8

    def __post_init__(self):
        if self.panels < 1:
            raise ValueError("panels must be >= 1")
        if self.nodes < 2:
            raise ValueError("nodes must be >= 2")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


@lru_cache(maxsize=None)
def _unit_rule(panels: int, nodes: int):
    """Nodes and weights of composite Gauss-Legendre on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0.0, 1.0, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 / panels
    s = (mids[:, None] + half * x[None, :]).ravel()
    weights = np.tile(w * half, panels)
    return s, weights


def _apply(g, s, weights, w):
    """w * sum_k weights_k g(s_k * w) for scalar or 1-d array w."""
    w = np.asarray(w, dtype=complex)
    args = s[:, None] * w[None, :] if w.ndim else s * w
    vals = np.asarray(g(args), dtype=complex)  # (4, nodes[, npts])
    return w * np.tensordot(vals, weights, axes=([1], [0]))


def path_integral_many(g, ws, q: QuadConfig = QuadConfig()):
    """Integrate g over the segments [0, w] for every w in ws.

    g maps a complex array of shape S to an array of shape (4,) + S.  Returns
    (values, error_estimate) with values of shape (4, len(ws)); the estimate
    is the max-norm gap between the last two refinement levels, and
    ToleranceNotMet is raised if it never reaches q.tol.
    """
    ws = np.asarray(ws, dtype=complex)
    flat = ws.ravel()
    panels = q.panels
    s, weights = _unit_rule(panels, q.nodes)
    coarse = _apply(g, s, weights, flat)
    for _ in range(q.max_refinements):
        panels *= 2
        s, weights = _unit_rule(panels, q.nodes)
        fine = _apply(g, s, weights, flat)
        est = float(np.max(np.abs(fine - coarse))) if flat.size else 0.0
        if est <= q.tol:
            return fine.reshape((4,) + ws.shape), est
        coarse = fine
    raise ToleranceNotMet(
        f"quadrature stalled at estimate {est:.3g} > tol {q.tol:.3g}", estimate=est
    )


def path_integral(g, w, q: QuadConfig = QuadConfig()):
    """Integral of g over [0, w]; returns ((4,) complex array, error_estimate)."""
    vals, est = path_integral_many(g, np.asarray([w], dtype=complex), q)
    return vals[:, 0], est


def segment_integral(g, w0, w1, nodes: int = 16):
    """One-panel Gauss-Legendre integral of g over the segment [w0, w1].

    Used for finite-difference stencils: the segments are O(h) long, so a
    single panel is already at machine accuracy, and differences f(w1)-f(w0)
    computed this way share no cancelling quadrature error.
    """
    w0 = np.asarray(w0, dtype=complex)
    w1 = np.asarray(w1, dtype=complex)
    s, weights = _unit_rule(1, nodes)
    delta = w1 - w0
    args = w0[None, ...] + s.reshape((-1,) + (1,) * w0.ndim) * delta[None, ...]
    vals = np.asarray(g(args), dtype=complex)
    return delta * np.tensordot(vals, weights, axes=([1], [0]))
