"""Parameter domains M ⊂ C for surfaces: a disc or an axis-aligned rectangle.

The maximal domain of a solution is never computed (it is exposed as user
configuration); singular cells inside a chosen domain are reported by the
diagnostics instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Domain"]


@dataclass(frozen=True)
class Domain:
    kind: str  # "disc" | "rect"
    center: complex = 0j
    radius: float = 0.0
    u_range: tuple[float, float] = (0.0, 0.0)
    v_range: tuple[float, float] = (0.0, 0.0)

    @staticmethod
    def disc(center: complex = 0j, radius: float = 1.0) -> "Domain":
        if radius <= 0:
            raise ValueError("disc radius must be > 0")
        return Domain(kind="disc", center=complex(center), radius=float(radius))

    @staticmethod
    def rect(u_range, v_range) -> "Domain":
        u0, u1 = map(float, u_range)
        v0, v1 = map(float, v_range)
        if not (u0 < u1 and v0 < v1):
            raise ValueError("rectangle ranges must be nonempty")
        return Domain(kind="rect", u_range=(u0, u1), v_range=(v0, v1))

    def contains(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        if self.kind == "disc":
            return np.abs(w - self.center) <= self.radius
        u0, u1 = self.u_range
        v0, v1 = self.v_range
        return (w.real >= u0) & (w.real <= u1) & (w.imag >= v0) & (w.imag <= v1)

    def bounding_rect(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """(u_range, v_range) of the default grid rectangle inside the domain."""
        if self.kind == "rect":
            return self.u_range, self.v_range
        # inscribed square of the disc
        half = self.radius / np.sqrt(2.0)
        c = self.center
        return (c.real - half, c.real + half), (c.imag - half, c.imag + half)

    def samples(self, n: int = 25, seed: int = 7, margin: float = 0.0) -> np.ndarray:
        """Deterministic interior sample points (always includes the center)."""
        rng = np.random.default_rng(seed)
        if self.kind == "disc":
            r = (self.radius - margin) * np.sqrt(rng.uniform(0.0, 1.0, n))
            th = rng.uniform(0.0, 2 * np.pi, n)
            pts = self.center + r * np.exp(1j * th)
            mid = self.center
        else:
            (u0, u1), (v0, v1) = self.u_range, self.v_range
            us = rng.uniform(u0 + margin, u1 - margin, n)
            vs = rng.uniform(v0 + margin, v1 - margin, n)
            pts = us + 1j * vs
            mid = 0.5 * (u0 + u1) + 0.5j * (v0 + v1)
        return np.concatenate([[mid], pts])
