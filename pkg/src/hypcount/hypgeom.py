"""Hyperbolic geometry of the upper half-plane.

Points are interior points z = x + iy with y > 0.  Distances use the
standard identity

    cosh rho(z, w) = 1 + |z - w|^2 / (2 Im z Im w),

and the distance from a point to the imaginary-axis geodesic {iy : y > 0}
satisfies cosh dist = |w| / Im w.  Everything here is a pure function on
plain value types; no boundary or projective points are represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "UpperHalfPoint",
    "RealMatrix2",
    "mobius_apply",
    "cosh_dist",
    "dist",
    "sinh_half_dist",
    "cosh_dist_to_imaginary_axis",
]


@dataclass(frozen=True)
class UpperHalfPoint:
    """A point x + iy of the hyperbolic upper half-plane (y > 0)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")
        if self.y <= 0.0:
            raise ValueError(f"point must have positive imaginary part, got y={self.y}")

    @classmethod
    def of(cls, z) -> "UpperHalfPoint":
        """Coerce a complex number, an (x, y) pair, or a point to a point."""
        if isinstance(z, UpperHalfPoint):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag)
        x, y = z
        return cls(float(x), float(y))

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class RealMatrix2:
    """A real 2x2 matrix normalized to determinant one on construction.

    Only orientation-preserving matrices (positive determinant) are
    accepted; these are the isometries of the upper half-plane.
    """

    m11: float
    m12: float
    m21: float
    m22: float

    def __post_init__(self):
        det = self.m11 * self.m22 - self.m12 * self.m21
        if not math.isfinite(det) or det <= 0.0:
            raise ValueError(f"matrix must have positive determinant, got {det}")
        if abs(det - 1.0) > 1e-12:
            s = 1.0 / math.sqrt(det)
            object.__setattr__(self, "m11", self.m11 * s)
            object.__setattr__(self, "m12", self.m12 * s)
            object.__setattr__(self, "m21", self.m21 * s)
            object.__setattr__(self, "m22", self.m22 * s)

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def inverse(self) -> "RealMatrix2":
        return RealMatrix2(self.m22, -self.m12, -self.m21, self.m11)

    def __matmul__(self, other: "RealMatrix2") -> "RealMatrix2":
        return RealMatrix2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def entries(self):
        return (self.m11, self.m12, self.m21, self.m22)


def _matrix_entries(m):
    # Accepts RealMatrix2, modgroup.GammaMatrix, or any 4-entry provider.
    if hasattr(m, "entries"):
        return m.entries()
    if hasattr(m, "as_tuple"):
        return m.as_tuple()
    return tuple(m)


def mobius_apply(m, z: UpperHalfPoint) -> UpperHalfPoint:
    """Apply the fractional-linear action z -> (m11 z + m12)/(m21 z + m22)."""
    z = UpperHalfPoint.of(z)
    m11, m12, m21, m22 = _matrix_entries(m)
    den_re = m21 * z.x + m22
    den_im = m21 * z.y
    den = den_re * den_re + den_im * den_im
    if den == 0.0:
        raise ValueError("Moebius image is a boundary point")
    num_re = m11 * z.x + m12
    num_im = m11 * z.y
    # (num * conj(den)) / |den|^2; Im = det(m) * y / |den|^2
    x = (num_re * den_re + num_im * den_im) / den
    y = (m11 * m22 - m12 * m21) * z.y / den
    return UpperHalfPoint(x, y)


def cosh_dist(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    """cosh of the hyperbolic distance; >= 1 with equality iff z == w."""
    z = UpperHalfPoint.of(z)
    w = UpperHalfPoint.of(w)
    dx = z.x - w.x
    dy = z.y - w.y
    return 1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y)


def dist(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    """Hyperbolic distance rho(z, w) >= 0."""
    c = cosh_dist(z, w)
    # Guard against rounding producing cosh slightly below 1.
    return math.acosh(c) if c > 1.0 else 0.0


def sinh_half_dist(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    """sinh(rho(z, w)/2) = sqrt((cosh rho - 1)/2); zero iff z == w."""
    c = cosh_dist(z, w)
    return math.sqrt(max(c - 1.0, 0.0) / 2.0)


def cosh_dist_to_imaginary_axis(w: UpperHalfPoint) -> float:
    """cosh of the distance from w to the geodesic {iy : y > 0}: |w|/Im w."""
    w = UpperHalfPoint.of(w)
    return math.hypot(w.x, w.y) / w.y
