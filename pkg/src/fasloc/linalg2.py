"""Closed-form 2-D vector and 2x2 matrix arithmetic.

Everything downstream (geometry, information matrices, bounds) lives in two
dimensions, so this module uses exact 2x2 formulas instead of a general
linear-algebra dependency. All values are plain floats; all operations are
pure and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotPositiveDefinite

# A symmetric 2x2 matrix is treated as singular when det <= this floor,
# scaled by trace^2 so the test is invariant under rescaling.
SINGULARITY_REL_TOL = 1e-15


def _require_finite(label: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{label} must be finite, got {v!r}")


@dataclass(frozen=True)
class Vec2:
    """2-D vector; units are whatever the caller puts in (meters mostly)."""

    x: float
    y: float

    def __post_init__(self):
        _require_finite("Vec2 component", self.x, self.y)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, s: float) -> "Vec2":
        return Vec2(s * self.x, s * self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def rot90(self) -> "Vec2":
        """Counter-clockwise quarter turn."""
        return Vec2(-self.y, self.x)


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix with explicit entries.

    Symmetric matrices must be built through :meth:`symmetric` (or another
    path that assigns a12 and a21 from one value) so that a12 == a21 holds
    exactly, never merely up to rounding.
    """

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        _require_finite("Mat2 entry", self.a11, self.a12, self.a21, self.a22)

    @classmethod
    def symmetric(cls, a11: float, a12: float, a22: float) -> "Mat2":
        return cls(a11, a12, a12, a22)

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def zero(cls) -> "Mat2":
        return cls(0.0, 0.0, 0.0, 0.0)

    @property
    def is_symmetric(self) -> bool:
        return self.a12 == self.a21

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 + other.a11,
            self.a12 + other.a12,
            self.a21 + other.a21,
            self.a22 + other.a22,
        )

    def scaled(self, s: float) -> "Mat2":
        return Mat2(s * self.a11, s * self.a12, s * self.a21, s * self.a22)

    def trace(self) -> float:
        return self.a11 + self.a22

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def matvec(self, v: Vec2) -> Vec2:
        return Vec2(self.a11 * v.x + self.a12 * v.y, self.a21 * v.x + self.a22 * v.y)

    def quadform(self, v: Vec2) -> float:
        """v^T M v."""
        return v.dot(self.matvec(v))


def outer(v: Vec2) -> Mat2:
    """v v^T; symmetric PSD with rank <= 1."""
    return Mat2.symmetric(v.x * v.x, v.x * v.y, v.y * v.y)


def singularity_floor(m: Mat2) -> float:
    """Determinant threshold below which ``m`` counts as singular."""
    t = m.trace()
    return SINGULARITY_REL_TOL * max(1.0, t * t)


def _require_symmetric(m: Mat2) -> None:
    if m.a12 != m.a21:
        raise ValueError(f"matrix must be symmetric, got a12={m.a12!r} a21={m.a21!r}")


def logdet(m: Mat2) -> float:
    """ln(det m) for symmetric positive definite m.

    Raises NotPositiveDefinite when det <= 0 or the leading entry is <= 0
    (Sylvester's criterion for the symmetric 2x2 case).
    """
    _require_symmetric(m)
    d = m.det()
    if d <= 0.0 or m.a11 <= 0.0:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (det={d:.6g}, a11={m.a11:.6g})"
        )
    return math.log(d)


def inverse(m: Mat2) -> Mat2:
    """Closed-form inverse of a symmetric 2x2 matrix.

    Raises NotPositiveDefinite when det is at or below the scale-relative
    singularity floor; for information matrices that means the configuration
    is unlocalizable.
    """
    _require_symmetric(m)
    d = m.det()
    if d <= singularity_floor(m):
        raise NotPositiveDefinite(
            f"matrix is numerically singular (det={d:.6g}, floor={singularity_floor(m):.6g})"
        )
    return Mat2.symmetric(m.a22 / d, -m.a12 / d, m.a11 / d)


def is_spd(m: Mat2) -> bool:
    """True when ``m`` is symmetric and numerically positive definite."""
    return m.is_symmetric and m.a11 > 0.0 and m.det() > singularity_floor(m)
