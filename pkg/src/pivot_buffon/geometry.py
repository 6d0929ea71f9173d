"""Needle, lattice and throw types plus per-throw geometry.

The lattice is the family of lines ``y = m * d`` for integer ``m``. A throw
is fully described by the pivot height ``y`` and the two segment directions;
the pivot's x-coordinate never affects a crossing count and is not modelled.

Boundary convention: a segment whose endpoint heights span ``[lo, hi]``
crosses every line whose level lies in the half-open interval ``(lo, hi]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .exceptions import DegenerateNeedleError

TWO_PI = 2.0 * math.pi

#: Absolute tolerance on ``p0 + p1 + p2 == 1`` for exact distributions.
SIMPLEX_TOL = 1e-12


def _check_length(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"{name} must be a finite length >= 0, got {value!r}")
    return value


def reduce_angle(theta: float) -> float:
    """Map ``theta`` into ``[0, 2*pi)``."""
    r = math.fmod(theta, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number plus 2*pi rounds up to 2*pi.
    return 0.0 if r >= TWO_PI else r


@dataclass(frozen=True)
class PivotNeedle:
    """Two segments of lengths ``a`` and ``b`` joined at a pivot."""

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", _check_length("a", self.a))
        object.__setattr__(self, "b", _check_length("b", self.b))
        if self.a + self.b == 0.0:
            raise DegenerateNeedleError("needle must have a + b > 0")

    @property
    def total_length(self) -> float:
        return self.a + self.b

    def swapped(self) -> "PivotNeedle":
        return PivotNeedle(self.b, self.a)

    def scaled(self, s: float) -> "PivotNeedle":
        return PivotNeedle(s * self.a, s * self.b)


@dataclass(frozen=True)
class Lattice:
    """Parallel lines ``y = m * d`` with spacing ``d > 0``."""

    d: float

    def __post_init__(self):
        d = float(self.d)
        if not math.isfinite(d) or d <= 0.0:
            raise ValueError(f"line spacing d must be finite and > 0, got {self.d!r}")
        object.__setattr__(self, "d", d)


@dataclass(frozen=True)
class ThrowSample:
    """One throw: pivot height and the directions of both segments.

    Angles are reduced into ``[0, 2*pi)`` on construction. Use :meth:`on` to
    also reduce ``y`` into ``[0, d)``.
    """

    y: float
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "alpha", reduce_angle(float(self.alpha)))
        object.__setattr__(self, "beta", reduce_angle(float(self.beta)))

    @classmethod
    def on(cls, lattice: Lattice, y: float, alpha: float, beta: float) -> "ThrowSample":
        y = math.fmod(float(y), lattice.d)
        if y < 0.0:
            y += lattice.d
        if y >= lattice.d:
            y = 0.0
        return cls(y, alpha, beta)

    @property
    def phi(self) -> float:
        """Opening angle between the two segments, in ``[0, 2*pi)``."""
        return reduce_angle(self.beta - self.alpha)


class Source(str, enum.Enum):
    EXACT = "exact"
    FIXED_ANGLE_EXACT = "fixed_angle_exact"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class HitDistribution:
    """Probabilities of exactly 0, 1 and 2 needle/lattice intersections."""

    p0: float
    p1: float
    p2: float
    source: Source = Source.EXACT

    def __post_init__(self):
        object.__setattr__(self, "source", Source(self.source))
        for name in ("p0", "p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} = {p!r} is not a probability")
        if self.source is not Source.MONTE_CARLO:
            total = self.p0 + self.p1 + self.p2
            if abs(total - 1.0) > SIMPLEX_TOL:
                raise ValueError(f"probabilities sum to {total!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p0, self.p1, self.p2)

    def __iter__(self):
        return iter(self.as_tuple())

    def __getitem__(self, i: int) -> float:
        return self.as_tuple()[i]


def chord_length(needle: PivotNeedle, phi: float) -> float:
    """Distance between the free endpoints at opening angle ``phi``.

    Evaluated as ``sqrt((a-b)^2 + 4ab sin^2(phi/2))``, which equals
    ``sqrt(a^2 + b^2 - 2ab cos(phi))`` but avoids cancellation near ``phi = 0``.
    """
    a, b = needle.a, needle.b
    s = math.sin(0.5 * reduce_angle(phi))
    c = math.sqrt((a - b) ** 2 + 4.0 * a * b * s * s)
    return min(max(c, abs(a - b)), a + b)


def hull_perimeter(needle: PivotNeedle, phi: float) -> float:
    """Perimeter of the triangle spanned by the pivot and both free ends."""
    return needle.a + needle.b + chord_length(needle, phi)


def vertex_heights(needle: PivotNeedle, throw: ThrowSample) -> tuple[float, float, float]:
    """Heights of the pivot, the end of segment ``a`` and the end of segment ``b``."""
    y = throw.y
    return (
        y,
        y + needle.a * math.sin(throw.alpha),
        y + needle.b * math.sin(throw.beta),
    )


def lines_crossed(y0: float, y1: float, d: float) -> int:
    """Count integers ``m`` with ``min(y0, y1) < m * d <= max(y0, y1)``."""
    lo, hi = (y0, y1) if y0 <= y1 else (y1, y0)
    return math.floor(hi / d) - math.floor(lo / d)


def count_intersections(needle: PivotNeedle, lattice: Lattice, throw: ThrowSample) -> int:
    """Number of points where the needle meets a lattice line."""
    yc, ya, yb = vertex_heights(needle, throw)
    return lines_crossed(yc, ya, lattice.d) + lines_crossed(yc, yb, lattice.d)


def hull_hits_lattice(needle: PivotNeedle, lattice: Lattice, throw: ThrowSample) -> bool:
    """Whether any lattice line meets the triangle pivot/end A/end B."""
    heights = vertex_heights(needle, throw)
    return lines_crossed(min(heights), max(heights), lattice.d) >= 1


def distance_to_nearest_line(y: float, d: float) -> float:
    r = math.fmod(y, d)
    if r < 0.0:
        r += d
    return min(r, d - r)
