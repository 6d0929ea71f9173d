"""Exact hitting probabilities of the pivot needle.

All functions taking a lattice require ``a + b <= d``: once the needle can
reach two distinct lines the formulas no longer hold, so a longer needle is
refused with :class:`ConstraintError` instead of producing a wrong number.
"""

from __future__ import annotations

import math

from .elliptic import Modulus, complete_e
from .exceptions import ConstraintError, InternalConsistencyError
from .geometry import (
    SIMPLEX_TOL,
    HitDistribution,
    Lattice,
    PivotNeedle,
    Source,
    chord_length,
)

# Rounding slack on a + b <= d, so that e.g. a=0.1, b=0.2, d=0.3 is accepted.
_LENGTH_RTOL = 4 * 2.0**-52


def check_fits(needle: PivotNeedle, lattice: Lattice) -> None:
    """Raise :class:`ConstraintError` unless ``a + b <= d``."""
    total = needle.a + needle.b
    if total > lattice.d * (1.0 + _LENGTH_RTOL):
        raise ConstraintError(
            f"a + b = {total!r} exceeds the line spacing d = {lattice.d!r}; "
            "the hitting probabilities are only valid for a + b <= d"
        )


def modulus(needle: PivotNeedle) -> Modulus:
    """Elliptic modulus with ``k^2 = 4ab / (a+b)^2``."""
    a, b = needle.a, needle.b
    return Modulus(4.0 * a * b / (a + b) ** 2)


def mean_chord(needle: PivotNeedle) -> float:
    """Average free-end distance over a uniform opening angle, ``2(a+b)E(k)/pi``."""
    return 2.0 * needle.total_length * complete_e(modulus(needle)) / math.pi


def p_union(needle: PivotNeedle, lattice: Lattice) -> float:
    """Probability that at least one segment hits a line."""
    check_fits(needle, lattice)
    e = complete_e(modulus(needle))
    return needle.total_length * (math.pi + 2.0 * e) / (math.pi**2 * lattice.d)


def p_both(needle: PivotNeedle, lattice: Lattice) -> float:
    """Probability that both segments hit a line."""
    check_fits(needle, lattice)
    e = complete_e(modulus(needle))
    return needle.total_length * (math.pi - 2.0 * e) / (math.pi**2 * lattice.d)


def _finalize(p0: float, p1: float, p2: float, source: Source) -> HitDistribution:
    total = p0 + p1 + p2
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise InternalConsistencyError(f"p0 + p1 + p2 = {total!r}")
    clamped = []
    for p in (p0, p1, p2):
        if p < -SIMPLEX_TOL or p > 1.0 + SIMPLEX_TOL:
            raise InternalConsistencyError(f"probability {p!r} outside [0, 1]")
        clamped.append(min(max(p, 0.0), 1.0))
    return HitDistribution(*clamped, source=source)


def hit_distribution(needle: PivotNeedle, lattice: Lattice) -> HitDistribution:
    """Probabilities of exactly 0, 1 and 2 intersection points."""
    union = p_union(needle, lattice)
    both = p_both(needle, lattice)
    return _finalize(1.0 - union, union - both, both, Source.EXACT)


def expected_intersections(needle: PivotNeedle, lattice: Lattice) -> float:
    """Mean number of intersection points, ``2(a+b)/(pi d)``.

    The formula holds for any needle length; the ``a + b <= d`` check is kept
    so that ``p1 + 2*p2`` is always a valid cross-check.
    """
    check_fits(needle, lattice)
    return 2.0 * needle.total_length / (math.pi * lattice.d)


def fixed_angle_distribution(needle: PivotNeedle, lattice: Lattice, phi: float) -> HitDistribution:
    """Hit distribution when the opening angle is held at ``phi``."""
    check_fits(needle, lattice)
    c = chord_length(needle, phi)
    s = needle.total_length
    scale = math.pi * lattice.d
    p1 = 2.0 * c / scale
    p2 = (s - c) / scale
    return _finalize(1.0 - (s + c) / scale, p1, p2, Source.FIXED_ANGLE_EXACT)


def special_case_equal(a: float, d: float) -> tuple[float, float, float]:
    """Closed forms for ``a == b`` (where E(1) = 1), evaluated directly."""
    pi2d = math.pi**2 * d
    return (1.0 - 2.0 * a * (math.pi + 2.0) / pi2d, 8.0 * a / pi2d, 2.0 * a * (math.pi - 2.0) / pi2d)


def classical_buffon(length: float, d: float) -> float:
    """Hit probability of a single straight needle, ``2l/(pi d)``."""
    return 2.0 * length / (math.pi * d)
