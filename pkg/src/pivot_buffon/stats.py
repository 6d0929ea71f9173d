"""Agreement statistics between simulated tallies and exact probabilities."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import CategoryCollapseError
from .geometry import HitDistribution
from .montecarlo import EstimateReport, TallyCounts

MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float


def wilson_interval(successes: int, n: int, z: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= successes <= n:
        raise ValueError(f"successes must be in [0, n], got {successes}")
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    p = successes / n
    z2n = z * z / n
    denom = 1.0 + z2n
    center = (p + 0.5 * z2n) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / n + z2n / (4.0 * n))
    lo = 0.0 if successes == 0 else max(0.0, min(center - half, p))
    hi = 1.0 if successes == n else min(1.0, max(center + half, p))
    return lo, hi


def z_scores(report: EstimateReport, exact: HitDistribution) -> tuple[float, float, float]:
    """``(p_hat_i - p_i) / sqrt(p_i (1 - p_i) / N)`` under the exact null.

    A category with ``p_i`` in {0, 1} has zero null variance: its score is 0
    when the estimate matches and signed infinity otherwise.
    """
    n = report.n_throws
    out = []
    for p_hat, p in zip(report.p_hat, exact):
        diff = p_hat - p
        var = p * (1.0 - p) / n
        if var > 0.0:
            out.append(diff / math.sqrt(var))
        elif diff == 0.0:
            out.append(0.0)
        else:
            out.append(math.copysign(math.inf, diff))
    return tuple(out)


def chi2_sf(x: float, dof: int) -> float:
    """Chi-square survival function for one or two degrees of freedom."""
    if x <= 0.0:
        return 1.0
    if dof == 2:
        return math.exp(-0.5 * x)
    if dof == 1:
        return math.erfc(math.sqrt(0.5 * x))
    raise ValueError(f"only dof 1 and 2 are supported, got {dof}")


def _pearson(observed, expected) -> float:
    return math.fsum((o - e) ** 2 / e for o, e in zip(observed, expected))


def chi_square_gof(counts: TallyCounts, exact: HitDistribution) -> ChiSquareResult:
    """Pearson test of the 0/1/2 tallies against a fully specified null (dof 2)."""
    if counts.c_other:
        raise ValueError(f"{counts.c_other} throws with 3+ crossings; the test needs a + b <= d")
    n = counts.n_throws
    expected = [n * p for p in exact]
    for i, e in enumerate(expected):
        if e == 0.0:
            raise CategoryCollapseError(
                f"category {i} has zero expected count; "
                "merge categories and use chi_square_gof_collapsed (2 categories)"
            )
        if e < MIN_EXPECTED:
            raise ValueError(f"expected count {e:.3g} in category {i} is below {MIN_EXPECTED}; increase N")
    stat = _pearson((counts.c0, counts.c1, counts.c2), expected)
    return ChiSquareResult(stat, 2, chi2_sf(stat, 2))


def chi_square_gof_collapsed(counts: TallyCounts, exact: HitDistribution) -> ChiSquareResult:
    """Two-category test (miss vs. hit, dof 1), for needles that cannot cross twice.

    Observed double crossings are counted with the hits, so they still show
    up as disagreement through the miss category.
    """
    if counts.c_other:
        raise ValueError(f"{counts.c_other} throws with 3+ crossings; the test needs a + b <= d")
    n = counts.n_throws
    expected = [n * exact.p0, n * (exact.p1 + exact.p2)]
    for e in expected:
        if e < MIN_EXPECTED:
            raise ValueError(f"expected count {e:.3g} is below {MIN_EXPECTED}; increase N")
    stat = _pearson((counts.c0, counts.c1 + counts.c2), expected)
    return ChiSquareResult(stat, 1, chi2_sf(stat, 1))


@dataclass(frozen=True)
class Verdict:
    z: tuple[float, float, float]
    chi_square: ChiSquareResult
    collapsed: bool
    z_limit: float
    p_value_limit: float

    @property
    def passed(self) -> bool:
        return all(abs(z) < self.z_limit for z in self.z) and self.chi_square.p_value > self.p_value_limit


def compare(
    report: EstimateReport,
    exact: HitDistribution,
    z_limit: float = 4.0,
    p_value_limit: float = 1e-3,
) -> Verdict:
    """z-scores plus a chi-square test, collapsing to two categories when ``p2 == 0``."""
    z = z_scores(report, exact)
    try:
        chi = chi_square_gof(report.counts, exact)
        collapsed = False
    except CategoryCollapseError:
        chi = chi_square_gof_collapsed(report.counts, exact)
        collapsed = True
    return Verdict(z, chi, collapsed, z_limit, p_value_limit)
