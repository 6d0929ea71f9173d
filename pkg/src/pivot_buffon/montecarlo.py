"""Monte Carlo simulation of random throws of the pivot needle.

Every throw ``i`` reads its own fixed slots of one SplitMix64 stream seeded
with ``seed``: slots ``3i, 3i+1, 3i+2`` give ``y, alpha, beta`` (fixed-angle
runs use ``2i, 2i+1`` for ``y, alpha``). A chunk covering throws
``[start, stop)`` therefore jumps straight to its offset, and the tallies are
a pure function of ``(needle, lattice, n_throws, seed)`` whatever the number
of chunks or workers.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .closed_form import check_fits
from .exceptions import ConstraintError
from .geometry import TWO_PI, HitDistribution, Lattice, PivotNeedle, Source, ThrowSample, reduce_angle

MAX_THROWS = 2**40
_INT64_MAX = 2**63 - 1
_BLOCK = 1 << 16
#: Two-sided 95% normal quantile, used for the reported Wilson intervals.
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class SimulationConfig:
    needle: PivotNeedle
    lattice: Lattice
    n_throws: int
    seed: int
    n_chunks: int = 1

    def __post_init__(self):
        if isinstance(self.n_throws, bool) or int(self.n_throws) != self.n_throws:
            raise ValueError(f"n_throws must be an integer, got {self.n_throws!r}")
        if not 1 <= self.n_throws <= MAX_THROWS:
            raise ValueError(f"n_throws must be in [1, 2**40], got {self.n_throws}")
        if not 0 <= self.seed <= rng.MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.n_chunks < 1:
            raise ValueError(f"n_chunks must be >= 1, got {self.n_chunks}")
        object.__setattr__(self, "n_throws", int(self.n_throws))

    def chunk_bounds(self) -> list[tuple[int, int]]:
        """Contiguous ``(start, stop)`` throw ranges; the first ``n % k`` chunks get one extra."""
        base, extra = divmod(self.n_throws, self.n_chunks)
        bounds = []
        start = 0
        for c in range(self.n_chunks):
            stop = start + base + (1 if c < extra else 0)
            bounds.append((start, stop))
            start = stop
        return bounds


@dataclass(frozen=True)
class TallyCounts:
    """Throws with exactly 0, 1, 2 and >= 3 intersection points.

    ``sum_n`` and ``sum_n_sq`` accumulate the count and its square over all
    throws, for the mean and its standard error.
    """

    c0: int = 0
    c1: int = 0
    c2: int = 0
    c_other: int = 0
    sum_n: int = 0
    sum_n_sq: int = 0

    @property
    def n_throws(self) -> int:
        return self.c0 + self.c1 + self.c2 + self.c_other

    def __add__(self, other: "TallyCounts") -> "TallyCounts":
        if not isinstance(other, TallyCounts):
            return NotImplemented
        return TallyCounts(
            self.c0 + other.c0,
            self.c1 + other.c1,
            self.c2 + other.c2,
            self.c_other + other.c_other,
            self.sum_n + other.sum_n,
            self.sum_n_sq + other.sum_n_sq,
        )

    @classmethod
    def from_counts(cls, n: np.ndarray) -> "TallyCounts":
        n = np.asarray(n, dtype=np.int64)
        bins = np.bincount(np.minimum(n, 3), minlength=4)
        return cls(
            int(bins[0]), int(bins[1]), int(bins[2]), int(bins[3]),
            int(n.sum()), int((n * n).sum()),
        )


@dataclass(frozen=True)
class EstimateReport:
    counts: TallyCounts
    p_hat: HitDistribution
    std_errors: tuple[float, float, float]
    intervals: tuple[tuple[float, float], ...]
    mean_n_hat: float
    mean_n_std_error: float
    seed: int
    n_throws: int
    phi: float | None = field(default=None)


class ThrowStream:
    """Sequential access to the throws of one seeded run.

    ``position`` is the index of the next throw, so a stream created with
    ``position=start`` yields exactly the throws a chunk starting there sees.
    """

    def __init__(self, seed: int, lattice: Lattice, position: int = 0, phi: float | None = None):
        self.seed = seed
        self.lattice = lattice
        self.position = position
        self.phi = None if phi is None else reduce_angle(phi)

    @property
    def draws_per_throw(self) -> int:
        return 3 if self.phi is None else 2

    def sample_throw(self) -> ThrowSample:
        k = self.draws_per_throw
        gen = rng.SplitMix64(self.seed, position=k * self.position)
        y = gen.random() * self.lattice.d
        alpha = gen.random() * TWO_PI
        beta = gen.random() * TWO_PI if self.phi is None else alpha + self.phi
        self.position += 1
        return ThrowSample.on(self.lattice, y, alpha, beta)


def sample_throw(stream: ThrowStream) -> ThrowSample:
    """Draw the next throw from ``stream`` and advance it."""
    return stream.sample_throw()


def sample_block(
    seed: int, lattice: Lattice, start: int, count: int, phi: float | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrays ``(y, alpha, beta)`` for throws ``start .. start + count - 1``."""
    if phi is None:
        u = rng.uniform_block(seed, 3 * start, 3 * count).reshape(count, 3)
        y = u[:, 0] * lattice.d
        alpha = u[:, 1] * TWO_PI
        beta = u[:, 2] * TWO_PI
    else:
        u = rng.uniform_block(seed, 2 * start, 2 * count).reshape(count, 2)
        y = u[:, 0] * lattice.d
        alpha = u[:, 1] * TWO_PI
        beta = np.fmod(alpha + reduce_angle(phi), TWO_PI)
    y = np.where(y >= lattice.d, 0.0, y)
    return y, alpha, beta


def _lines_crossed(y0: np.ndarray, y1: np.ndarray, d: float) -> np.ndarray:
    hi = np.floor(np.maximum(y0, y1) / d)
    lo = np.floor(np.minimum(y0, y1) / d)
    return (hi - lo).astype(np.int64)


def count_block(needle: PivotNeedle, lattice: Lattice, y, alpha, beta) -> np.ndarray:
    """Vectorised :func:`geometry.count_intersections`."""
    d = lattice.d
    ya = y + needle.a * np.sin(alpha)
    yb = y + needle.b * np.sin(beta)
    return _lines_crossed(y, ya, d) + _lines_crossed(y, yb, d)


def tally_range(
    config: SimulationConfig,
    start: int,
    stop: int,
    phi: float | None = None,
    fixed_y: float | None = None,
) -> TallyCounts:
    """Tally throws ``[start, stop)``; ``fixed_y`` pins every pivot height (test hook)."""
    total = TallyCounts()
    for lo in range(start, stop, _BLOCK):
        count = min(_BLOCK, stop - lo)
        y, alpha, beta = sample_block(config.seed, config.lattice, lo, count, phi)
        if fixed_y is not None:
            y = np.full_like(y, fixed_y)
        total = total + TallyCounts.from_counts(count_block(config.needle, config.lattice, y, alpha, beta))
    return total


def _tally(config, phi, fixed_y, workers, allow_long) -> TallyCounts:
    try:
        check_fits(config.needle, config.lattice)
    except ConstraintError as exc:
        if not allow_long:
            raise
        warnings.warn(f"{exc}; proceeding, throws with 3+ crossings are tallied in c_other", stacklevel=3)

    bounds = config.chunk_bounds()
    job = lambda b: tally_range(config, b[0], b[1], phi, fixed_y)  # noqa: E731
    if workers is not None and workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    counts = sum(parts, TallyCounts())
    if counts.sum_n_sq > _INT64_MAX:
        raise OverflowError("intersection tally exceeds 64-bit range")
    return counts


def build_report(counts: TallyCounts, seed: int, phi: float | None = None) -> EstimateReport:
    # Local import: stats imports this module for its type hints.
    from .stats import wilson_interval

    n = counts.n_throws
    raw = (counts.c0, counts.c1, counts.c2)
    p_hat = HitDistribution(*(c / n for c in raw), source=Source.MONTE_CARLO)
    std_errors = tuple(math.sqrt(p * (1.0 - p) / n) for p in p_hat)
    intervals = tuple(wilson_interval(c, n, Z_95) for c in raw)
    mean_n = counts.sum_n / n
    var_n = max(counts.sum_n_sq / n - mean_n * mean_n, 0.0)
    return EstimateReport(
        counts=counts,
        p_hat=p_hat,
        std_errors=std_errors,
        intervals=intervals,
        mean_n_hat=mean_n,
        mean_n_std_error=math.sqrt(var_n / n),
        seed=seed,
        n_throws=n,
        phi=phi,
    )


def run(
    config: SimulationConfig,
    *,
    workers: int | None = None,
    allow_long: bool = False,
    fixed_y: float | None = None,
) -> EstimateReport:
    """Simulate ``config.n_throws`` independent random throws.

    Chunks are tallied on up to ``workers`` threads and merged by integer
    addition, so the report does not depend on ``n_chunks`` or ``workers``.
    With ``allow_long`` a needle longer than ``d`` only triggers a warning.
    """
    counts = _tally(config, None, fixed_y, workers, allow_long)
    return build_report(counts, config.seed)


def run_fixed_angle(
    config: SimulationConfig,
    phi: float,
    *,
    workers: int | None = None,
    allow_long: bool = False,
    fixed_y: float | None = None,
) -> EstimateReport:
    """Like :func:`run` but with the opening angle held at ``phi``; only ``y`` and ``alpha`` are drawn."""
    phi = reduce_angle(phi)
    counts = _tally(config, phi, fixed_y, workers, allow_long)
    return build_report(counts, config.seed, phi)
