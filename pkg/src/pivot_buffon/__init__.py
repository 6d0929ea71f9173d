"""Buffon's problem for a needle made of two segments joined at a pivot.

Exact hitting probabilities on a lattice of parallel lines, and a seeded
Monte Carlo simulation to check them.
"""

from .closed_form import (
    expected_intersections,
    fixed_angle_distribution,
    hit_distribution,
    mean_chord,
    modulus,
    p_both,
    p_union,
)
from .elliptic import Modulus, complete_e, complete_e_quadrature
from .exceptions import (
    CategoryCollapseError,
    ConstraintError,
    DegenerateNeedleError,
    DomainError,
    InternalConsistencyError,
    PivotBuffonError,
    QuadratureError,
)
from .geometry import (
    HitDistribution,
    Lattice,
    PivotNeedle,
    Source,
    ThrowSample,
    chord_length,
    count_intersections,
    hull_hits_lattice,
    hull_perimeter,
)
from .montecarlo import EstimateReport, SimulationConfig, TallyCounts, run, run_fixed_angle

__version__ = "0.1.0"
