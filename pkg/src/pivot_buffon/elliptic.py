"""Complete elliptic integral of the second kind.

``complete_e`` uses the arithmetic-geometric mean; ``complete_e_quadrature``
integrates the defining integral directly and serves as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import quadrature
from .exceptions import DomainError

#: Slack allowed on ``k_squared`` when it is computed from lengths.
CONSTRUCTION_TOL = 1e-12

# 1e-16 is below double resolution; a and b can stall one ulp apart.
_AGM_RTOL = 2.0**-52
_AGM_MAX_ITER = 64


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus, stored as ``k_squared``.

    Values within ``CONSTRUCTION_TOL`` outside ``[0, 1]`` are clamped; anything
    further out raises :class:`DomainError`.
    """

    k_squared: float

    def __post_init__(self):
        m = float(self.k_squared)
        if math.isnan(m) or m < -CONSTRUCTION_TOL or m > 1.0 + CONSTRUCTION_TOL:
            raise DomainError(f"k_squared must lie in [0, 1], got {self.k_squared!r}")
        object.__setattr__(self, "k_squared", min(max(m, 0.0), 1.0))

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        if math.isnan(k) or k < -CONSTRUCTION_TOL or k > 1.0 + CONSTRUCTION_TOL:
            raise DomainError(f"k must lie in [0, 1], got {k!r}")
        k = min(max(k, 0.0), 1.0)
        return cls(k * k)

    @property
    def k(self) -> float:
        return math.sqrt(self.k_squared)


def _as_modulus(m) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus(m)


def complete_e(m: Modulus | float) -> float:
    """E(k) = integral of sqrt(1 - k^2 sin^2 t) for t in [0, pi/2].

    A bare float is read as ``k_squared``.

    >>> complete_e(0.0) == math.pi / 2
    True
    >>> complete_e(1.0)
    1.0
    """
    m = _as_modulus(m)
    k2 = m.k_squared
    if k2 == 0.0:
        return math.pi / 2
    if k2 == 1.0:
        return 1.0

    # E = K * (1 - sum_n 2^(n-1) c_n^2), K = pi / (2 * agm(1, sqrt(1 - k^2))).
    a = 1.0
    b = math.sqrt(1.0 - k2)
    weighted = 0.5 * k2
    scale = 0.5
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= _AGM_RTOL * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        scale *= 2.0
        weighted += scale * c * c
    return math.pi / (2.0 * a) * (1.0 - weighted)


def complete_e_quadrature(m: Modulus | float, tol: float = 1e-12) -> float:
    """E(k) by adaptive Gauss-Kronrod quadrature of the defining integral.

    ``tol`` must be in ``(0, 1e-6]``. Raises ``QuadratureError`` when the
    subdivision cap is hit.
    """
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must be in (0, 1e-6], got {tol!r}")
    k2 = _as_modulus(m).k_squared

    def integrand(theta: float) -> float:
        s = math.sin(theta)
        return math.sqrt(max(1.0 - k2 * s * s, 0.0))

    return quadrature.integrate(integrand, 0.0, math.pi / 2, tol=tol)
