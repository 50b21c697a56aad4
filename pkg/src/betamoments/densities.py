"""Limiting global eigenvalue densities and their supports.

All densities return 0 outside the open support so callers can evaluate
them on arbitrary grids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "SpectralSupport",
    "rho_wigner",
    "rho_mp",
    "rho_jacobi",
    "rho_laguerre_scaled",
    "rho_jacobi_scaled",
    "laguerre_scaled_support",
    "jacobi_scaled_support",
    "jacobi_scaled_delta",
]


@dataclass(frozen=True)
class SpectralSupport:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DomainError(f"empty support ({self.lower}, {self.upper})")

    def contains(self, x: float) -> bool:
        """Strict interior test."""
        return self.lower < x < self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


WIGNER_SUPPORT = SpectralSupport(-1.0, 1.0)
UNIT_SUPPORT = SpectralSupport(0.0, 1.0)


def rho_wigner(lam: float) -> float:
    """Semicircle law on (-1, 1)."""
    if -1.0 < lam < 1.0:
        return 2.0 / math.pi * math.sqrt(1.0 - lam * lam)
    return 0.0


def rho_mp(lam: float) -> float:
    """Marchenko-Pastur law with unit hard edge at 0 and soft edge at 1."""
    if 0.0 < lam < 1.0:
        return 2.0 / math.pi * math.sqrt(1.0 / lam - 1.0)
    return 0.0


def rho_jacobi(lam: float) -> float:
    """Arcsine law on (0, 1)."""
    if 0.0 < lam < 1.0:
        return 1.0 / (math.pi * math.sqrt(lam * (1.0 - lam)))
    return 0.0


def laguerre_scaled_support(alpha: float) -> SpectralSupport:
    """(c^2, d^2) with c, d = sqrt(alpha+1) -/+ 1."""
    if not alpha >= 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    r = math.sqrt(alpha + 1.0)
    # c^2 = (r-1)^2 written without cancellation
    lower = (alpha / (r + 1.0)) ** 2
    return SpectralSupport(lower, (r + 1.0) ** 2)


def rho_laguerre_scaled(lam: float, alpha: float) -> float:
    """Density for the Laguerre weight with exponent proportional to N."""
    sup = laguerre_scaled_support(alpha)
    if not sup.contains(lam):
        return 0.0
    disc = 4.0 * lam - (lam - alpha) ** 2
    if disc <= 0.0:
        return 0.0
    return math.sqrt(disc) / (2.0 * math.pi * lam)


def jacobi_scaled_support(a1: float, a2: float) -> SpectralSupport:
    """Endpoints (c1, c2) from their sum and product.

    c1 + c2 = 1 + (a1^2 - a2^2)/A^2 and c1 c2 = a1^2/A^2 with A = a1 + a2 + 2.
    """
    if not (a1 >= 0 and a2 >= 0):
        raise DomainError(f"exponents must be nonnegative, got {a1}, {a2}")
    A = a1 + a2 + 2.0
    total = 1.0 + (a1 * a1 - a2 * a2) / (A * A)
    prod = (a1 / A) ** 2
    # discriminant total^2 - 4 prod factorises as 16 (1+a1)(1+a2)(1+a1+a2)/A^4
    root = 4.0 * math.sqrt((1 + a1) * (1 + a2) * (1 + a1 + a2)) / (A * A)
    upper = 0.5 * (total + root)
    lower = prod / upper if upper > 0 else 0.0
    return SpectralSupport(lower, upper)


def jacobi_scaled_delta(lam: float, a1: float, a2: float) -> float:
    """A^2 (lam - c1)(c2 - lam), the quadratic under the square root."""
    A = a1 + a2 + 2.0
    return (A * A + a1 * a1 - a2 * a2) * lam - A * A * lam * lam - a1 * a1


def rho_jacobi_scaled(lam: float, a1: float, a2: float) -> float:
    """Density for Jacobi exponents proportional to N."""
    sup = jacobi_scaled_support(a1, a2)
    if not sup.contains(lam):
        return 0.0
    A = a1 + a2 + 2.0
    q = (lam - sup.lower) * (sup.upper - lam)
    if q <= 0.0:
        return 0.0
    return A / (2.0 * math.pi) * math.sqrt(q) / (lam * (1.0 - lam))
