"""Ensemble descriptions shared by the predictors, oracles and samplers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .densities import (
    UNIT_SUPPORT,
    WIGNER_SUPPORT,
    SpectralSupport,
    jacobi_scaled_support,
    laguerre_scaled_support,
    rho_jacobi,
    rho_jacobi_scaled,
    rho_laguerre_scaled,
    rho_mp,
    rho_wigner,
)
from .errors import DomainError, SupportError

__all__ = ["Family", "EnsembleSpec", "MomentQuery", "PARAM_NAMES"]


class Family(str, Enum):
    GAUSSIAN = "GaussianGlobal"
    LAGUERRE_FIXED = "LaguerreFixed"
    LAGUERRE_SCALED = "LaguerreScaled"
    JACOBI_FIXED = "JacobiFixed"
    JACOBI_SCALED = "JacobiScaled"

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for fam in cls:
            if key in (fam.value.lower(), fam.name.replace("_", "").lower()):
                return fam
        if key == "gaussian":
            return cls.GAUSSIAN
        raise DomainError(f"unknown family {name!r}")


PARAM_NAMES = {
    Family.GAUSSIAN: (),
    Family.LAGUERRE_FIXED: ("a",),
    Family.LAGUERRE_SCALED: ("alpha",),
    Family.JACOBI_FIXED: ("a1", "a2"),
    Family.JACOBI_SCALED: ("alpha1", "alpha2"),
}


@dataclass(frozen=True)
class EnsembleSpec:
    """One of the five weight conventions, at a given beta and size N.

    GaussianGlobal   e^{-beta N x^2}
    LaguerreFixed    x^a e^{-2 beta N x}
    LaguerreScaled   x^{beta N alpha/2} e^{-beta N x/2}
    JacobiFixed      x^{a1} (1-x)^{a2}
    JacobiScaled     x^{beta N alpha1/2} (1-x)^{beta N alpha2/2}
    """

    family: Family
    beta: float
    N: int
    params: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        names = PARAM_NAMES[self.family]
        if len(self.params) != len(names):
            raise DomainError(f"{self.family.value} takes parameters {names}, got {self.params}")
        fam = self.family
        if fam in (Family.LAGUERRE_FIXED, Family.JACOBI_FIXED):
            if any(not v > -1 for v in self.params):
                raise DomainError(f"weight exponents must exceed -1, got {self.params}")
        if fam in (Family.LAGUERRE_SCALED, Family.JACOBI_SCALED):
            if any(not v >= 0 for v in self.params):
                raise DomainError(f"scaled exponents must be nonnegative, got {self.params}")

    @classmethod
    def make(cls, family, beta, N, **params) -> "EnsembleSpec":
        fam = Family.parse(family)
        names = PARAM_NAMES[fam]
        missing = [n for n in names if n not in params]
        if missing:
            raise DomainError(f"{fam.value} needs parameters {missing}")
        return cls(fam, beta, N, tuple(params[n] for n in names))

    def with_N(self, N: int) -> "EnsembleSpec":
        return EnsembleSpec(self.family, self.beta, N, self.params)

    def param_dict(self) -> dict:
        return dict(zip(PARAM_NAMES[self.family], self.params))

    def weight_exponents(self) -> tuple:
        """Actual exponents of x and (1-x) (or of x only) in the weight."""
        fam, b, N = self.family, self.beta, self.N
        if fam is Family.LAGUERRE_FIXED:
            return (self.params[0],)
        if fam is Family.LAGUERRE_SCALED:
            return (b * N * self.params[0] / 2,)
        if fam is Family.JACOBI_FIXED:
            return self.params
        if fam is Family.JACOBI_SCALED:
            return (b * N * self.params[0] / 2, b * N * self.params[1] / 2)
        return ()

    def log_weight(self, x: float) -> float:
        """log of the one-body weight, -inf outside the domain."""
        fam, b, N = self.family, self.beta, self.N
        if fam is Family.GAUSSIAN:
            return -b * N * x * x
        if fam in (Family.LAGUERRE_FIXED, Family.LAGUERRE_SCALED):
            if x <= 0:
                return -math.inf
            (a,) = self.weight_exponents()
            rate = 2 * b * N if fam is Family.LAGUERRE_FIXED else b * N / 2
            return a * math.log(x) - rate * x
        if not 0 < x < 1:
            return -math.inf
        a1, a2 = self.weight_exponents()
        return a1 * math.log(x) + a2 * math.log1p(-x)

    def support(self) -> SpectralSupport:
        fam = self.family
        if fam is Family.GAUSSIAN:
            return WIGNER_SUPPORT
        if fam in (Family.LAGUERRE_FIXED, Family.JACOBI_FIXED):
            return UNIT_SUPPORT
        if fam is Family.LAGUERRE_SCALED:
            return laguerre_scaled_support(self.params[0])
        return jacobi_scaled_support(*self.params)

    def density(self, lam: float) -> float:
        fam = self.family
        if fam is Family.GAUSSIAN:
            return rho_wigner(lam)
        if fam is Family.LAGUERRE_FIXED:
            return rho_mp(lam)
        if fam is Family.JACOBI_FIXED:
            return rho_jacobi(lam)
        if fam is Family.LAGUERRE_SCALED:
            return rho_laguerre_scaled(lam, self.params[0])
        return rho_jacobi_scaled(lam, *self.params)

    def check_interior(self, lam: float) -> None:
        sup = self.support()
        if not sup.contains(lam):
            raise SupportError(
                f"lambda={lam} is not inside the {self.family.value} support "
                f"({sup.lower}, {sup.upper})"
            )
        if not self.density(lam) > 0:
            raise SupportError(f"density vanishes at lambda={lam}")


@dataclass(frozen=True)
class MomentQuery:
    """Target <prod |lam - x_l|^{2p}>."""

    lam: float
    p: int = 1

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise DomainError(f"p must be a positive integer, got {self.p}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "lam", float(self.lam))
