"""Log-domain scalars and the real special functions used throughout.

Moment-scale quantities grow like exp(c N), so everything is carried as a
(log-magnitude, sign) or (log-magnitude, phase) pair and only converted to
linear scale at the edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .errors import DomainError

__all__ = [
    "SignedLog",
    "ComplexLog",
    "log_gamma",
    "log_barnes_g",
    "log_binomial",
]

_EULER_GAMMA = 0.57721566490153286061
_ZETA_PRIME_M1 = -0.16542114370045092921  # derivative of zeta at -1
_LOG_2PI = math.log(2.0 * math.pi)

# Coefficients of the Maclaurin series of log G(1+z):
#   z/2 log(2 pi) - (z + (1+gamma) z^2)/2 + sum_{k>=2} (-1)^k zeta(k) z^(k+1)/(k+1)
_TAYLOR_ORDER = 60
_TAYLOR = np.array(
    [(-1.0) ** k * zeta(k) / (k + 1) for k in range(2, _TAYLOR_ORDER + 2)]
)

# Bernoulli numbers B_4, B_6, ... for the large-argument expansion.
_BERNOULLI = [
    -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6,
    -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
]
_ASYMPTOTIC_FROM = 12.0


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as sign * exp(log_abs)."""

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or 1, got {self.sign}")

    @classmethod
    def from_float(cls, x: float) -> "SignedLog":
        if x == 0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "SignedLog":
        return cls(sign, float(log_abs))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    def __float__(self) -> float:
        return self.to_float()

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        s = self.sign * other.sign
        if s == 0:
            return SignedLog(0, -math.inf)
        return SignedLog(s, self.log_abs + other.log_abs)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLog")
        if self.sign == 0:
            return SignedLog(0, -math.inf)
        return SignedLog(self.sign * other.sign, self.log_abs - other.log_abs)

    def __pow__(self, k: int) -> "SignedLog":
        if int(k) != k:
            raise DomainError("only integer powers keep a real sign")
        k = int(k)
        if self.sign == 0:
            return SignedLog(1, 0.0) if k == 0 else SignedLog(0, -math.inf)
        return SignedLog(self.sign ** (k % 2) if self.sign < 0 else 1, k * self.log_abs)


def _wrap_phase(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    w = math.remainder(phi, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


@dataclass(frozen=True)
class ComplexLog:
    """A nonzero complex number stored as exp(log_abs + i*phase)."""

    phase: float
    log_abs: float

    def __post_init__(self):
        object.__setattr__(self, "phase", _wrap_phase(float(self.phase)))

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexLog":
        if z == 0:
            raise DomainError("zero has no finite complex logarithm")
        return cls(math.atan2(z.imag, z.real), math.log(abs(z)))

    @classmethod
    def from_log(cls, logz: complex) -> "ComplexLog":
        return cls(logz.imag, logz.real)

    def to_complex(self) -> complex:
        r = math.exp(self.log_abs)
        return complex(r * math.cos(self.phase), r * math.sin(self.phase))

    def __complex__(self) -> complex:
        return self.to_complex()

    def __mul__(self, other: "ComplexLog") -> "ComplexLog":
        if not isinstance(other, ComplexLog):
            return NotImplemented
        return ComplexLog(self.phase + other.phase, self.log_abs + other.log_abs)

    def __truediv__(self, other: "ComplexLog") -> "ComplexLog":
        if not isinstance(other, ComplexLog):
            return NotImplemented
        return ComplexLog(self.phase - other.phase, self.log_abs - other.log_abs)

    def __pow__(self, k: float) -> "ComplexLog":
        return ComplexLog(k * self.phase, k * self.log_abs)

    def to_signed(self, atol: float = 1e-12) -> SignedLog:
        """Collapse to a SignedLog when the phase is 0 or pi to within atol."""
        if abs(self.phase) <= atol:
            return SignedLog(1, self.log_abs)
        if math.pi - abs(self.phase) <= atol:
            return SignedLog(-1, self.log_abs)
        raise DomainError(f"phase {self.phase} is not real to within {atol}")


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def _log_g_taylor(z: float) -> float:
    # log G(1+z), |z| <= 1/2
    powers = z ** np.arange(3, _TAYLOR_ORDER + 3)
    tail = float(np.dot(_TAYLOR[::-1], powers[::-1]))
    return 0.5 * z * _LOG_2PI - 0.5 * (z + (1.0 + _EULER_GAMMA) * z * z) + tail


def _log_g_asymptotic(x: float) -> float:
    # log G(z+1) for large z, with z = x - 1
    z = x - 1.0
    logz = math.log(z)
    s = (0.5 * z * z - 1.0 / 12.0) * logz - 0.75 * z * z + 0.5 * z * _LOG_2PI + _ZETA_PRIME_M1
    zk = z * z
    for k, b in enumerate(_BERNOULLI, start=1):
        term = b / (4.0 * k * (k + 1) * zk)
        s += term
        if abs(term) < 1e-18 * abs(s):
            break
        zk *= z * z
    return s


def log_barnes_g(x: float) -> float:
    """Natural log of the Barnes G function for real x > 0.

    Small arguments are moved into [1/2, 3/2] with G(x+1) = Gamma(x) G(x)
    and summed from the Maclaurin series of log G(1+z); large ones use the
    Stirling-type expansion directly.
    """
    if not x > 0:
        raise DomainError(f"log_barnes_g needs x > 0, got {x}")
    if x >= _ASYMPTOTIC_FROM:
        return _log_g_asymptotic(x)
    acc = 0.0
    while x > 1.5:
        x -= 1.0
        acc += math.lgamma(x)
    while x < 0.5:
        acc -= math.lgamma(x)
        x += 1.0
    return acc + _log_g_taylor(x - 1.0)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) for integers 0 <= k <= n."""
    if int(n) != n or int(k) != k:
        raise DomainError("log_binomial takes integers")
    n, k = int(n), int(k)
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return math.log(math.comb(n, k))
