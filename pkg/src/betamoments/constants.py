"""Normalisation constants of Selberg type and the universal moment constant.

Every function returns a SignedLog so that large-N partition functions never
overflow.  Closed forms are used throughout; they are cross-checked against
direct quadrature in the test-suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .speclog import SignedLog, log_barnes_g, log_binomial, log_gamma

__all__ = [
    "RationalBeta",
    "a_beta_p",
    "a_beta_p_shifted",
    "a_tilde",
    "gamma_product_identity_residual",
    "gamma_n_beta",
    "selberg_gaussian",
    "gaussian_partition",
    "selberg_laguerre",
    "laguerre_partition",
    "morris_integral",
    "selberg_jacobi",
    "keating_snaith",
]


@dataclass(frozen=True)
class RationalBeta:
    """beta/2 = m/n in lowest terms."""

    m: int
    n: int

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 1 or self.n < 1:
            raise DomainError("m and n must be positive integers")
        if math.gcd(self.m, self.n) != 1:
            raise DomainError(f"m={self.m}, n={self.n} are not coprime")

    @property
    def beta(self) -> float:
        return 2.0 * self.m / self.n


def _positive(x: float, what: str) -> float:
    if not x > 0:
        raise DomainError(f"{what} must be positive, got {x}")
    return x


def _check_p(p) -> int:
    if int(p) != p or p < 1:
        raise DomainError(f"p must be a positive integer, got {p}")
    return int(p)


def a_beta_p(beta: float, p: int) -> SignedLog:
    """binom(2p, p) * prod_{j=1}^p Gamma(1 + 2j/beta) / Gamma(1 + 2(j+p)/beta)."""
    _positive(beta, "beta")
    p = _check_p(p)
    s = log_binomial(2 * p, p)
    for j in range(1, p + 1):
        s += log_gamma(1 + 2 * j / beta) - log_gamma(1 + 2 * (j + p) / beta)
    return SignedLog(1, s)


def a_beta_p_shifted(beta: float, p: int) -> SignedLog:
    """Same constant written as binom(2p,p) prod Gamma(2j/beta)/Gamma(2(j+p)/beta) * prod (j/(j+p)).

    Only used to cross-check a_beta_p; the two agree identically because
    Gamma(1+x) = x Gamma(x).
    """
    _positive(beta, "beta")
    p = _check_p(p)
    s = log_binomial(2 * p, p)
    for j in range(1, p + 1):
        s += log_gamma(2 * j / beta) - log_gamma(2 * (j + p) / beta)
        s += math.log(j / (j + p))
    return SignedLog(1, s)


def a_tilde(rb: RationalBeta, p: int) -> SignedLog:
    """Barnes G form of the constant for beta/2 = m/n."""
    p = _check_p(p)
    m, n = rb.m, rb.n
    beta = rb.beta
    s = -(2.0 * p * p / beta) * math.log(n)
    for nu in range(n):
        for mu in range(m):
            base = nu / n - mu / m + 1.0
            s += 2.0 * log_barnes_g(p / m + base)
            s -= log_barnes_g(2.0 * p / m + base)
            s -= log_barnes_g(base)
    return SignedLog(1, s)


def keating_snaith(p: int) -> SignedLog:
    """G(1+p)^2 / G(1+2p)."""
    p = _check_p(p)
    return SignedLog(1, 2.0 * log_barnes_g(1.0 + p) - log_barnes_g(1.0 + 2 * p))


def gamma_product_identity_residual(s: float, m: int, n: int, p: int) -> float:
    """|lhs - rhs| for the Gamma-to-Barnes-G product identity, in log form.

    lhs = sum_{j=1}^p log Gamma(s + (n/m) j)
    rhs = log of n^{-p/2 + s p + n p (1+p)/(2m)} (2 pi)^{-p(n-1)/2}
          * prod_{l<n} prod_{j<=m} G((s+l)/n + (j+p)/m) / G((s+l)/n + j/m)
    """
    p = _check_p(p)
    for v in (m, n):
        if int(v) != v or v < 1:
            raise DomainError("m and n must be positive integers")
    lhs = 0.0
    for j in range(1, p + 1):
        lhs += log_gamma(s + n * j / m)
    rhs = (-p / 2 + s * p + n * p * (1 + p) / (2 * m)) * math.log(n)
    rhs -= p * (n - 1) / 2 * math.log(2 * math.pi)
    for l in range(n):
        for j in range(1, m + 1):
            rhs += log_barnes_g((s + l) / n + (j + p) / m)
            rhs -= log_barnes_g((s + l) / n + j / m)
    return abs(lhs - rhs)


def gamma_n_beta(n: int, beta: float) -> SignedLog:
    """Integral of prod e^{-u^2} |Delta(u)|^{4/beta} over R^n."""
    _positive(beta, "beta")
    if int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    n = int(n)
    if n == 0:
        return SignedLog(1, 0.0)
    s = 0.5 * n * math.log(math.pi) - n * (n - 1) / beta * math.log(2.0)
    for j in range(2, n + 1):
        s += log_gamma(1 + 2 * j / beta) - log_gamma(1 + 2 / beta)
    return SignedLog(1, s)


def gaussian_partition(beta: float, n: int, kappa: float) -> SignedLog:
    """Integral over R^n of prod e^{-kappa x^2} |Delta(x)|^beta."""
    _positive(beta, "beta")
    _positive(kappa, "kappa")
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    n = int(n)
    pairs = n * (n - 1) / 2
    s = -beta * pairs / 2 * math.log(2.0) + 0.5 * n * math.log(math.pi)
    s -= (0.5 * n + beta * pairs / 2) * math.log(kappa)
    for j in range(1, n + 1):
        s += log_gamma(1 + j * beta / 2) - log_gamma(1 + beta / 2)
    return SignedLog(1, s)


def selberg_gaussian(beta_dual: float, twop: int, N: int) -> SignedLog:
    """Partition function of 2p points, exponent beta_dual, weight e^{-N x^2}."""
    if int(twop) != twop or twop < 2 or twop % 2:
        raise DomainError("twop must be a positive even integer")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    return gaussian_partition(beta_dual, int(twop), float(N))


def laguerre_partition(c: float, kappa: float, beta: float, N: int) -> SignedLog:
    """Integral over (0, inf)^N of prod x^c e^{-kappa x} |Delta(x)|^beta."""
    _positive(beta, "beta")
    _positive(kappa, "kappa")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    if not c > -1:
        raise DomainError(f"Laguerre exponent must exceed -1, got {c}")
    N = int(N)
    s = -(N * (c + 1) + beta * N * (N - 1) / 2) * math.log(kappa)
    for j in range(N):
        s += log_gamma(1 + (j + 1) * beta / 2) + log_gamma(c + 1 + j * beta / 2)
        s -= log_gamma(1 + beta / 2)
    return SignedLog(1, s)


def selberg_laguerre(a_half: float, beta: float, N: int) -> SignedLog:
    """Integral of prod x^{beta a/2} e^{-beta x/2} |Delta|^beta over (0, inf)^N."""
    _positive(beta, "beta")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    N = int(N)
    h = beta / 2
    s = -N * (a_half * h + 1 + (N - 1) * h) * math.log(h)
    for j in range(N):
        s += log_gamma(1 + (j + 1) * h) + log_gamma(a_half * h + 1 + j * h) - log_gamma(1 + h)
    return SignedLog(1, s)


def morris_integral(N: int, a: float, b: float, lam: float) -> SignedLog:
    """Circular Selberg (Morris) integral M_N(a, b, lam)."""
    _positive(lam, "lam")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    s = 0.0
    for j in range(int(N)):
        s += log_gamma(lam * j + a + b + 1) + log_gamma(lam * (j + 1) + 1)
        s -= log_gamma(lam * j + a + 1) + log_gamma(lam * j + b + 1) + log_gamma(1 + lam)
    return SignedLog(1, s)


def selberg_jacobi(N: int, l1: float, l2: float, lam: float) -> SignedLog:
    """Selberg integral S_N(l1, l2, lam) over the unit cube."""
    _positive(lam, "lam")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    N = int(N)
    s = 0.0
    for j in range(N):
        s += log_gamma(l1 + 1 + j * lam) + log_gamma(l2 + 1 + j * lam) + log_gamma(1 + (j + 1) * lam)
        s -= log_gamma(l1 + l2 + 2 + (N + j - 1) * lam) + log_gamma(1 + lam)
    return SignedLog(1, s)
