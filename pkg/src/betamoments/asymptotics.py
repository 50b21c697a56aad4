"""Closed-form large-N predictors for the even moments.

Each predictor returns the log of the leading asymptotic form; the
multiplicative remainder is 1 + O(N^{-min(2/beta, 1)}).  The beta = 2
coefficient forms in ``cg21_coefficients`` are an independent route to the
same numbers, written in the (C1 N + C2 log N + C3) shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import a_beta_p, keating_snaith
from .densities import jacobi_scaled_support
from .ensembles import EnsembleSpec, Family, MomentQuery
from .errors import DomainError

__all__ = [
    "Prediction",
    "error_exponent",
    "predict",
    "g2_exponent",
    "cg21_coefficients",
    "int1_oracle",
]

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Prediction:
    log_value: float
    error_exponent: float


def error_exponent(beta: float) -> float:
    """Order of the relative remainder, min(2/beta, 1)."""
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    return min(2.0 / beta, 1.0)


def g2_exponent(a1: float, a2: float, lam: float) -> float:
    """Per-(pN) exponent of the Jacobi predictor with exponents proportional to N."""
    if not (a1 >= 0 and a2 >= 0):
        raise DomainError("a1, a2 must be nonnegative")
    if not 0 < lam < 1:
        raise DomainError("lambda must lie in (0, 1)")

    def xlogx(x):
        return x * math.log(x)

    A = 2.0 + a1 + a2
    return (
        xlogx(1 + a1 + a2) + xlogx(1 + a1) + xlogx(1 + a2)
        - 2.0 * xlogx(A)
        - a1 * math.log(lam) - a2 * math.log1p(-lam)
    )


def _structured(beta, p, N, log_phi2, log_phi2_n, exponent):
    # A (phi_small)^{p(2-beta)/beta} (N phi_big)^{2p^2/beta} e^{N p phi1}
    return (
        p * (2.0 - beta) / beta * log_phi2
        + 2.0 * p * p / beta * (math.log(N) + log_phi2_n)
        + exponent
    )


def predict(spec: EnsembleSpec, q: MomentQuery) -> Prediction:
    """Leading large-N form of log <prod |lam - x_l|^{2p}>."""
    lam, p = q.lam, q.p
    spec.check_interior(lam)
    beta, N, fam = spec.beta, spec.N, spec.family
    rho = spec.density(lam)
    logA = a_beta_p(beta, p).log_abs
    if fam is Family.GAUSSIAN:
        body = _structured(
            beta, p, N,
            math.log(math.pi * rho), math.log(math.pi * rho),
            2.0 * N * p * (lam * lam - 0.5 - LOG2),
        )
    elif fam is Family.LAGUERRE_FIXED:
        (a,) = spec.params
        body = _structured(
            beta, p, N,
            math.log(0.5 * math.pi * rho), math.log(0.5 * math.pi * rho),
            2.0 * p * N * (2.0 * lam - 1.0 - 2.0 * LOG2),
        )
        body -= 2.0 * p * a / beta * math.log(4.0 * lam)
    elif fam is Family.JACOBI_FIXED:
        a1, a2 = spec.params
        body = _structured(
            beta, p, N,
            math.log(0.25 * math.pi * rho), math.log(0.5 * math.pi * rho),
            -4.0 * p * N * LOG2,
        )
        body -= 2.0 * p * a1 / beta * math.log(4.0 * lam)
        body -= 2.0 * p * a2 / beta * math.log(4.0 - 4.0 * lam)
    elif fam is Family.LAGUERRE_SCALED:
        (alpha,) = spec.params
        scale = 2.0 * math.pi * math.sqrt(alpha + 1.0) * rho
        phi1 = lam - alpha - 2.0 + (alpha + 1.0) * math.log1p(alpha)
        if alpha:
            phi1 -= alpha * math.log(lam)
        body = _structured(beta, p, N, math.log(scale), math.log(scale), p * N * phi1)
    else:
        a1, a2 = spec.params
        A = 2.0 + a1 + a2
        big = 2.0 * math.pi * math.sqrt((1 + a1) * (1 + a2) * (1 + a1 + a2)) / A ** 2 * rho
        small = 2.0 * math.pi * math.sqrt((1 + a1) * (1 + a2)) * (1 + a1 + a2) ** 1.5 / A ** 3 * rho
        body = _structured(
            beta, p, N, math.log(small), math.log(big), p * N * g2_exponent(a1, a2, lam)
        )
    return Prediction(logA + body, error_exponent(beta))


def int1_oracle(a: float, b: float) -> float:
    """Integral of log(a x + b) / sqrt(1 - x^2) over (-1, 1)."""
    if not b > abs(a):
        raise DomainError(f"need b > |a|, got a={a}, b={b}")
    return math.pi * math.log((b + math.sqrt(b * b - a * a)) / 2.0)


def _int1_edge_safe(a: float, b: float) -> float:
    # for exponents near zero the hard edge touches the cut and b - |a| rounds
    # to zero; the integral stays finite there, so clamp instead of refusing
    return math.pi * math.log((b + math.sqrt(max(b * b - a * a, 0.0))) / 2.0)


def _one_cut_coefficients(p, mean_potential, potential_at, psi_at, x):
    """(C1, C2, C3) for a one-cut potential V whose equilibrium measure is psi(x) sqrt(1-x^2) on [-1,1].

    mean_potential is (1/pi) * integral of V / sqrt(1-x^2).
    """
    c1 = -2.0 * p * LOG2 - p * mean_potential + p * potential_at
    c2 = float(p * p)
    c3 = (
        p * p * math.log(0.5 * math.pi * psi_at)
        + p * p * math.log(2.0 * math.sqrt(1.0 - x * x))
        + keating_snaith(p).log_abs
    )
    return c1, c2, c3


def cg21_coefficients(spec: EnsembleSpec, q: MomentQuery) -> tuple:
    """beta = 2 asymptotics as exp(C1 N + C2 log N + C3), in the EnsembleSpec weight convention.

    The coefficients are derived from the one-cut Hankel asymptotics after
    mapping each weight to its standard form; the affine changes of variable
    are undone here so the result refers to the same weight as ``predict``.
    """
    if spec.beta != 2:
        raise DomainError("the coefficient forms exist only for beta = 2")
    lam, p = q.lam, q.p
    spec.check_interior(lam)
    fam = spec.family
    ks = keating_snaith(p).log_abs
    if fam is Family.GAUSSIAN:
        # V = 2x^2, mean of V against the arcsine measure is 1, psi = 2/pi
        return _one_cut_coefficients(p, 1.0, 2.0 * lam * lam, 2.0 / math.pi, lam)
    if fam is Family.LAGUERRE_FIXED:
        (a,) = spec.params
        # the hard-edge form lives on (-1, 1) with weight (t+1)^a e^{-2N(t+1)};
        # x = (t+1)/2 maps it to x^a e^{-4Nx} and multiplies the moment by 2^{2pN}
        t = 2.0 * lam - 1.0
        c1 = 2.0 * p * (t - LOG2) - 2.0 * p * LOG2
        c3 = p * p * 0.5 * math.log((1.0 - t) / (1.0 + t)) + ks - p * a * math.log(2.0 * abs(t + 1.0))
        return c1, float(p * p), c3
    if fam is Family.JACOBI_FIXED:
        a1, a2 = spec.params
        # Hankel ratio on (-1, 1) at t = 2 lam - 1; the ratio equals
        # 2^{2pN} times the moment at lam on (0, 1)
        t = 2.0 * lam - 1.0
        c1 = -2.0 * p * LOG2 - 2.0 * p * LOG2
        c3 = (
            -p * (a1 + a2) * LOG2
            - a1 * p * math.log1p(t)
            - a2 * p * math.log1p(-t)
            - 0.5 * p * p * math.log1p(-t * t)
            + ks
        )
        return c1, float(p * p), c3
    if fam is Family.LAGUERRE_SCALED:
        (alpha,) = spec.params
        r = math.sqrt(alpha + 1.0)
        x = (lam - alpha - 2.0) / (2.0 * r)
        y = 2.0 * r * x + alpha + 2.0
        mean_v = (alpha + 2.0)
        potential = y
        if alpha:
            mean_v -= alpha * _int1_edge_safe(2.0 * r, alpha + 2.0) / math.pi
            potential -= alpha * math.log(y)
        psi = 2.0 * (alpha + 1.0) / (math.pi * y)
        c1, c2, c3 = _one_cut_coefficients(p, mean_v, potential, psi, x)
        return c1 + 2.0 * p * math.log(2.0 * r), c2, c3
    a1, a2 = spec.params
    sup = jacobi_scaled_support(a1, a2)
    mid = 0.5 * (sup.lower + sup.upper)
    half = 0.5 * (sup.upper - sup.lower)
    x = (lam - mid) / half
    mean_v = 0.0
    potential = 0.0
    if a1:
        mean_v -= a1 * _int1_edge_safe(half, mid) / math.pi
        potential -= a1 * math.log(mid + half * x)
    if a2:
        mean_v -= a2 * _int1_edge_safe(-half, 1.0 - mid) / math.pi
        potential -= a2 * math.log(1.0 - mid - half * x)
    A = a1 + a2 + 2.0
    psi = A / (2.0 * math.pi * (mid / half + x) * ((1.0 - mid) / half - x))
    c1, c2, c3 = _one_cut_coefficients(p, mean_v, potential, psi, x)
    return c1 + 2.0 * p * math.log(half), c2, c3
