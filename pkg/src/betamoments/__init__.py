"""Moments of characteristic polynomials of beta ensembles.

Asymptotic predictions, exact finite-N oracles and a tridiagonal Monte Carlo
sampler for the Gaussian, Laguerre and Jacobi families.
"""
from .asymptotics import Prediction, predict
from .constants import RationalBeta, a_beta_p, a_tilde
from .dualexact import beta2_determinant_moment, brute_force_moment, dual_moment_p1
from .ensembles import EnsembleSpec, Family, MomentQuery
from .errors import ConditioningError, ConvergenceError, DomainError, SupportError
from .sampler import mc_moment, sample_spectrum
from .speclog import ComplexLog, SignedLog

__version__ = "0.1.0"

__all__ = [
    "Prediction",
    "predict",
    "RationalBeta",
    "a_beta_p",
    "a_tilde",
    "beta2_determinant_moment",
    "brute_force_moment",
    "dual_moment_p1",
    "EnsembleSpec",
    "Family",
    "MomentQuery",
    "ConditioningError",
    "ConvergenceError",
    "DomainError",
    "SupportError",
    "mc_moment",
    "sample_spectrum",
    "ComplexLog",
    "SignedLog",
]
