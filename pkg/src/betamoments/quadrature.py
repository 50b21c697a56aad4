"""Quadrature grids: Gauss-Legendre panels, Gauss-Jacobi endpoint rules,
and the equispaced rule on the circle."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

__all__ = [
    "GridKind",
    "QuadratureGrid",
    "gauss_legendre_panels",
    "gauss_jacobi",
    "circle_trapezoid",
]


class GridKind(str, Enum):
    GAUSS_LEGENDRE = "GaussLegendre"
    GAUSS_JACOBI = "GaussJacobi"
    CIRCLE_TRAPEZOID = "CircleTrapezoid"
    TENSOR_PRODUCT_2D = "TensorProduct2D"


@dataclass(frozen=True)
class QuadratureGrid:
    nodes: np.ndarray
    weights: np.ndarray
    kind: GridKind

    def __post_init__(self):
        if len(self.nodes) < 2 or len(self.nodes) != len(self.weights):
            raise ValueError("a grid needs at least two nodes and matching weights")

    def integrate(self, values: np.ndarray) -> complex:
        return np.dot(self.weights, values)


@lru_cache(maxsize=64)
def _legendre(order: int):
    x, w = roots_legendre(order)
    return x, w


@lru_cache(maxsize=256)
def _jacobi(order: int, a: float, b: float):
    x, w = roots_jacobi(order, a, b)
    return x, w


def gauss_legendre_panels(lo: float, hi: float, panels: int, order: int = 16) -> QuadratureGrid:
    """Composite Gauss-Legendre rule on [lo, hi] with equal panels."""
    x, w = _legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureGrid(nodes, weights, GridKind.GAUSS_LEGENDRE)


def gauss_jacobi(order: int, at_lo: float, at_hi: float, lo: float = 0.0, hi: float = 1.0) -> QuadratureGrid:
    """Rule for (s-lo)^at_lo (hi-s)^at_hi f(s) on [lo, hi]; weights absorb the powers."""
    x, w = _jacobi(order, float(at_hi), float(at_lo))
    half = 0.5 * (hi - lo)
    nodes = lo + half * (1.0 + x)
    weights = w * half ** (1.0 + at_lo + at_hi)
    return QuadratureGrid(nodes, weights, GridKind.GAUSS_JACOBI)


def circle_trapezoid(n: int) -> QuadratureGrid:
    """Equispaced rule in theta on [-1/2, 1/2), i.e. angles 2 pi theta in [-pi, pi)."""
    theta = -0.5 + np.arange(n) / n
    return QuadratureGrid(theta, np.full(n, 1.0 / n), GridKind.CIRCLE_TRAPEZOID)
