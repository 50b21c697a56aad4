import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from betamoments.densities import (
    jacobi_scaled_delta,
    jacobi_scaled_support,
    laguerre_scaled_support,
    rho_jacobi,
    rho_jacobi_scaled,
    rho_laguerre_scaled,
    rho_mp,
    rho_wigner,
)
from betamoments.errors import DomainError


def _mass(f, lo, hi):
    return quad(f, lo, hi, limit=200, epsabs=1e-12, epsrel=1e-12)[0]


def test_wigner_values():
    assert rho_wigner(0.0) == pytest.approx(2 / math.pi)
    assert rho_wigner(1.0) == 0.0 and rho_wigner(-1.0) == 0.0
    assert rho_wigner(0.6) == pytest.approx(2 / math.pi * 0.8)
    assert rho_wigner(1.3) == 0.0


def test_marchenko_pastur_values():
    assert rho_mp(0.5) == pytest.approx(2 / math.pi)
    assert rho_mp(1.0) == 0.0
    assert rho_mp(-0.2) == 0.0


def test_arcsine_values():
    assert rho_jacobi(0.5) == pytest.approx(2 / math.pi)
    assert rho_jacobi(0.25) == pytest.approx(4 / (math.pi * math.sqrt(3)))
    assert rho_jacobi(1.5) == 0.0


@pytest.mark.parametrize("f, lo, hi", [
    (rho_wigner, -1, 1),
    (rho_mp, 0, 1),
    (rho_jacobi, 0, 1),
    (lambda x: rho_laguerre_scaled(x, 0.0), 0, 4),
    (lambda x: rho_laguerre_scaled(x, 2.5), *(lambda s: (s.lower, s.upper))(laguerre_scaled_support(2.5))),
    (lambda x: rho_jacobi_scaled(x, 1.0, 2.0), *(lambda s: (s.lower, s.upper))(jacobi_scaled_support(1.0, 2.0))),
    (lambda x: rho_jacobi_scaled(x, 4.0, 4.0), 0.2, 0.8),
])
def test_unit_mass(f, lo, hi):
    assert _mass(f, lo, hi) == pytest.approx(1.0, abs=1e-6)


def test_laguerre_scaled_supports():
    s0, s3 = laguerre_scaled_support(0.0), laguerre_scaled_support(3.0)
    assert (s0.lower, s0.upper) == pytest.approx((0.0, 4.0))
    assert (s3.lower, s3.upper) == pytest.approx((1.0, 9.0))
    assert rho_laguerre_scaled(0.5, 3.0) == 0.0 and rho_laguerre_scaled(9.5, 3.0) == 0.0


@pytest.mark.parametrize("lam", [0.05, 0.4, 1.0, 2.2, 3.9])
def test_laguerre_scaled_zero_alpha_is_rescaled_mp(lam):
    assert rho_laguerre_scaled(lam, 0.0) == pytest.approx((4 - lam) ** 0.5 / (2 * math.pi * lam**0.5), rel=1e-12)
    assert 4 * rho_laguerre_scaled(4 * (lam / 4), 0.0) == pytest.approx(rho_mp(lam / 4), rel=1e-12)


def test_jacobi_scaled_supports():
    s = jacobi_scaled_support(0.0, 0.0)
    assert (s.lower, s.upper) == pytest.approx((0.0, 1.0), abs=1e-15)
    s = jacobi_scaled_support(4.0, 4.0)
    assert (s.lower, s.upper) == pytest.approx((0.2, 0.8), abs=1e-14)


@pytest.mark.parametrize("lam", [0.01, 0.3, 0.5, 0.77, 0.99])
def test_jacobi_scaled_zero_exponents_is_arcsine(lam):
    assert rho_jacobi_scaled(lam, 0.0, 0.0) == pytest.approx(rho_jacobi(lam), rel=1e-12)


@given(st.floats(0, 10), st.floats(0, 10))
def test_jacobi_scaled_endpoints_are_roots(a1, a2):
    s = jacobi_scaled_support(a1, a2)
    assert 0 <= s.lower < s.upper <= 1
    for x in (s.lower, s.upper):
        assert abs(jacobi_scaled_delta(x, a1, a2)) < 1e-10


@given(st.floats(0, 10))
def test_laguerre_scaled_endpoints_are_roots(alpha):
    s = laguerre_scaled_support(alpha)
    for x in (s.lower, s.upper):
        assert abs(4 * x - (x - alpha) ** 2) < 1e-10


@given(st.floats(0, 8), st.floats(0, 8), st.floats(0, 1))
def test_density_positive_inside_zero_outside(a1, a2, t):
    s = jacobi_scaled_support(a1, a2)
    x = s.lower + t * s.width
    if s.contains(x):
        assert rho_jacobi_scaled(x, a1, a2) > 0
    assert rho_jacobi_scaled(s.upper + 0.01, a1, a2) == 0.0 or s.upper + 0.01 >= 1


def test_negative_alpha_rejected():
    with pytest.raises(DomainError):
        laguerre_scaled_support(-0.5)
