import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

from betamoments.constants import (
    RationalBeta,
    a_beta_p,
    a_beta_p_shifted,
    a_tilde,
    gamma_n_beta,
    gamma_product_identity_residual,
    gaussian_partition,
    keating_snaith,
    laguerre_partition,
    morris_integral,
    selberg_gaussian,
    selberg_jacobi,
    selberg_laguerre,
)
from betamoments.errors import DomainError

PAIRS = [(1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (3, 1), (1, 3)]


def _val(sl):
    return sl.to_float()


class TestConstantA:
    @pytest.mark.parametrize("beta, p, expected", [(2, 1, 1.0), (2, 2, 1 / 12), (1, 1, 1 / 6)])
    def test_values(self, beta, p, expected):
        v = a_beta_p(beta, p)
        assert v.sign == 1
        assert _val(v) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("m, n, p, expected", [(1, 1, 1, 1.0), (1, 1, 2, 1 / 12), (1, 2, 1, 1 / 6)])
    def test_barnes_form_values(self, m, n, p, expected):
        assert _val(a_tilde(RationalBeta(m, n), p)) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("m, n", PAIRS)
    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_gamma_and_barnes_forms_agree(self, m, n, p):
        rb = RationalBeta(m, n)
        assert abs(a_beta_p(rb.beta, p).log_abs - a_tilde(rb, p).log_abs) < 1e-9

    @given(st.floats(0.1, 20), st.integers(1, 6))
    def test_shifted_form_agrees(self, beta, p):
        assert a_beta_p_shifted(beta, p).log_abs == pytest.approx(a_beta_p(beta, p).log_abs, abs=1e-10)

    @pytest.mark.parametrize("p, expected", [(1, 1.0), (2, 1 / 12), (3, 1 / 8640)])
    def test_keating_snaith(self, p, expected):
        assert _val(a_tilde(RationalBeta(1, 1), p)) == pytest.approx(expected, rel=1e-12)
        assert _val(keating_snaith(p)) == pytest.approx(expected, rel=1e-12)

    def test_rational_beta_rejects_common_factor(self):
        with pytest.raises(DomainError):
            RationalBeta(2, 4)

    def test_p_must_be_positive_integer(self):
        with pytest.raises(DomainError):
            a_beta_p(2.0, 0)
        with pytest.raises(DomainError):
            a_beta_p(2.0, 1.5)


class TestProductIdentity:
    @pytest.mark.parametrize("s, m, n, p", [(1.0, 1, 1, 3), (0.7, 2, 1, 2), (0.3, 2, 3, 3)])
    def test_examples(self, s, m, n, p):
        assert gamma_product_identity_residual(s, m, n, p) < 1e-10

    @given(st.floats(0.05, 6.0), st.sampled_from(PAIRS), st.integers(1, 4))
    def test_random_points(self, s, mn, p):
        m, n = mn
        assert gamma_product_identity_residual(s, m, n, p) < 1e-9


class TestNormalizations:
    @pytest.mark.parametrize("n, beta, expected", [(1, 3.0, math.sqrt(math.pi)), (2, 2.0, math.pi), (0, 1.0, 1.0)])
    def test_gamma_n_beta(self, n, beta, expected):
        assert _val(gamma_n_beta(n, beta)) == pytest.approx(expected, rel=1e-13)

    def test_gamma_n_beta_quadrature(self):
        x, w = hermgauss(40)
        X1, X2 = np.meshgrid(x, x)
        W = np.outer(w, w)
        assert (W * (X1 - X2) ** 2).sum() == pytest.approx(_val(gamma_n_beta(2, 2.0)), rel=1e-12)

    @pytest.mark.parametrize("bd, N, expected", [(2, 1, math.pi), (2, 5, math.pi / 25)])
    def test_selberg_gaussian_values(self, bd, N, expected):
        assert _val(selberg_gaussian(bd, 2, N)) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("bd", [2, 4])
    def test_selberg_gaussian_quadrature(self, bd):
        x, w = hermgauss(40)
        X1, X2 = np.meshgrid(x, x)
        ref = (np.outer(w, w) * np.abs(X1 - X2) ** bd).sum()
        assert _val(selberg_gaussian(bd, 2, 1)) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("a, N, expected", [(0, 1, 1.0), (2, 1, 2.0), (0, 2, 2.0)])
    def test_selberg_laguerre(self, a, N, expected):
        assert _val(selberg_laguerre(a, 2.0, N)) == pytest.approx(expected, rel=1e-12)

    def test_selberg_laguerre_quadrature(self):
        x, w = laggauss(40)
        X1, X2 = np.meshgrid(x, x)
        ref = (np.outer(w, w) * (X1 - X2) ** 2).sum()
        assert _val(selberg_laguerre(0, 2.0, 2)) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("N, a, b, expected", [(1, 1, 1, 2.0), (1, 2, 2, 6.0), (2, 0, 0, 2.0)])
    def test_morris(self, N, a, b, expected):
        assert _val(morris_integral(N, a, b, 1.0)) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("a, b, lam, n, rel", [
        (1.0, 1.0, 1.0, 256, 1e-8),
        (0.5, 1.5, 1.0, 256, 1e-8),
        (2.0, 0.0, 2.0, 256, 1e-8),
        # |z1 - z2| has a kink on the diagonal, so the equispaced rule converges only algebraically
        (0.5, 1.5, 0.5, 1024, 1e-5),
    ])
    def test_morris_circle_quadrature(self, a, b, lam, n, rel):
        th = np.arange(n) / n - 0.5
        z = np.exp(2j * np.pi * th)
        Z1, Z2 = np.meshgrid(z, z)
        # on the unit circle (1+z)^a (1+1/z)^b is real up to the phase e^{i pi (a-b) theta}
        f = lambda u: (1 + u) ** a * (1 + 1 / u) ** b
        integrand = f(Z1) * f(Z2) * np.abs(Z1 - Z2) ** (2 * lam)
        ref = integrand.mean().real
        assert _val(morris_integral(2, a, b, lam)) == pytest.approx(ref, rel=rel)

    @pytest.mark.parametrize("N, l1, l2, lam, expected", [(1, 0, 0, 2.0, 1.0), (1, 1, 2, 2.0, 1 / 12), (2, 0, 0, 1.0, 1 / 6)])
    def test_selberg_jacobi(self, N, l1, l2, lam, expected):
        assert _val(selberg_jacobi(N, l1, l2, lam)) == pytest.approx(expected, rel=1e-12)

    def test_selberg_jacobi_quadrature(self):
        x, w = leggauss(30)
        t, w = (x + 1) / 2, w / 2
        T1, T2 = np.meshgrid(t, t)
        g = lambda u: u * (1 - u) ** 2
        ref = (np.outer(w, w) * g(T1) * g(T2) * (T1 - T2) ** 2).sum()
        assert _val(selberg_jacobi(2, 1, 2, 1.0)) == pytest.approx(ref, rel=1e-10)

    def test_partitions_scale_with_rate(self):
        # x -> x / sqrt(kappa) in the Gaussian case, x -> x / kappa in the Laguerre case
        g1, g2 = gaussian_partition(2.0, 3, 1.0).log_abs, gaussian_partition(2.0, 3, 4.0).log_abs
        assert g1 - g2 == pytest.approx((3 / 2 + 3) * math.log(4.0), abs=1e-12)
        l1, l2 = laguerre_partition(0.5, 1.0, 2.0, 3).log_abs, laguerre_partition(0.5, 2.0, 2.0, 3).log_abs
        assert l1 - l2 == pytest.approx((3 * 1.5 + 6) * math.log(2.0), abs=1e-12)

    def test_nonpositive_gamma_argument(self):
        with pytest.raises(DomainError):
            selberg_jacobi(1, -1.0, 0.0, 1.0)
