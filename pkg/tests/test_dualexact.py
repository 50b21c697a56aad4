import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial.legendre import leggauss

from betamoments.asymptotics import predict
from betamoments.dualexact import (
    beta2_determinant_moment,
    brute_force_moment,
    dual_moment_p1,
    hermite_mean_charpoly,
    phase_function,
    saddle,
)
from betamoments.ensembles import EnsembleSpec, Family, MomentQuery
from betamoments.errors import DomainError, SupportError
from betamoments.harness.checks import GATE_FAMILIES, GENERIC_FAMILIES, _printed_R

SQ2 = math.sqrt(2.0)


def _interior(spec, fractions=(0.2, 0.5, 0.8)):
    s = spec.support()
    return [s.lower + f * s.width for f in fractions]


def _rel(a, b):
    return abs(math.expm1(a.log_abs - b.log_abs))


class TestSaddles:
    def test_gaussian_centre(self):
        s = saddle(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 10), 0.0)
        assert s.u_plus == pytest.approx(1 / SQ2) and s.u_minus == pytest.approx(-1 / SQ2)
        assert s.R == pytest.approx(4.0)
        assert s.theta_plus == pytest.approx(0.0, abs=1e-15) and s.theta_minus == pytest.approx(0.0, abs=1e-15)
        assert s.f_sum == pytest.approx(-1 - math.log(2))

    def test_laguerre_fixed_half(self):
        s = saddle(EnsembleSpec.make(Family.LAGUERRE_FIXED, 2.0, 10, a=0.0), 0.5)
        assert s.u_plus == pytest.approx(complex(-0.5, 0.5)) and s.u_minus == pytest.approx(complex(-0.5, -0.5))
        assert s.R == pytest.approx(4.0)
        assert (s.theta_plus, s.theta_minus) == pytest.approx((-3 * math.pi / 4, -math.pi / 4))

    def test_jacobi_fixed_half(self):
        s = saddle(EnsembleSpec.make(Family.JACOBI_FIXED, 2.0, 10, a1=0.0, a2=0.0), 0.5)
        assert s.u_plus == pytest.approx(1j) and s.u_minus == pytest.approx(-1j)
        assert s.R == pytest.approx(1.0)
        assert (s.theta_plus, s.theta_minus) == pytest.approx((-math.pi, 0.0), abs=1e-15)

    @given(st.floats(-0.99, 0.99))
    def test_gaussian_phase_sum(self, lam):
        s = saddle(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 10), lam)
        assert s.f_sum == pytest.approx(2 * lam * lam - 1 - math.log(2), abs=1e-13)

    @given(st.sampled_from([1.0, 2.0, 4.0]), st.integers(1, 3), st.floats(0.02, 0.98), st.integers(1, 200))
    def test_jacobi_fixed_phase_sum(self, beta, p, lam, N):
        a1, a2 = 0.5, 1.5
        s = saddle(EnsembleSpec.make(Family.JACOBI_FIXED, beta, N, a1=a1, a2=a2), lam, p)
        printed = -2 * math.log(1 - lam) - (
            (2 / beta * (a1 + 2 - 2 * p) - 2) * math.log(lam) + 2 / beta * (a2 + 2 * p) * math.log(1 - lam)
        ) / N
        assert s.f_sum == pytest.approx(printed, abs=1e-12)

    @pytest.mark.parametrize("family, params", GENERIC_FAMILIES)
    def test_residual_and_curvature(self, family, params):
        rng = np.random.default_rng(11)
        spec = EnsembleSpec.make(family, 2.0, 50, **params)
        sup = spec.support()
        for lam in rng.uniform(sup.lower + 1e-3 * sup.width, sup.upper - 1e-3 * sup.width, 20):
            f = phase_function(spec, lam)
            s = saddle(spec, lam)
            assert abs(f.d1(s.u_plus)) < 1e-10 and abs(f.d1(s.u_minus)) < 1e-10
            assert s.R == pytest.approx(_printed_R(spec, lam), rel=1e-10)
            assert abs(f.d2(s.u_minus)) == pytest.approx(s.R, rel=1e-10)
            # descent angle solves theta = (pi - arg f'')/2 modulo pi
            for th, u in ((s.theta_plus, s.u_plus), (s.theta_minus, s.u_minus)):
                ph = np.angle(f.d2(u))
                d = (th - (math.pi - ph) / 2) / math.pi
                assert abs(d - round(d)) < 1e-10
            if family is Family.JACOBI_FIXED:
                # reported in the printed closed form rather than the canonical range
                half = 0.5 * math.asin(1 - 2 * lam)
                assert (s.theta_plus, s.theta_minus) == pytest.approx((half - math.pi, -half))
            else:
                assert -math.pi < s.theta_plus <= 0 and -math.pi < s.theta_minus <= 0

    @given(st.floats(0.0, 6.0), st.floats(0.01, 0.99))
    def test_laguerre_scaled_density_link(self, alpha, t):
        spec = EnsembleSpec.make(Family.LAGUERRE_SCALED, 2.0, 20, alpha=alpha)
        lam = _interior(spec, [t])[0]
        s = saddle(spec, lam)
        inside = 4 * lam - (lam - alpha) ** 2
        assert inside == pytest.approx((2 * math.pi * lam * spec.density(lam)) ** 2, abs=1e-10)
        assert s.u_plus.imag == pytest.approx(math.pi * spec.density(lam), rel=1e-10)

    def test_gaussian_phase_function_value(self):
        f = phase_function(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 10), 0.4)
        u = 0.3 - 0.2j
        assert f.value(u) == pytest.approx(-u * u + np.log(SQ2 * 0.4j - u))

    def test_support_violation(self):
        with pytest.raises(SupportError):
            saddle(EnsembleSpec.make(Family.JACOBI_FIXED, 2.0, 10, a1=0.0, a2=0.0), 1.2)


class TestDualQuadrature:
    @pytest.mark.parametrize("lam", [0.0, 0.3, -0.7])
    def test_single_point_gaussian(self, lam):
        v = dual_moment_p1(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 1), lam)
        assert v.sign == 1
        assert v.to_float() == pytest.approx(lam * lam + 0.25, rel=1e-12)

    @pytest.mark.parametrize("beta, tol", [(2.0, 1e-6), (4.0, 1e-5)])
    def test_gaussian_three_points(self, beta, tol):
        spec = EnsembleSpec.make(Family.GAUSSIAN, beta, 3)
        q = MomentQuery(0.2)
        assert _rel(dual_moment_p1(spec, 0.2), brute_force_moment(spec, q)) < tol

    @pytest.mark.parametrize("family, params", GATE_FAMILIES)
    @pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
    def test_duality_gate(self, family, params, beta):
        for N in (1, 2, 3):
            spec = EnsembleSpec.make(family, beta, N, **params)
            for lam in _interior(spec):
                assert _rel(dual_moment_p1(spec, lam), brute_force_moment(spec, MomentQuery(lam))) < 1e-5

    @pytest.mark.parametrize("family, params", GENERIC_FAMILIES[1:])
    def test_non_integer_exponents(self, family, params):
        # exponents that force the unit radius on the circle families
        spec = EnsembleSpec.make(family, 2.0, 2, **params)
        lam = _interior(spec, [0.4])[0]
        assert _rel(dual_moment_p1(spec, lam), brute_force_moment(spec, MomentQuery(lam))) < 1e-6

    def test_size_limit(self):
        with pytest.raises(DomainError):
            dual_moment_p1(EnsembleSpec.make(Family.GAUSSIAN, 1.0, 257), 0.1)


class TestDeterminant:
    @pytest.mark.parametrize("lam", [0.0, 0.45])
    def test_single_point_gaussian(self, lam):
        v = beta2_determinant_moment(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 1), MomentQuery(lam))
        assert v.to_float() == pytest.approx(lam * lam + 0.25, rel=1e-12)

    def test_two_paths_agree(self):
        for N in (1, 2, 4, 8, 16, 32, 64):
            spec = EnsembleSpec.make(Family.GAUSSIAN, 2.0, N)
            d = dual_moment_p1(spec, 0.3)
            m = beta2_determinant_moment(spec, MomentQuery(0.3))
            assert _rel(d, m) < 1e-8

    @pytest.mark.parametrize("family, params", GENERIC_FAMILIES)
    def test_two_paths_agree_all_families(self, family, params):
        spec = EnsembleSpec.make(family, 2.0, 24, **params)
        for lam in _interior(spec, (0.25, 0.6)):
            assert _rel(dual_moment_p1(spec, lam), beta2_determinant_moment(spec, MomentQuery(lam))) < 1e-8

    @pytest.mark.parametrize("family, params", GATE_FAMILIES)
    def test_matches_brute_force_p2(self, family, params):
        for N in (1, 2, 3):
            spec = EnsembleSpec.make(family, 2.0, N, **params)
            for lam in _interior(spec, (0.3, 0.7)):
                q = MomentQuery(lam, 2)
                assert _rel(beta2_determinant_moment(spec, q), brute_force_moment(spec, q)) < 1e-7

    def test_jacobi_pair_against_square_quadrature(self):
        x, w = leggauss(20)
        t, w = (x + 1) / 2, w / 2
        T1, T2 = np.meshgrid(t, t)
        W = np.outer(w, w) * (T1 - T2) ** 2
        ref = (W * (0.5 - T1) ** 2 * (0.5 - T2) ** 2).sum() / W.sum()
        spec = EnsembleSpec.make(Family.JACOBI_FIXED, 2.0, 2, a1=0.0, a2=0.0)
        assert beta2_determinant_moment(spec, MomentQuery(0.5)).to_float() == pytest.approx(ref, rel=1e-12)
        assert brute_force_moment(spec, MomentQuery(0.5)).to_float() == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("p, lam", [(2, 0.3), (4, -0.4)])
    def test_remainder_is_order_one_over_n(self, p, lam):
        q = MomentQuery(lam, p)
        scaled = []
        for N in (64, 128, 256):
            spec = EnsembleSpec.make(Family.GAUSSIAN, 2.0, N)
            rel = abs(math.expm1(beta2_determinant_moment(spec, q).log_abs - predict(spec, q).log_value))
            scaled.append(N * rel)
        # N * rel settles to a constant: successive values within 15 percent
        for a, b in zip(scaled, scaled[1:]):
            assert b == pytest.approx(a, rel=0.15)

    def test_requires_beta_two(self):
        with pytest.raises(DomainError):
            beta2_determinant_moment(EnsembleSpec.make(Family.GAUSSIAN, 4.0, 4), MomentQuery(0.1))


class TestBruteForce:
    @pytest.mark.parametrize("lam", [0.0, 0.6])
    def test_single_point_gaussian(self, lam):
        v = brute_force_moment(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 1), MomentQuery(lam))
        assert v.to_float() == pytest.approx(lam * lam + 0.25, rel=1e-9)

    def test_limits(self):
        with pytest.raises(DomainError):
            brute_force_moment(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 4), MomentQuery(0.1))
        with pytest.raises(DomainError):
            brute_force_moment(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 2), MomentQuery(0.1, 3))


class TestHermite:
    @given(st.floats(-3, 3))
    def test_low_orders(self, x):
        assert hermite_mean_charpoly(1, 2.0, x) == pytest.approx(x)
        assert hermite_mean_charpoly(2, 1.0, x) == pytest.approx(x * x - 0.5, abs=1e-14)

    def test_order_three_at_one(self):
        assert hermite_mean_charpoly(3, 4.0, 1.0) == pytest.approx(-0.5)

    @settings(max_examples=50)
    @given(st.integers(1, 30), st.floats(-2, 2))
    def test_matches_numpy_hermite(self, N, x):
        from numpy.polynomial.hermite import hermval

        coeffs = np.zeros(N + 1)
        coeffs[N] = 1.0
        assert hermite_mean_charpoly(N, 2.0, x) == pytest.approx(2.0**-N * hermval(x, coeffs), rel=1e-10, abs=1e-12)
