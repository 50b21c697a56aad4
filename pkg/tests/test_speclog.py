import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betamoments.errors import DomainError
from betamoments.speclog import ComplexLog, SignedLog, log_barnes_g, log_binomial, log_gamma


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24)), (1.5, math.log(math.sqrt(math.pi) / 2))])
def test_log_gamma_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("x", [1e-6, 0.01, 0.7, 3.3, 17.0, 1234.5, 1e6])
def test_log_gamma_against_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5])
def test_log_gamma_domain(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)


@pytest.mark.parametrize("x, expected", [(1, 0.0), (2, 0.0), (3, 0.0), (4, math.log(2)), (7, math.log(34560))])
def test_barnes_g_integer_values(x, expected):
    assert log_barnes_g(float(x)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.25, 2.5, 9.9, 47.3, 120.0, 500.0])
def test_barnes_g_against_mpmath(x):
    ref = float(mpmath.log(mpmath.barnesg(mpmath.mpf(x))))
    assert log_barnes_g(x) == pytest.approx(ref, rel=1e-12, abs=1e-13)


def test_barnes_g_recurrence_grid():
    x = 0.5
    while x <= 50.0:
        assert abs(log_barnes_g(x + 1) - log_gamma(x) - log_barnes_g(x)) < 1e-11
        x += 0.25


def test_barnes_g_domain():
    with pytest.raises(DomainError):
        log_barnes_g(0.0)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("z", [0.3, 1.0, 2.7])
def test_gamma_multiplication_formula(n, z):
    lhs = sum(log_gamma(z + k / n) for k in range(n))
    rhs = (n - 1) / 2 * math.log(2 * math.pi) + (0.5 - n * z) * math.log(n) + log_gamma(n * z)
    assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("n, k, value", [(2, 1, 2), (4, 2, 6), (6, 3, 20), (1000, 500, None)])
def test_log_binomial(n, k, value):
    if value is None:
        ref = float(mpmath.log(mpmath.binomial(n, k)))
        assert log_binomial(n, k) == pytest.approx(ref, rel=1e-14)
    else:
        assert log_binomial(n, k) == pytest.approx(math.log(value), abs=1e-14)


def test_log_binomial_domain():
    with pytest.raises(DomainError):
        log_binomial(2, 3)


moderate = st.floats(min_value=-1e13, max_value=1e13, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-13)
wide = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-300)


@settings(max_examples=10_000)
@given(moderate)
def test_signed_log_round_trip(x):
    back = SignedLog.from_float(x).to_float()
    assert back == pytest.approx(x, rel=1e-14, abs=0)


@settings(max_examples=10_000)
@given(wide)
def test_signed_log_round_trip_wide_range(x):
    # a float64 log carries an absolute rounding of half an ulp, which exp turns
    # into a relative error proportional to |log|
    sl = SignedLog.from_float(x)
    bound = 1e-14 + 2.5 * 2.0**-52 * abs(sl.log_abs)
    assert SignedLog.from_float(x).to_float() == pytest.approx(x, rel=bound, abs=0)


@settings(max_examples=2_000)
@given(st.floats(-300, 300), st.floats(-300, 300), st.sampled_from([-1, 0, 1]), st.sampled_from([-1, 1]))
def test_signed_log_product(la, lb, sa, sb):
    a, b = SignedLog.from_log(la, sa), SignedLog.from_log(lb, sb)
    prod = a * b
    assert prod.sign == sa * sb
    if prod.sign:
        assert prod.log_abs == pytest.approx(la + lb, abs=1e-12)


@settings(max_examples=2_000)
@given(st.floats(-50, 50), st.floats(-10, 10), st.floats(-50, 50), st.floats(-10, 10))
def test_complex_log_product_wraps_phase(la, pa, lb, pb):
    a, b = ComplexLog.from_log(complex(la, pa)), ComplexLog.from_log(complex(lb, pb))
    prod = a * b
    assert -math.pi < prod.phase <= math.pi
    assert prod.log_abs == pytest.approx(la + lb, abs=1e-12)
    d = (prod.phase - (a.phase + b.phase)) / (2 * math.pi)
    assert abs(d - round(d)) < 1e-9


def test_complex_log_principal_branch():
    assert ComplexLog.from_complex(-1.0).phase == pytest.approx(math.pi)
    z = ComplexLog.from_complex(-2.0 + 0j).to_signed()
    assert z.sign == -1 and z.log_abs == pytest.approx(math.log(2))
