"""Exact finite-N moments.

Three independent routes are provided:

* the dual representation, where the N-fold average of a 2p-th power becomes
  a 2p-fold integral of an N-th power (real line for the Gaussian weight,
  circle for Laguerre and Jacobi), evaluated here for p = 1 at any beta;
* at beta = 2 the dual integrand carries a squared Vandermonde, so the 2p-fold
  integral collapses to a 2p x 2p determinant of one-dimensional integrals;
* brute-force tensor quadrature of the defining N-fold integral for N <= 3.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .constants import (
    gaussian_partition,
    laguerre_partition,
    morris_integral,
    selberg_jacobi,
)
from .ensembles import EnsembleSpec, Family, MomentQuery
from .errors import ConditioningError, ConvergenceError, DomainError
from .quadrature import (
    QuadratureGrid,
    circle_trapezoid,
    gauss_jacobi,
    gauss_legendre_panels,
)
from .speclog import ComplexLog, SignedLog

__all__ = [
    "PhaseFunction",
    "SaddleData",
    "phase_function",
    "saddle",
    "dual_moment_p1",
    "beta2_determinant_moment",
    "brute_force_moment",
    "hermite_mean_charpoly",
]

_CIRCLE_FAMILIES = (
    Family.LAGUERRE_FIXED,
    Family.LAGUERRE_SCALED,
    Family.JACOBI_FIXED,
    Family.JACOBI_SCALED,
)


# ---------------------------------------------------------------------------
# phase functions


@dataclass(frozen=True)
class PhaseFunction:
    """f(u) = sum of elementary terms, each with an O(1) and an O(1/N) coefficient.

    Terms (coefficient pairs are (leading, correction)):
      log_u      log u
      log_1pu    log(1 + u)
      log_1mku   log(1 - k u)        (k = lam / (1 - lam))
      log_z0mu   log(z0 - u)         (z0 = sqrt(2) i lam)
      lin        u
      quad       u^2
    """

    family: Family
    lam: float
    N: int
    log_u: tuple = (0.0, 0.0)
    log_1pu: tuple = (0.0, 0.0)
    log_1mku: float = 0.0
    log_z0mu: float = 0.0
    lin: float = 0.0
    quad: float = 0.0
    k: float = 0.0
    z0: complex = 0j

    # total exponents of u and (1 + u) in e^{N f}
    @property
    def u_power(self) -> float:
        return self.N * self.log_u[0] + self.log_u[1]

    @property
    def onep_power(self) -> float:
        return self.N * self.log_1pu[0] + self.log_1pu[1]

    def _terms(self, u, full: bool):
        corr = 1.0 / self.N if full else 0.0
        out = 0j
        a = self.log_u[0] + corr * self.log_u[1]
        b = self.log_1pu[0] + corr * self.log_1pu[1]
        if a:
            out = out + a * np.log(u)
        if b:
            out = out + b * np.log(1 + u)
        if self.log_1mku:
            out = out + self.log_1mku * np.log(1 - self.k * u)
        if self.log_z0mu:
            out = out + self.log_z0mu * np.log(self.z0 - u)
        return out + self.lin * u + self.quad * u * u

    def value(self, u, full: bool = True):
        """Complex value of f (principal logarithms)."""
        return self._terms(u, full)

    def __call__(self, u: complex) -> ComplexLog:
        return ComplexLog.from_log(complex(self.value(u)))

    def d1(self, u, full: bool = False):
        corr = 1.0 / self.N if full else 0.0
        a = self.log_u[0] + corr * self.log_u[1]
        b = self.log_1pu[0] + corr * self.log_1pu[1]
        out = a / u + b / (1 + u) + self.lin + 2 * self.quad * u
        if self.log_1mku:
            out = out - self.log_1mku * self.k / (1 - self.k * u)
        if self.log_z0mu:
            out = out - self.log_z0mu / (self.z0 - u)
        return out

    def d2(self, u, full: bool = False):
        corr = 1.0 / self.N if full else 0.0
        a = self.log_u[0] + corr * self.log_u[1]
        b = self.log_1pu[0] + corr * self.log_1pu[1]
        out = -a / u**2 - b / (1 + u) ** 2 + 2 * self.quad
        if self.log_1mku:
            out = out - self.log_1mku * self.k**2 / (1 - self.k * u) ** 2
        if self.log_z0mu:
            out = out - self.log_z0mu / (self.z0 - u) ** 2
        return out


def phase_function(spec: EnsembleSpec, lam: float) -> PhaseFunction:
    """Dual phase function of the family at spectral point lam."""
    fam, b, N = spec.family, spec.beta, spec.N
    lam = float(lam)
    if fam is Family.GAUSSIAN:
        return PhaseFunction(fam, lam, N, quad=-1.0, log_z0mu=1.0,
                             z0=complex(0.0, math.sqrt(2.0) * lam))
    if fam is Family.LAGUERRE_FIXED:
        (a,) = spec.params
        return PhaseFunction(fam, lam, N, log_u=(-1.0, -1.0),
                             log_1pu=(1.0, 2 * (a + 1) / b - 1), lin=-4 * lam)
    if fam is Family.LAGUERRE_SCALED:
        (alpha,) = spec.params
        return PhaseFunction(fam, lam, N, log_u=(-1.0, -1.0),
                             log_1pu=(alpha + 1, 2 / b - 1), lin=-lam)
    k = lam / (1 - lam)
    if fam is Family.JACOBI_FIXED:
        a1, a2 = spec.params
        return PhaseFunction(fam, lam, N, log_u=(-1.0, -2 * (a2 + 1) / b),
                             log_1pu=(1.0, 2 * (a1 + a2 + 2) / b - 2),
                             log_1mku=1.0, k=k)
    al1, al2 = spec.params
    return PhaseFunction(fam, lam, N, log_u=(-(al2 + 1), -2 / b),
                         log_1pu=(al1 + al2 + 1, 4 / b - 2), log_1mku=1.0, k=k)


# ---------------------------------------------------------------------------
# saddle data


@dataclass(frozen=True)
class SaddleData:
    u_plus: complex
    u_minus: complex
    R: float
    theta_plus: float
    theta_minus: float
    f_sum: float

    @property
    def phi_plus(self) -> float:
        return math.pi - 2 * self.theta_plus

    @property
    def phi_minus(self) -> float:
        return math.pi - 2 * self.theta_minus


def _saddle_points(spec: EnsembleSpec, lam: float) -> tuple:
    fam = spec.family
    if fam is Family.GAUSSIAN:
        w = math.sqrt(1 - lam * lam)
        return (complex(w, lam) / math.sqrt(2), complex(-w, lam) / math.sqrt(2))
    if fam is Family.LAGUERRE_FIXED:
        y = math.sqrt(1 / lam - 1)
        return (complex(-0.5, 0.5 * y), complex(-0.5, -0.5 * y))
    if fam is Family.LAGUERRE_SCALED:
        (alpha,) = spec.params
        y = math.sqrt(4 * lam - (lam - alpha) ** 2)
        x = alpha - lam
        return (complex(x, y) / (2 * lam), complex(x, -y) / (2 * lam))
    if fam is Family.JACOBI_FIXED:
        y = math.sqrt(1 / lam - 1)
        return (complex(0.0, y), complex(0.0, -y))
    a1, a2 = spec.params
    big = (a1 + a2 + 2) ** 2
    delta = (big + a1 * a1 - a2 * a2) * lam - big * lam * lam - a1 * a1
    y = math.sqrt(delta)
    x = (a2 - a1) * lam + a1
    d = 2 * lam * (a1 + 1)
    return (complex(x, y) / d, complex(x, -y) / d)


def _descent_angle(phi: float) -> float:
    """Representative of (pi - phi)/2 mod pi in (-pi, 0]."""
    t = math.fmod((math.pi - phi) / 2, math.pi)
    if t > 0:
        t -= math.pi
    if t <= -math.pi:
        t += math.pi
    return t


def saddle(spec: EnsembleSpec, lam: float, p: int = 1) -> SaddleData:
    """Saddle points, curvature modulus, descent angles and the phase sum.

    The phase sum includes the 1/N terms; for the circle families it is taken
    for f - 2(2p-1)/(beta N) log u, the form that absorbs the Vandermonde
    factor of the circular ensemble.
    """
    spec.check_interior(lam)
    f = phase_function(spec, lam)
    up, um = _saddle_points(spec, lam)
    d2p, d2m = complex(f.d2(up)), complex(f.d2(um))
    R = abs(d2p)
    if spec.family is Family.JACOBI_FIXED:
        s = math.asin(1 - 2 * lam)
        th_p, th_m = 0.5 * s - math.pi, -0.5 * s
    else:
        th_p = _descent_angle(cmath.phase(d2p))
        th_m = _descent_angle(cmath.phase(d2m))
    fp, fm = complex(f.value(up)), complex(f.value(um))
    if spec.family in _CIRCLE_FAMILIES:
        shift = 2 * (2 * p - 1) / (spec.beta * spec.N)
        fp -= shift * cmath.log(up)
        fm -= shift * cmath.log(um)
    return SaddleData(up, um, R, th_p, th_m, (fp + fm).real)


# ---------------------------------------------------------------------------
# circle integrals


_CIRCLE_SIZES = tuple(2**k for k in range(7, 17))


def _is_integer(x: float) -> bool:
    return abs(x - round(x)) < 1e-12


def _circle_radius(f: PhaseFunction, r_saddle: float) -> float:
    """Radius of the integration circle.

    The angular integrand (1+u)^c u^e h(u) is single valued on circles of
    radius r < 1 when e is an integer, and on r > 1 when c + e is an
    integer; otherwise the unit circle is kept.
    """
    e = f.u_power + 1
    c = f.onep_power
    if r_saddle < 1 and _is_integer(e):
        return r_saddle
    if r_saddle > 1 and _is_integer(c + e):
        return r_saddle
    return 1.0


def _circle_log_integrand(f: PhaseFunction, u: np.ndarray, r: float, extra_u: int = 0) -> np.ndarray:
    """log of (1+u)^c u^(e+extra_u) h(u), with the branch fixed by the unit circle."""
    c = f.onep_power
    e = f.u_power + 1 + extra_u
    logu = np.log(u)
    if r > 1:
        out = c * np.log1p(1 / u) + (c + e) * logu
    else:
        out = c * np.log1p(u) + e * logu
    N = f.N
    if f.log_1mku:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = out + N * f.log_1mku * np.log(1 - f.k * u)
    return out + N * f.lin * u


def _circle_nodes(n: int, r: float) -> np.ndarray:
    grid = circle_trapezoid(n)
    return r * np.exp(2j * math.pi * grid.nodes)


def _kernel_fourier(gamma: float, mmax: int) -> np.ndarray:
    """Fourier coefficients v_m, m = 0..mmax, of |2 sin(pi phi)|^gamma."""
    v = np.empty(mmax + 1)
    v[0] = math.exp(math.lgamma(1 + gamma) - 2 * math.lgamma(1 + gamma / 2))
    for m in range(mmax):
        v[m + 1] = v[m] * (m - gamma / 2) / (m + 1 + gamma / 2)
    return v


def _circle_pair_integral(f: PhaseFunction, r: float, gamma: float, n: int):
    """Double angular integral of H(u1) H(u2) K(u1, u2) on the circle of radius r.

    K = (-(u1 - u2)^2 / (u1 u2))^(gamma/2) is the analytic continuation of
    |u1 - u2|^gamma off the unit circle; it only depends on the angle difference.

    Returns (log_scale, value, absolute mass) with the integral equal to
    exp(log_scale) * value.
    """
    u = _circle_nodes(n, r)
    lh = _circle_log_integrand(f, u, r)
    scale = float(lh.real.max())
    h = np.exp(lh - scale)
    b = np.fft.fft(h) / n
    v = _kernel_fourier(gamma, n // 2)
    terms = b[1 : n // 2] * b[n - 1 : n // 2 : -1] * v[1 : n // 2]
    total = b[0] * b[0] * v[0] + 2 * terms.sum()
    mass = abs(b[0]) ** 2 * v[0] + 2 * np.abs(terms).sum()
    return 2 * scale, total, mass


def _relative_change(prev, cur) -> float:
    return abs(1 - prev[1] / cur[1] * math.exp(prev[0] - cur[0]))


def _refine(evaluate, resolutions, tol: float, what: str):
    """Walk through increasing resolutions until two successive values agree to tol.

    evaluate(res) returns (log_scale, value, mass).  Stopping at the last
    resolution is accepted if the final change is below 1e-6.
    """
    it = iter(resolutions)
    res = next(it)
    prev = evaluate(res)
    rel = math.inf
    for res in it:
        cur = evaluate(res)
        rel = _relative_change(prev, cur)
        if rel < tol:
            return cur, rel, res
        prev = cur
    if rel < 1e-6:
        return prev, rel, res
    raise ConvergenceError(f"{what}: refinement stalled at resolution {res}, relative change {rel:.3e}")


def _circle_prefactor(spec: EnsembleSpec, lam: float, p: int) -> tuple:
    """(log prefactor, Morris parameters a, b) for the circle families."""
    fam, b, N = spec.family, spec.beta, spec.N
    if fam in (Family.LAGUERRE_FIXED, Family.LAGUERRE_SCALED):
        (a,) = spec.weight_exponents()
        shrink = 4 * N if fam is Family.LAGUERRE_FIXED else N
        log_pref = (
            -2 * p * N * math.log(shrink)
            + laguerre_partition(a + 2 * p, b / 2, b, N).log_abs
            - laguerre_partition(a, b / 2, b, N).log_abs
        )
        return log_pref, 2 * (a + 1) / b - 1, float(N)
    a1, a2 = spec.weight_exponents()
    log_pref = (
        selberg_jacobi(N, a1 + 2 * p, a2, b / 2).log_abs
        - selberg_jacobi(N, a1, a2, b / 2).log_abs
        + 2 * p * N * math.log1p(-lam)
    )
    return log_pref, 2 * (a1 + 1) / b - 1, 2 * (a2 + 1) / b + N - 1


# ---------------------------------------------------------------------------
# Gaussian line integrals


def _gauss_line_offset(lam: float) -> float:
    return lam / math.sqrt(2.0)


def _gauss_log_g(f: PhaseFunction, t: np.ndarray) -> np.ndarray:
    u = t + 1j * _gauss_line_offset(f.lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = f.N * (-u * u + np.log(f.z0 - u))
    return np.where(np.isnan(out), -np.inf, out)


def _gauss_window(f: PhaseFunction, drop: float = 50.0) -> tuple:
    """Half-width L of the real window and the peak log-modulus of g on the line."""
    c = _gauss_line_offset(f.lam)
    N = f.N

    def h(t):
        return -t * t + c * c + 0.5 * math.log(t * t + c * c)

    t0 = math.sqrt(max(0.5 - c * c, 0.0))
    peak = N * h(t0)
    lo, hi = t0, t0 + 1.0
    while N * (h(t0) - h(hi)) < drop:
        hi *= 2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if N * (h(t0) - h(mid)) < drop:
            lo = mid
        else:
            hi = mid
    return hi, peak


def _gauss_pair_integral(f: PhaseFunction, gamma: float, level: int):
    """Integral over R^2 (shifted to Im u = c) of g(u1) g(u2) |u1-u2|^gamma."""
    L, peak = _gauss_window(f)
    width = min(1.0, 0.75 / math.sqrt(f.N))
    panels = max(4, math.ceil(2 * L / width)) * 2**level
    tg = gauss_legendre_panels(-L, L, panels)
    t = tg.nodes
    g_t = np.exp(_gauss_log_g(f, t) - peak)
    # s = u1 - u2 >= 0 (the integrand is symmetric); Gauss-Jacobi first panel
    h_s = 2 * L / panels
    first = gauss_jacobi(16, gamma, 0.0, 0.0, h_s)
    rest = gauss_legendre_panels(h_s, 2 * L, panels - 1) if panels > 1 else None
    s_nodes = first.nodes if rest is None else np.concatenate([first.nodes, rest.nodes])
    s_w = first.weights if rest is None else np.concatenate([first.weights, rest.weights * rest.nodes**gamma])
    total = 0j
    mass = 0.0
    wt = tg.weights * g_t
    for start in range(0, len(s_nodes), 256):
        s = s_nodes[start : start + 256]
        g_shift = np.exp(_gauss_log_g(f, t[None, :] + s[:, None]) - peak)
        a_s = g_shift @ wt
        total += np.dot(s_w[start : start + 256], a_s)
        mass += float(np.dot(s_w[start : start + 256], np.abs(g_shift) @ np.abs(wt)))
    return 2 * peak, 2 * total, 2 * mass


# ---------------------------------------------------------------------------
# public oracles


def dual_moment_p1(spec: EnsembleSpec, lam: float, tol: float = 1e-11) -> SignedLog:
    """<prod |lam - x_l|^2> from the two-variable dual integral, any beta."""
    value, _ = dual_moment_p1_detail(spec, lam, tol)
    return value


def dual_moment_p1_detail(spec: EnsembleSpec, lam: float, tol: float = 1e-11):
    """As dual_moment_p1, also returning a diagnostics dict."""
    spec.check_interior(lam)
    if spec.N > 256:
        raise DomainError("the dual quadrature is limited to N <= 256")
    f = phase_function(spec, lam)
    gamma = 4.0 / spec.beta
    N = spec.N
    if spec.family is Family.GAUSSIAN:
        (scale, val, mass), rel, nodes = _refine(
            lambda lev: _gauss_pair_integral(f, gamma, lev), range(5), tol, "Gaussian dual quadrature"
        )
        log_pref = -N * math.log(2.0) - gaussian_partition(gamma, 2, N).log_abs
        sign = -1 if N % 2 else 1
        info = {"method": "dual-line", "levels": nodes}
    else:
        up, _ = _saddle_points(spec, lam)
        r = _circle_radius(f, abs(up))
        (scale, val, mass), rel, nodes = _refine(
            lambda n: _circle_pair_integral(f, r, gamma, n), _CIRCLE_SIZES, tol, "circle dual quadrature"
        )
        log_pref, ma, mb = _circle_prefactor(spec, lam, 1)
        log_pref -= morris_integral(2, ma, mb, 2 / spec.beta).log_abs
        sign = 1
        info = {"method": "dual-circle", "nodes": nodes, "radius": r}
    val = complex(val) * sign
    if abs(val.imag) > 1e-6 * abs(val):
        raise ConvergenceError(f"imaginary residual {abs(val.imag) / abs(val):.3e} of the dual integral")
    if not val.real > 0:
        raise ConvergenceError("dual integral is not positive")
    info.update(rel_change=rel, cancellation=mass / abs(val))
    out = SignedLog(1, log_pref + scale + math.log(val.real))
    return out, info


# ---------------------------------------------------------------------------
# beta = 2: Andreief determinant


def _saddle_basis(u: np.ndarray, up: complex, um: complex, size: int) -> np.ndarray:
    """Monic polynomials q^i and q^i (u - u0), q = (u - u+)(u - u-), rescaled.

    Rows are basis functions, columns are nodes.  Each is divided by
    sigma^degree with sigma half the saddle separation, so that all rows
    are of comparable size near the saddles.
    """
    u0 = 0.5 * (up + um)
    sigma = max(abs(up - um) / 2, 1e-3)
    q = (u - up) * (u - um) / sigma**2
    lin = (u - u0) / sigma
    rows = np.empty((size, len(u)), dtype=complex)
    power = np.ones_like(u)
    for j in range(size):
        if j % 2 == 0:
            rows[j] = power
        else:
            rows[j] = power * lin
            power = power * q
    # rows and columns both carry sigma^-degree
    return rows, 2 * sum(range(size)) * math.log(sigma)


def _log_det_scaled(m: np.ndarray) -> tuple:
    """(sign, log|det|, relative uncertainty) with symmetric diagonal scaling."""
    d = np.sqrt(np.abs(np.diag(m)))
    d = np.where(d > 0, d, 1.0)
    ms = m / d[:, None] / d[None, :]
    sign, logdet = np.linalg.slogdet(ms)
    cond = np.linalg.cond(ms)
    logdet += 2 * np.log(d).sum()
    # cancellation: size of the largest permutation term against |det|
    big = math.log(max(np.abs(ms).max(), 1.0)) * len(m)
    cancel = math.exp(min(big - (logdet - 2 * np.log(d).sum()), 700.0))
    return sign, logdet, cond * cancel * np.finfo(float).eps


def _moment_matrix_line(f: PhaseFunction, up, um, size: int, level: int):
    L, peak = _gauss_window(f)
    width = min(1.0, 0.75 / math.sqrt(f.N))
    panels = max(4, math.ceil(2 * L / width)) * 2**level
    grid = gauss_legendre_panels(-L, L, panels)
    u = grid.nodes + 1j * _gauss_line_offset(f.lam)
    g = np.exp(_gauss_log_g(f, grid.nodes) - peak) * grid.weights
    rows, log_basis = _saddle_basis(u, up, um, size)
    return (rows * g) @ rows.T, peak, log_basis


def _moment_matrix_circle(f: PhaseFunction, up, um, size: int, r: float, n: int):
    u = _circle_nodes(n, r)
    lh = _circle_log_integrand(f, u, r, extra_u=-(size - 1))
    peak = float(lh.real.max())
    h = np.exp(lh - peak) / n
    rows, log_basis = _saddle_basis(u, up, um, size)
    return (rows * h) @ rows.T, peak, log_basis


def beta2_determinant_moment(spec: EnsembleSpec, q: MomentQuery, tol: float = 1e-11) -> SignedLog:
    """Exact moment at beta = 2 through a 2p x 2p determinant."""
    value, _ = beta2_determinant_detail(spec, q, tol)
    return value


def beta2_determinant_detail(spec: EnsembleSpec, q: MomentQuery, tol: float = 1e-11):
    if spec.beta != 2:
        raise DomainError("the determinant oracle needs beta = 2")
    if q.p > 6:
        raise DomainError("the determinant oracle supports p <= 6")
    if spec.N > 512:
        raise DomainError("the determinant oracle supports N <= 512")
    lam, p, N = q.lam, q.p, spec.N
    spec.check_interior(lam)
    size = 2 * p
    f = phase_function(spec, lam)
    up, um = _saddle_points(spec, lam)
    gaussian = spec.family is Family.GAUSSIAN
    if not gaussian:
        r = _circle_radius(f, abs(up))

    def evaluate(res):
        if gaussian:
            m, peak, log_basis = _moment_matrix_line(f, up, um, size, res)
        else:
            m, peak, log_basis = _moment_matrix_circle(f, up, um, size, r, res)
        sign, logdet, err = _log_det_scaled(m)
        return sign, logdet + size * peak + log_basis, err

    resolutions = range(5) if gaussian else tuple(2**k for k in range(11, 17))
    it = iter(resolutions)
    prev = evaluate(next(it))
    rel = math.inf
    for res in it:
        cur = evaluate(res)
        rel = abs(1 - prev[0] / cur[0] * cmath.exp(prev[1] - cur[1]))
        prev = cur
        if rel < tol:
            break
    if rel > 1e-6:
        raise ConvergenceError(f"moment-matrix quadrature did not settle (relative change {rel:.3e})")
    sign, logdet, err = prev
    if err > 1e-6:
        raise ConditioningError(f"determinant relative uncertainty {err:.3e} exceeds 1e-6")
    log_val = math.lgamma(size + 1) + logdet
    sign = complex(sign)
    if gaussian:
        log_val += -p * N * math.log(2.0) - gaussian_partition(2.0, size, N).log_abs
        if (p * N) % 2:
            sign = -sign
    else:
        log_pref, ma, mb = _circle_prefactor(spec, lam, p)
        log_val += log_pref - morris_integral(size, ma, mb, 1.0).log_abs
        if (p * (2 * p - 1)) % 2:
            sign = -sign
    if abs(sign.imag) > 1e-6 or sign.real <= 0:
        raise ConvergenceError(f"determinant has phase {cmath.phase(sign):.3e}, expected a positive value")
    info = {"method": "beta2-determinant", "resolution": res, "rel_change": rel, "uncertainty": err}
    return SignedLog(1, log_val), info


# ---------------------------------------------------------------------------
# brute force


def _log_weight_array(spec: EnsembleSpec, x: np.ndarray) -> np.ndarray:
    fam, b, N = spec.family, spec.beta, spec.N
    if fam is Family.GAUSSIAN:
        return -b * N * x * x
    with np.errstate(divide="ignore"):
        if fam in (Family.LAGUERRE_FIXED, Family.LAGUERRE_SCALED):
            (a,) = spec.weight_exponents()
            rate = 2 * b * N if fam is Family.LAGUERRE_FIXED else b * N / 2
            return a * np.log(x) - rate * x
        a1, a2 = spec.weight_exponents()
        return a1 * np.log(x) + a2 * np.log1p(-x)


def _truncated_domain(spec: EnsembleSpec, p: int, drop: float = 45.0) -> tuple:
    """Finite box carrying all but about e^{-drop} of the mass."""
    fam = spec.family
    if fam in (Family.JACOBI_FIXED, Family.JACOBI_SCALED):
        return 0.0, 1.0
    degree = 2 * p + spec.beta * (spec.N - 1) + 1
    gaussian = fam is Family.GAUSSIAN

    def envelope(x):
        x = np.asarray(x, dtype=float)
        env = _log_weight_array(spec, np.abs(x) if gaussian else x)
        return env + degree * np.log1p(np.abs(x))

    hi = 1.0
    while True:
        xs = np.linspace(0.0, hi, 20001)[1:]
        env = envelope(xs)
        top = env.max()
        if env[-1] < top - drop:
            break
        hi *= 2
    # first point beyond the maximum where the envelope falls below the cut
    past = xs[np.argmax(env):]
    cut = past[np.argmax(envelope(past) < top - drop)]
    return (-cut if gaussian else 0.0), float(cut)


def _stick_breaking_integral(spec: EnsembleSpec, lam: float, p: int, n: int) -> tuple:
    """log of the ordered N-fold integral with and without the moment factor."""
    N, b = spec.N, spec.beta
    lo, hi = _truncated_domain(spec, p)
    jacobi = spec.family in (Family.JACOBI_FIXED, Family.JACOBI_SCALED)
    edge_lo = spec.weight_exponents()[0] if spec.family is not Family.GAUSSIAN else 0.0
    edge_hi = spec.weight_exponents()[1] if jacobi else 0.0
    grids = []
    for k in range(N):
        at_lo = edge_lo if k == 0 else b
        at_hi = edge_hi * (N - k)
        grids.append(gauss_jacobi(n, at_lo, at_hi))
    mesh = np.meshgrid(*[g.nodes for g in grids], indexing="ij")
    wmesh = np.meshgrid(*[g.weights for g in grids], indexing="ij")
    s = [m.ravel() for m in mesh]
    logw = sum(np.log(w.ravel()) for w in wmesh)
    x_prev = np.full_like(s[0], lo)
    xs = []
    log_jac = np.zeros_like(s[0])
    for k in range(N):
        span = hi - x_prev
        log_jac += np.log(span)
        x = x_prev + span * s[k]
        xs.append(x)
        x_prev = x
    # weight functions absorbed by the Gauss-Jacobi rules
    with np.errstate(divide="ignore"):
        absorbed = sum(
            (edge_lo if k == 0 else b) * np.log(s[k]) + edge_hi * (N - k) * np.log1p(-s[k])
            for k in range(N)
        )
    log_base = log_jac + logw - absorbed
    for x in xs:
        log_base += _log_weight_array(spec, x)
    for j in range(N):
        for k in range(j + 1, N):
            log_base += b * np.log(xs[k] - xs[j])
    log_moment = sum(2 * p * np.log(np.abs(lam - x)) for x in xs)
    top = np.max(log_base)
    den = np.exp(log_base - top).sum()
    num = np.exp(log_base + log_moment - top).sum()
    return math.log(num) + top, math.log(den) + top


def brute_force_moment(spec: EnsembleSpec, q: MomentQuery, tol: float = 1e-9) -> SignedLog:
    """Direct N-fold quadrature of the defining integral (N <= 3)."""
    if spec.N > 3:
        raise DomainError("brute-force quadrature is limited to N <= 3")
    if q.p > 2:
        raise DomainError("brute-force quadrature is limited to p <= 2")
    sizes = (16, 32, 64, 96, 128, 192) if spec.N == 3 else (16, 32, 64, 128, 256, 512)
    prev = None
    for n in sizes:
        num, den = _stick_breaking_integral(spec, q.lam, q.p, n)
        if prev is not None:
            dn, dd = abs(math.expm1(num - prev[0])), abs(math.expm1(den - prev[1]))
            if max(dn, dd) < tol:
                break
        prev = (num, den)
    if max(dn, dd) > 1e-7:
        raise ConvergenceError(f"brute-force quadrature did not settle ({max(dn, dd):.3e})")
    return SignedLog(1, num - den)


def hermite_mean_charpoly(N: int, beta: float, x: float) -> float:
    """2^{-N} H_N(x), the mean characteristic polynomial for weight e^{-beta t^2/2}.

    The value does not depend on beta; the argument is kept so the call
    mirrors the ensemble it describes.
    """
    if int(N) != N or N < 0:
        raise DomainError("N must be a nonnegative integer")
    if not beta > 0:
        raise DomainError("beta must be positive")
    prev, cur = 1.0, float(x)
    if N == 0:
        return prev
    for k in range(1, int(N)):
        prev, cur = cur, x * cur - 0.5 * k * prev
    return cur
