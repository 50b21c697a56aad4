"""Cross-checks bundled by ``verify``.

Each check returns a CheckResult carrying its worst residual and the
tolerance it was held to, so a failing report says by how much it failed.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..asymptotics import cg21_coefficients, predict
from ..constants import (
    RationalBeta,
    a_beta_p,
    a_tilde,
    gamma_product_identity_residual,
    gaussian_partition,
    laguerre_partition,
    selberg_jacobi,
)
from ..dualexact import (
    beta2_determinant_detail,
    brute_force_moment,
    dual_moment_p1,
    dual_moment_p1_detail,
    hermite_mean_charpoly,
    phase_function,
    saddle,
)
from ..ensembles import EnsembleSpec, Family, MomentQuery
from ..errors import DomainError
from ..sampler import (
    TridiagonalMatrix,
    eigen_tridiagonal,
    mc_moment,
    mc_signed_charpoly,
    sample_spectrum,
)

__all__ = ["CheckResult", "ScanResult", "scan", "ALL_CHECKS", "run_checks", "fit_slope", "exact_log_moment", "density_ratio"]

IDENTITY_PAIRS = ((1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (3, 1), (1, 3))

# parameter choices whose weight exponents are integers at beta in {1, 2, 4},
# so the tensor rules of the brute-force oracle converge quickly
GATE_FAMILIES = (
    (Family.GAUSSIAN, {}),
    (Family.LAGUERRE_FIXED, {"a": 1.0}),
    (Family.JACOBI_FIXED, {"a1": 3.0, "a2": 1.0}),
    (Family.LAGUERRE_SCALED, {"alpha": 2.0}),
    (Family.JACOBI_SCALED, {"alpha1": 2.0, "alpha2": 2.0}),
)

GENERIC_FAMILIES = (
    (Family.GAUSSIAN, {}),
    (Family.LAGUERRE_FIXED, {"a": 0.7}),
    (Family.JACOBI_FIXED, {"a1": 0.5, "a2": 1.5}),
    (Family.LAGUERRE_SCALED, {"alpha": 2.0}),
    (Family.JACOBI_SCALED, {"alpha1": 1.0, "alpha2": 2.0}),
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""
    extra: dict = field(default_factory=dict)


def interior_points(spec: EnsembleSpec, fractions=(0.2, 0.5, 0.8)) -> list:
    sup = spec.support()
    return [sup.lower + f * (sup.upper - sup.lower) for f in fractions]


# ---------------------------------------------------------------------------
# shared computations


def exact_log_moment(spec: EnsembleSpec, q: MomentQuery, method: str = "auto") -> tuple:
    """(log moment, method name) from the best available exact route."""
    if method == "auto":
        if spec.beta == 2:
            method = "determinant"
        elif q.p == 1:
            method = "dual"
        elif spec.N <= 3:
            method = "brute"
        else:
            raise DomainError(f"no exact route for beta={spec.beta}, p={q.p}, N={spec.N}")
    if method == "determinant":
        val, _ = beta2_determinant_detail(spec, q)
    elif method == "dual":
        if q.p != 1:
            raise DomainError("the dual quadrature handles p = 1 only")
        val, _ = dual_moment_p1_detail(spec, q.lam)
    elif method == "brute":
        val = brute_force_moment(spec, q)
    else:
        raise DomainError(f"unknown method {method!r}")
    return val.log_abs, method


def fit_slope(Ns, rel_errors) -> tuple:
    """Least-squares slope of log(rel_error) on log(N) and its standard error."""
    x = np.log(np.asarray(Ns, dtype=float))
    y = np.log(np.asarray(rel_errors, dtype=float))
    n = len(x)
    xm = x.mean()
    sxx = ((x - xm) ** 2).sum()
    slope = float(((x - xm) * (y - y.mean())).sum() / sxx)
    if n > 2:
        resid = y - y.mean() - slope * (x - xm)
        se = float(math.sqrt((resid**2).sum() / (n - 2) / sxx))
    else:
        se = float("nan")
    return slope, se


@dataclass
class ScanResult:
    """Exact vs predicted log-moments along an N ladder.

    rows hold (N, log_exact, log_predicted, rel_error, method).
    """

    family: str
    beta: float
    p: int
    lam: float
    rows: list
    fitted_slope: float
    slope_stderr: float
    dropped_smallest: bool


def scan(spec0: EnsembleSpec, lam: float, p: int, Ns, threads: int = 1) -> ScanResult:
    """Exact vs predicted along an N ladder, with the slope fit."""
    q = MomentQuery(lam, p)

    def one(N):
        spec = spec0.with_N(N)
        ex, method = exact_log_moment(spec, q)
        pr = predict(spec, q).log_value
        return (N, ex, pr, abs(math.expm1(ex - pr)), method)

    Ns = sorted(Ns)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(one, Ns))
    else:
        rows = [one(N) for N in Ns]
    fit_rows = rows
    dropped = False
    if len(rows) > 2 and rows[0][3] > 0.5:
        fit_rows = rows[1:]
        dropped = True
    slope, se = fit_slope([r[0] for r in fit_rows], [r[3] for r in fit_rows])
    return ScanResult(spec0.family.value, spec0.beta, p, lam, rows, slope, se, dropped)


def log_partition(spec: EnsembleSpec, n_points: int) -> float:
    """log of the n-point partition function with the weight of ``spec`` (its N kept fixed)."""
    fam, b = spec.family, spec.beta
    if fam is Family.GAUSSIAN:
        return gaussian_partition(b, n_points, b * spec.N).log_abs
    if fam in (Family.LAGUERRE_FIXED, Family.LAGUERRE_SCALED):
        (a,) = spec.weight_exponents()
        rate = 2 * b * spec.N if fam is Family.LAGUERRE_FIXED else b * spec.N / 2
        return laguerre_partition(a, rate, b, n_points).log_abs
    a1, a2 = spec.weight_exponents()
    return selberg_jacobi(n_points, a1, a2, b / 2).log_abs


def density_ratio(spec: EnsembleSpec, lam: float) -> tuple:
    """rho_{N+1}(lam) / (N rho(lam)) from the moment with p = beta/2.

    Returns (ratio, log rho_{N+1}(lam), method).  beta = 2 uses the exact determinant; other even
    beta fall back to the asymptotic predictor for the moment.
    """
    b = spec.beta
    if b != int(b) or int(b) % 2:
        raise DomainError("density reconstruction needs an even integer beta")
    p = int(b) // 2
    q = MomentQuery(lam, p)
    if b == 2:
        log_m, method = exact_log_moment(spec, q, "determinant")
    else:
        log_m, method = predict(spec, q).log_value, "predict"
    N = spec.N
    log_rho = (
        math.log(N + 1)
        + log_partition(spec, N)
        - log_partition(spec, N + 1)
        + spec.log_weight(lam)
        + log_m
    )
    return math.exp(log_rho) / (N * spec.density(lam)), log_rho, method


def _printed_R(spec: EnsembleSpec, lam: float) -> float:
    fam = spec.family
    if fam is Family.GAUSSIAN:
        return 4 * math.sqrt(1 - lam * lam)
    if fam is Family.LAGUERRE_FIXED:
        return 16 * lam * lam * math.sqrt(1 / lam - 1)
    if fam is Family.JACOBI_FIXED:
        return 2 * lam**1.5 / math.sqrt(1 - lam)
    if fam is Family.LAGUERRE_SCALED:
        (al,) = spec.params
        return lam / math.sqrt(al + 1) * math.sqrt(4 * lam - (al - lam) ** 2)
    a1, a2 = spec.params
    big = (a1 + a2 + 2) ** 2
    delta = (big + a1 * a1 - a2 * a2) * lam - big * lam * lam - a1 * a1
    return (1 + a1) ** 1.5 * lam * math.sqrt(delta) / (math.sqrt(1 + a2) * math.sqrt(1 + a1 + a2) * (1 - lam))


# ---------------------------------------------------------------------------
# checks


def check_identity(tol) -> CheckResult:
    worst = 0.0
    for m, n in IDENTITY_PAIRS:
        rb = RationalBeta(m, n)
        for p in range(1, 5):
            worst = max(worst, abs(a_beta_p(rb.beta, p).log_abs - a_tilde(rb, p).log_abs))
            for s in np.linspace(0.3, 4.0, 7):
                worst = max(worst, abs(gamma_product_identity_residual(float(s), m, n, p)))
    return CheckResult("universality identity", worst < tol["identity_log"], worst, tol["identity_log"])


def check_keating_snaith(tol) -> CheckResult:
    worst = 0.0
    for p, target in ((1, 1.0), (2, 1 / 12), (3, 1 / 8640)):
        worst = max(worst, abs(math.expm1(a_tilde(RationalBeta(1, 1), p).log_abs - math.log(target))))
    return CheckResult("Keating-Snaith constants", worst < tol["keating_snaith_rel"], worst, tol["keating_snaith_rel"])


def check_duality_gate(tol) -> CheckResult:
    worst = 0.0
    where = ""
    for fam, params in GATE_FAMILIES:
        for beta in (1.0, 2.0, 4.0):
            for N in (1, 2, 3):
                spec = EnsembleSpec.make(fam, beta, N, **params)
                for lam in interior_points(spec):
                    bf = brute_force_moment(spec, MomentQuery(lam)).log_abs
                    d = dual_moment_p1(spec, lam).log_abs
                    r = abs(math.expm1(d - bf))
                    if r > worst:
                        worst, where = r, f"{fam.value} beta={beta} N={N} lam={lam:.3f}"
    return CheckResult("duality gate (N<=3)", worst < tol["duality_gate_rel"], worst, tol["duality_gate_rel"], where)


def check_two_path(tol) -> CheckResult:
    worst = 0.0
    for N in (1, 2, 4, 8, 16, 32, 64):
        spec = EnsembleSpec.make(Family.GAUSSIAN, 2.0, N)
        d = dual_moment_p1(spec, 0.3).log_abs
        m, _ = exact_log_moment(spec, MomentQuery(0.3), "determinant")
        worst = max(worst, abs(math.expm1(d - m)))
    return CheckResult("beta=2 dual vs determinant", worst < tol["two_path_rel"], worst, tol["two_path_rel"])


def check_saddles(tol, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for fam, params in GENERIC_FAMILIES:
        spec = EnsembleSpec.make(fam, 2.0, 50, **params)
        sup = spec.support()
        for lam in rng.uniform(sup.lower, sup.upper, 20):
            lam = float(np.clip(lam, sup.lower + 1e-3 * sup.width, sup.upper - 1e-3 * sup.width))
            f = phase_function(spec, lam)
            sd = saddle(spec, lam)
            res = max(abs(f.d1(sd.u_plus)), abs(f.d1(sd.u_minus)))
            rel_R = abs(sd.R / _printed_R(spec, lam) - 1)
            worst = max(worst, res, rel_R)
        if fam is Family.LAGUERRE_SCALED:
            (al,) = spec.params
            for lam in interior_points(spec, (0.1, 0.4, 0.7, 0.9)):
                lhs = 4 * lam - (lam - al) ** 2
                rhs = (2 * math.pi * lam * spec.density(lam)) ** 2
                worst = max(worst, abs(lhs - rhs))
    return CheckResult("saddle residuals and curvature", worst < tol["saddle_residual"], worst, tol["saddle_residual"])


SCAN_LADDERS = {
    1.0: (8, 16, 32, 64, 128, 256),
    2.0: (8, 16, 32, 64, 128, 256),
    4.0: (8, 16, 32, 64, 128),
}


def check_error_scans(tol) -> list:
    out = []
    for beta, Ns in SCAN_LADDERS.items():
        res = scan(EnsembleSpec.make(Family.GAUSSIAN, beta, Ns[0]), 0.3, 1, Ns)
        target = -min(2 / beta, 1.0)
        dev = abs(res.fitted_slope - target)
        out.append(CheckResult(
            f"remainder slope beta={beta:g}", dev <= tol["slope_halfwidth"], dev, tol["slope_halfwidth"],
            f"slope={res.fitted_slope:.3f} target={target:g}",
        ))
    return out


ORACLE_LADDER = (16, 32, 64, 128)


def check_oracle_vs_predict(tol) -> list:
    out = []
    for p in (1, 2):
        res = scan(EnsembleSpec.make(Family.GAUSSIAN, 2.0, 16), 0.3, p, ORACLE_LADDER)
        errs = [r[3] for r in res.rows]
        decreasing = all(b < a for a, b in zip(errs, errs[1:]))
        ok = decreasing and errs[-1] < tol["oracle_terminal_rel"]
        out.append(CheckResult(
            f"beta=2 oracle vs predictor p={p}", ok, errs[-1], tol["oracle_terminal_rel"],
            "errors " + ", ".join(f"{e:.4g}" for e in errs),
        ))
    return out


def check_cg21(tol) -> CheckResult:
    worst = 0.0
    for fam, params in GENERIC_FAMILIES:
        spec = EnsembleSpec.make(fam, 2.0, 40, **params)
        for lam in interior_points(spec, (0.1, 0.3, 0.5, 0.7, 0.9)):
            for p in (1, 2):
                q = MomentQuery(lam, p)
                c1, c2, c3 = cg21_coefficients(spec, q)
                alt = c1 * spec.N + c2 * math.log(spec.N) + c3
                worst = max(worst, abs(alt - predict(spec, q).log_value))
    return CheckResult("beta=2 coefficient sets vs predictor", worst < tol["cg21_log"], worst, tol["cg21_log"])


def check_hermite_mc(tol, seed: int) -> CheckResult:
    worst = 0.0
    for beta in (1.0, 2.0, 4.0):
        for N in (2, 4):
            for x in (0.0, 0.5, 1.0):
                est = mc_signed_charpoly(N, beta, x, int(tol["mc_samples"]), seed)
                z = (est.mean - hermite_mean_charpoly(N, beta, x)) / est.stderr
                worst = max(worst, abs(z))
    return CheckResult("mean characteristic polynomial (MC)", worst < tol["mc_z"], worst, tol["mc_z"])


def check_density(tol) -> list:
    out = []
    for lam in (0.2, 0.0):
        ratios = [density_ratio(EnsembleSpec.make(Family.GAUSSIAN, 2.0, N), lam)[0] for N in ORACLE_LADDER]
        gaps = [abs(r - 1) for r in ratios]
        ok = all(b < a for a, b in zip(gaps, gaps[1:])) and gaps[-1] < tol["density_gaussian"]
        out.append(CheckResult(
            f"density reconstruction Gaussian lam={lam:g}", ok, gaps[-1], tol["density_gaussian"],
            "ratios " + ", ".join(f"{r:.5f}" for r in ratios),
        ))
    r = density_ratio(EnsembleSpec.make(Family.JACOBI_FIXED, 2.0, 64, a1=0.0, a2=0.0), 0.5)[0]
    out.append(CheckResult("density reconstruction JacobiFixed", abs(r - 1) < tol["density_jacobi"],
                           abs(r - 1), tol["density_jacobi"], f"ratio {r:.5f}"))
    return out


def check_mc_vs_oracle(tol, seed: int) -> CheckResult:
    spec = EnsembleSpec.make(Family.GAUSSIAN, 2.0, 20)
    q = MomentQuery(0.2, 1)
    ex, _ = exact_log_moment(spec, q, "determinant")
    n = int(tol["mc_oracle_samples"])
    one = mc_moment(spec, q, n, seed, threads=1)
    many = mc_moment(spec, q, n, seed, threads=3)
    z = (one.log_mean - ex) / one.log_mean_stderr
    rel = abs(math.expm1(one.log_mean - ex))
    same = one == many
    ok = abs(z) < tol["mc_z"] and rel < tol["mc_rel"] and same and not one.heavy_tailed
    return CheckResult("MC vs determinant oracle", ok, abs(z), tol["mc_z"],
                       f"z={z:.3f} rel={rel:.4f} thread-invariant={same}")


def check_sampler_gate(tol, seed: int) -> CheckResult:
    worst = 0.0
    where = ""
    for fam, params in GATE_FAMILIES:
        for beta in (1.0, 2.0, 4.0):
            for N in (1, 2, 3):
                spec = EnsembleSpec.make(fam, beta, N, **params)
                for lam in interior_points(spec, (0.3, 0.7)):
                    q = MomentQuery(lam)
                    ex = brute_force_moment(spec, q).log_abs
                    est = mc_moment(spec, q, int(tol["mc_samples"]), seed)
                    z = abs(est.log_mean - ex) / est.log_mean_stderr
                    if z > worst:
                        worst, where = z, f"{fam.value} beta={beta} N={N} lam={lam:.3f}"
    return CheckResult("matrix models vs brute force", worst < tol["mc_z"], worst, tol["mc_z"], where)


def check_sampler_shapes(tol, seed: int) -> CheckResult:
    from scipy.stats import kstest

    spec = EnsembleSpec.make(Family.GAUSSIAN, 2.0, 200)
    pooled = np.concatenate([sample_spectrum(spec, seed + k) for k in range(5)])

    def cdf(x):
        x = np.clip(x, -1, 1)
        return 0.5 + (x * np.sqrt(1 - x * x) + np.arcsin(x)) / math.pi

    ks = kstest(pooled, cdf).statistic
    ls = EnsembleSpec.make(Family.LAGUERRE_SCALED, 2.0, 200, alpha=3.0)
    inside = all(
        np.all((s > 0.5) & (s < 9.5)) for s in (sample_spectrum(ls, seed + k) for k in range(100))
    )
    T = TridiagonalMatrix([2.0, 2.0, 2.0], [1.0, 1.0])
    eig_err = float(np.abs(eigen_tridiagonal(T) - np.array([2 - math.sqrt(2), 2, 2 + math.sqrt(2)])).max())
    ok = ks < 0.05 and inside and eig_err < 1e-12
    return CheckResult("sampler shape checks", ok, ks, 0.05, f"KS={ks:.4f} LS-support={inside} eig={eig_err:.1e}")


def check_degenerations(tol) -> list:
    worst_mp = 0.0
    for beta in (1.0, 2.0, 4.0):
        for N in (10, 100):
            for p in (1, 2):
                for lam in (0.5, 1.5, 3.0):
                    ls = EnsembleSpec.make(Family.LAGUERRE_SCALED, beta, N, alpha=0.0)
                    lf = EnsembleSpec.make(Family.LAGUERRE_FIXED, beta, N, a=0.0)
                    a = predict(ls, MomentQuery(lam, p)).log_value
                    # x^0 e^{-beta N x/2} is the fixed-a weight after x -> 4x
                    b = 2 * p * N * math.log(4.0) + predict(lf, MomentQuery(lam / 4, p)).log_value
                    worst_mp = max(worst_mp, abs(a - b))
                    tiny = EnsembleSpec.make(Family.LAGUERRE_SCALED, beta, N, alpha=1e-13)
                    worst_mp = max(worst_mp, abs(predict(tiny, MomentQuery(lam, p)).log_value - a))
    worst_j = 0.0
    for beta in (1.0, 2.0, 4.0):
        for N in (10, 100):
            for p in (1, 2):
                for lam in (0.1, 0.5, 0.8):
                    js = EnsembleSpec.make(Family.JACOBI_SCALED, beta, N, alpha1=0.0, alpha2=0.0)
                    jf = EnsembleSpec.make(Family.JACOBI_FIXED, beta, N, a1=0.0, a2=0.0)
                    q = MomentQuery(lam, p)
                    worst_j = max(worst_j, abs(predict(js, q).log_value - predict(jf, q).log_value))
    return [
        CheckResult("LaguerreScaled alpha->0 degeneration", worst_mp < tol["degeneration_mp"], worst_mp, tol["degeneration_mp"]),
        CheckResult("JacobiScaled zero-exponent degeneration", worst_j < tol["degeneration_jacobi"], worst_j, tol["degeneration_jacobi"]),
    ]


ALL_CHECKS = (
    "identity", "keating_snaith", "duality_gate", "two_path", "saddles", "error_scans",
    "oracle_vs_predict", "cg21", "hermite_mc", "density", "mc_vs_oracle", "sampler_gate",
    "sampler_shapes", "degenerations",
)


def run_checks(tol: dict, seed: int, names=ALL_CHECKS) -> list:
    table = {
        "identity": lambda: check_identity(tol),
        "keating_snaith": lambda: check_keating_snaith(tol),
        "duality_gate": lambda: check_duality_gate(tol),
        "two_path": lambda: check_two_path(tol),
        "saddles": lambda: check_saddles(tol),
        "error_scans": lambda: check_error_scans(tol),
        "oracle_vs_predict": lambda: check_oracle_vs_predict(tol),
        "cg21": lambda: check_cg21(tol),
        "hermite_mc": lambda: check_hermite_mc(tol, seed),
        "density": lambda: check_density(tol),
        "mc_vs_oracle": lambda: check_mc_vs_oracle(tol, seed),
        "sampler_gate": lambda: check_sampler_gate(tol, seed),
        "sampler_shapes": lambda: check_sampler_shapes(tol, seed),
        "degenerations": lambda: check_degenerations(tol),
    }
    results = []
    for name in names:
        if name not in table:
            raise KeyError(f"unknown check {name!r}")
        r = table[name]()
        results.extend(r if isinstance(r, list) else [r])
    return results
