"""Subcommand bodies.  Each takes an ExperimentConfig and returns a Table."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..asymptotics import predict
from ..constants import RationalBeta, a_beta_p, a_tilde, gamma_product_identity_residual
from ..ensembles import MomentQuery
from ..errors import DomainError
from ..sampler import mc_moment
from .checks import ALL_CHECKS, ScanResult, density_ratio, exact_log_moment, run_checks, scan
from .config import ConfigError, ExperimentConfig
from .report import Table

__all__ = [
    "ScanResult",
    "cmd_predict",
    "cmd_oracle",
    "cmd_mc",
    "cmd_error_scan",
    "cmd_identity",
    "cmd_density_reconstruct",
    "cmd_verify",
    "scan_table",
    "COMMANDS",
]

IDENTITY_GRID = np.linspace(0.25, 4.0, 16)


def _grid(cfg: ExperimentConfig) -> list:
    return sorted(itertools.product(cfg.N, cfg.lam))


def _map(cfg: ExperimentConfig, fn, items) -> list:
    """Run ``fn`` over items; results come back in item order."""
    if cfg.threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def _base(cfg: ExperimentConfig, N, lam, method, value, stderr=None) -> dict:
    return {
        "family": cfg.family,
        "beta": cfg.beta,
        "N": N,
        "p": cfg.p,
        "lambda": lam,
        "value_log": value,
        "stderr_log": stderr,
        "method": method,
        "seed": cfg.seed,
        "config": cfg.to_json(),
    }


def _checked_spec(cfg, N, lam):
    spec = cfg.spec(N)
    try:
        spec.check_interior(lam)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return spec


def cmd_predict(cfg: ExperimentConfig) -> Table:
    table = Table(["error_exponent"])

    def one(item):
        N, lam = item
        pr = predict(_checked_spec(cfg, N, lam), MomentQuery(lam, cfg.p))
        return dict(_base(cfg, N, lam, "predict", pr.log_value), error_exponent=pr.error_exponent)

    for row in _map(cfg, one, _grid(cfg)):
        table.add(row)
    return table


def cmd_oracle(cfg: ExperimentConfig) -> Table:
    table = Table(["log_predicted", "rel_error"])

    def one(item):
        N, lam = item
        spec = _checked_spec(cfg, N, lam)
        q = MomentQuery(lam, cfg.p)
        value, method = exact_log_moment(spec, q, cfg.method)
        pr = predict(spec, q).log_value
        return dict(_base(cfg, N, lam, method, value), log_predicted=pr, rel_error=abs(np.expm1(value - pr)))

    for row in _map(cfg, one, _grid(cfg)):
        table.add(row)
    return table


def cmd_mc(cfg: ExperimentConfig) -> Table:
    table = Table(["n_samples", "jackknife_stderr", "max_weight_fraction", "heavy_tailed"])
    # parallelism lives inside the sampler, whose chunk streams make it thread-count invariant
    for N, lam in _grid(cfg):
        spec = _checked_spec(cfg, N, lam)
        est = mc_moment(spec, MomentQuery(lam, cfg.p), cfg.n_samples, cfg.seed, threads=cfg.threads)
        table.add(dict(
            _base(cfg, N, lam, "mc", est.log_mean, est.log_mean_stderr),
            n_samples=est.n_samples,
            jackknife_stderr=est.jackknife_stderr,
            max_weight_fraction=est.max_weight_fraction,
            heavy_tailed=est.heavy_tailed,
        ))
    return table


def _check_scan_route(cfg: ExperimentConfig) -> None:
    if cfg.beta == 2:
        if cfg.p > 6:
            raise ConfigError("the beta=2 determinant oracle is limited to p <= 6")
    elif cfg.p == 1:
        if max(cfg.N) > 256:
            raise ConfigError("the p=1 dual quadrature is limited to N <= 256")
    else:
        raise ConfigError(f"no exact oracle for beta={cfg.beta:g} with p={cfg.p}; use beta=2 or p=1")
    if len(set(cfg.N)) < 3:
        raise ConfigError("an error scan needs at least three distinct N values")


def cmd_error_scan(cfg: ExperimentConfig) -> ScanResult:
    _check_scan_route(cfg)
    if len(cfg.lam) != 1:
        raise ConfigError("an error scan takes a single lambda")
    lam = cfg.lam[0]
    spec0 = _checked_spec(cfg, min(cfg.N), lam)
    return scan(spec0, lam, cfg.p, sorted(set(cfg.N)), threads=cfg.threads)


def scan_table(cfg: ExperimentConfig, res: ScanResult) -> Table:
    table = Table(["log_predicted", "rel_error", "fitted_slope", "slope_stderr", "dropped_smallest"])
    for i, (N, ex, pr, rel, method) in enumerate(res.rows):
        table.add(dict(
            _base(cfg, N, res.lam, method, ex),
            log_predicted=pr,
            rel_error=rel,
            fitted_slope=res.fitted_slope,
            slope_stderr=res.slope_stderr,
            # flag the row that was left out of the fit
            dropped_smallest=res.dropped_smallest and i == 0,
        ))
    return table


def cmd_identity(cfg: ExperimentConfig) -> Table:
    if not cfg.triples:
        raise ConfigError("identity needs at least one m,n,p triple (use --triples)")
    table = Table(["m", "n", "log_a_beta_p", "log_a_tilde", "identity_residual", "product_residual"])

    def one(triple):
        m, n, p = triple
        try:
            rb = RationalBeta(m, n)
            lhs = a_beta_p(rb.beta, p).log_abs
            rhs = a_tilde(rb, p).log_abs
        except DomainError as exc:
            raise ConfigError(f"triple {triple}: {exc}") from None
        prod = max(abs(gamma_product_identity_residual(float(s), m, n, p)) for s in IDENTITY_GRID)
        row = _base(cfg, None, None, "identity", rhs)
        row.update(family=None, beta=rb.beta, p=p, m=m, n=n, log_a_beta_p=lhs, log_a_tilde=rhs,
                   identity_residual=abs(lhs - rhs), product_residual=prod)
        return row

    for row in _map(cfg, one, sorted(cfg.triples)):
        table.add(row)
    return table


def cmd_density_reconstruct(cfg: ExperimentConfig) -> Table:
    if cfg.beta != int(cfg.beta) or int(cfg.beta) % 2:
        raise ConfigError(f"density reconstruction needs an even integer beta, got {cfg.beta:g}")
    table = Table(["ratio", "log_density_limit"])

    def one(item):
        N, lam = item
        spec = _checked_spec(cfg, N, lam)
        ratio, log_rho, method = density_ratio(spec, lam)
        row = _base(cfg, N, lam, method, log_rho)
        row.update(p=int(cfg.beta) // 2, ratio=ratio, log_density_limit=float(np.log(N * spec.density(lam))))
        return row

    for row in _map(cfg, one, _grid(cfg)):
        table.add(row)
    return table


def cmd_verify(cfg: ExperimentConfig) -> Table:
    table = Table(["check", "passed", "residual", "tolerance", "detail"])
    for r in run_checks(cfg.tolerances(), cfg.seed, ALL_CHECKS):
        row = _base(cfg, None, None, "verify", None)
        row.update(family=None, beta=None, p=None, check=r.name, passed=bool(r.passed),
                   residual=float(r.residual), tolerance=float(r.tolerance), detail=r.detail)
        table.add(row)
    return table


COMMANDS = {
    "predict": cmd_predict,
    "oracle": cmd_oracle,
    "mc": cmd_mc,
    "error-scan": lambda cfg: scan_table(cfg, cmd_error_scan(cfg)),
    "identity": cmd_identity,
    "density": cmd_density_reconstruct,
    "verify": cmd_verify,
}
