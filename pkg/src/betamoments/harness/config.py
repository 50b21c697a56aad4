"""Experiment configuration and the tolerance table."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from ..ensembles import PARAM_NAMES, EnsembleSpec, Family
from ..errors import DomainError

__all__ = [
    "COMMAND_NAMES",
    "ConfigError",
    "ExperimentConfig",
    "TOLERANCE_VERSION",
    "TOLERANCE_PROFILES",
    "tolerances",
]


class ConfigError(DomainError):
    """Invalid or incomplete experiment configuration."""


COMMAND_NAMES = ("predict", "oracle", "mc", "error-scan", "identity", "density", "verify")
METHODS = ("auto", "dual", "determinant", "brute")

TOLERANCE_VERSION = "1"

_DEFAULT = {
    "identity_log": 1e-9,
    "keating_snaith_rel": 1e-12,
    "duality_gate_rel": 1e-5,
    "two_path_rel": 1e-8,
    "cg21_log": 1e-8,
    "saddle_residual": 1e-10,
    "slope_halfwidth": 0.3,
    "oracle_terminal_rel": 0.05,
    "mc_z": 3.0,
    "mc_rel": 0.02,
    "density_gaussian": 0.1,
    "density_jacobi": 0.15,
    "degeneration_mp": 1e-9,
    "degeneration_jacobi": 1e-10,
    "mc_samples": 100000,
    "mc_oracle_samples": 200000,
}

TOLERANCE_PROFILES = {
    "default": dict(_DEFAULT),
    # fewer Monte Carlo samples, same numerical tolerances
    "quick": dict(_DEFAULT, mc_samples=20000, mc_oracle_samples=50000),
}


def tolerances(profile: str = "default", overrides: dict | None = None) -> dict:
    if profile not in TOLERANCE_PROFILES:
        raise ConfigError(f"unknown tolerance profile {profile!r}; choose from {sorted(TOLERANCE_PROFILES)}")
    tol = dict(TOLERANCE_PROFILES[profile])
    for key, value in (overrides or {}).items():
        if key not in tol:
            raise ConfigError(f"unknown tolerance {key!r}; known: {sorted(tol)}")
        tol[key] = type(tol[key])(value)
    return tol


@dataclass
class ExperimentConfig:
    command: str
    family: str = "GaussianGlobal"
    beta: float = 2.0
    N: list = field(default_factory=lambda: [16])
    p: int = 1
    lam: list = field(default_factory=lambda: [0.3])
    params: dict = field(default_factory=dict)
    n_samples: int = 100000
    seed: int = 2026
    method: str = "auto"
    triples: list = field(default_factory=list)
    threads: int = 1
    tolerance_profile: str = "default"
    tolerance_overrides: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.command not in COMMAND_NAMES:
            raise ConfigError(f"unknown command {self.command!r}; choose from {list(COMMAND_NAMES)}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {list(METHODS)}, got {self.method!r}")
        if self.n_samples < 1000:
            raise ConfigError(f"n_samples must be at least 1000, got {self.n_samples}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        try:
            fam = Family.parse(self.family)
        except DomainError as exc:
            raise ConfigError(f"{exc}; choose from {[f.value for f in Family]}") from None
        self.family = fam.value
        if isinstance(self.N, int):
            self.N = [self.N]
        if isinstance(self.lam, (int, float)):
            self.lam = [self.lam]
        self.N = [int(n) for n in self.N]
        self.lam = [float(x) for x in self.lam]
        self.beta = float(self.beta)
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if any(n < 1 for n in self.N):
            raise ConfigError(f"N values must be positive integers, got {self.N}")
        if int(self.p) != self.p or self.p < 1:
            raise ConfigError(f"p must be a positive integer, got {self.p}")
        self.p = int(self.p)
        names = PARAM_NAMES[fam]
        unknown = set(self.params) - set(names)
        if unknown:
            raise ConfigError(f"{fam.value} takes parameters {names}, got unexpected {sorted(unknown)}")
        missing = [n for n in names if n not in self.params]
        if missing:
            raise ConfigError(f"{fam.value} needs parameters {missing} (use --param name=value)")
        self.params = {k: float(self.params[k]) for k in names}
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        tolerances(self.tolerance_profile, self.tolerance_overrides)
        self.triples = [tuple(int(v) for v in t) for t in self.triples]

    def spec(self, N: int) -> EnsembleSpec:
        try:
            return EnsembleSpec.make(self.family, self.beta, N, **self.params)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    def tolerances(self) -> dict:
        return tolerances(self.tolerance_profile, self.tolerance_overrides)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["triples"] = [list(t) for t in self.triples]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown configuration keys {sorted(extra)}")
        if "command" not in d:
            raise ConfigError("configuration needs a 'command'")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        return cls.from_dict(data)
