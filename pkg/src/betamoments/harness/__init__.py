"""Command-line experiments, cross-checks and reports."""
from .checks import CheckResult, ScanResult, run_checks
from .commands import (
    cmd_density_reconstruct,
    cmd_error_scan,
    cmd_identity,
    cmd_mc,
    cmd_oracle,
    cmd_predict,
    cmd_verify,
)
from .config import ConfigError, ExperimentConfig, tolerances
from .report import Table, emit, parse

__all__ = [
    "CheckResult",
    "ScanResult",
    "run_checks",
    "cmd_density_reconstruct",
    "cmd_error_scan",
    "cmd_identity",
    "cmd_mc",
    "cmd_oracle",
    "cmd_predict",
    "cmd_verify",
    "ConfigError",
    "ExperimentConfig",
    "tolerances",
    "Table",
    "emit",
    "parse",
]
