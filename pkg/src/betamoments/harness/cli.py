"""Command-line entry point: ``betamoments <command> [options]``."""
from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConvergenceError, DomainError
from .checks import IDENTITY_PAIRS
from .commands import COMMANDS
from .config import COMMAND_NAMES, ConfigError, ExperimentConfig
from .report import emit

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4

DEFAULT_SCAN_LADDER = [8, 16, 32, 64, 128, 256]
DEFAULT_TRIPLES = [(m, n, p) for m, n in IDENTITY_PAIRS for p in range(1, 5)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _ints(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _pair(text: str) -> tuple:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k.strip(), float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{k}: {v!r} is not a number") from None


def _triple(text: str) -> tuple:
    parts = _ints(text)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected m,n,p, got {text!r}")
    return tuple(parts)


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run options")
    g.add_argument("--seed", type=_seed, help="random seed (default 2026)")
    g.add_argument("--out", help="write the table here instead of stdout")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--threads", type=int)
    g.add_argument("--tolerance-profile", dest="tolerance_profile")
    g.add_argument("--tol", action="append", type=_pair, default=[], metavar="NAME=VALUE",
                   help="override one tolerance; repeatable")
    g.add_argument("--config", help="JSON configuration; its keys override flags")
    e = common.add_argument_group("ensemble and query")
    e.add_argument("--family", help="GaussianGlobal, LaguerreFixed, LaguerreScaled, JacobiFixed or JacobiScaled")
    e.add_argument("--beta", type=float)
    e.add_argument("--N", dest="N", type=_ints, help="comma-separated sizes")
    e.add_argument("--p", type=int)
    e.add_argument("--lam", type=_floats, help="comma-separated spectral points")
    e.add_argument("--param", action="append", type=_pair, default=[], metavar="NAME=VALUE",
                   help="weight parameter such as a=1 or alpha1=0.5; repeatable")
    e.add_argument("--samples", dest="n_samples", type=int)
    e.add_argument("--triples", action="append", type=_triple, metavar="M,N,P",
                   help="identity triple; repeatable")
    e.add_argument("--method", choices=("auto", "dual", "determinant", "brute"))

    parser = _Parser(prog="betamoments", description="Moments of characteristic polynomials of beta ensembles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "predict": "asymptotic log-moment",
        "oracle": "exact log-moment",
        "mc": "Monte Carlo log-moment",
        "error-scan": "exact vs asymptotic along an N ladder",
        "identity": "constant identity table",
        "density": "density from the p = beta/2 moment",
        "verify": "run every cross-check",
    }
    for name in COMMAND_NAMES:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    d = {"command": args.command}
    for key in ("family", "beta", "N", "p", "lam", "n_samples", "seed", "method", "threads",
                "tolerance_profile", "out", "format"):
        v = getattr(args, key)
        if v is not None:
            d[key] = v
    if args.param:
        d["params"] = dict(args.param)
    if args.tol:
        d["tolerance_overrides"] = dict(args.tol)
    if args.triples:
        d["triples"] = args.triples
    if args.command == "error-scan":
        d.setdefault("N", DEFAULT_SCAN_LADDER)
    if args.command == "identity":
        d.setdefault("triples", DEFAULT_TRIPLES)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("configuration must be a JSON object")
        d.update(loaded)
    return ExperimentConfig.from_dict(d)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        table = COMMANDS[cfg.command](cfg)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except (ConfigError, DomainError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    text = emit(table, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "verify":
        failed = [r for r in table.rows if not r["passed"]]
        for r in table.rows:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{status} {r['check']}: residual {r['residual']:.3g} (tolerance {r['tolerance']:.3g})", file=sys.stderr)
        if failed:
            return EXIT_VERIFY
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
