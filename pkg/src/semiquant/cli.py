"""Command-line interface.

    semiquant <spectrum|compare|critical|count|plotdata>
        --potential <coulomb|log|yukawa> [--lambda F]
        [--method <oq|schrodinger>] [--solver <shooting|fd|both>]
        [--policy <integer|ebk>] [--nmax N | --all-bound] [--dim D]
        [--format <csv|json>] [-o PATH] [--config PATH]

Exit status: 0 success, 2 argument errors, 3 convergence failures,
4 cross-check failures.
"""

from __future__ import annotations

import argparse
import sys

from . import harness, numerics, semiclassical, spectral

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_CROSSCHECK = 4

_CONVERGENCE_ERRORS = (
    numerics.ConvergenceError,
    numerics.NoSignChangeError,
    numerics.BracketError,
    numerics.SweepOverflowError,
    semiclassical.NoClassicalRegionError,
    spectral.EigenvalueNotFoundError,
    spectral.WindowTooWideError,
    spectral.GridError,
)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--potential", choices=("coulomb", "log", "yukawa"))
    common.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="yukawa screening ratio R/a")
    common.add_argument("--method", choices=("oq", "schrodinger"), default=None)
    common.add_argument("--solver", choices=("shooting", "fd", "both"), default=None)
    common.add_argument("--policy", choices=("integer", "ebk"), default=None)
    common.add_argument("--nmax", type=int, default=None)
    common.add_argument("--all-bound", action="store_true", default=None)
    common.add_argument("--dim", type=int, default=None)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    common.add_argument("-o", "--output", default=None)
    common.add_argument("--config", default=None, help="key=value defaults file; flags win")
    common.add_argument("--ptheta", type=float, action="append", default=None,
                        help="angular momentum samples for plotdata (repeatable)")

    parser = argparse.ArgumentParser(
        prog="semiquant",
        description="Bound-state spectra: action quantization vs exact radial solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="one-method spectrum table")
    sub.add_parser("compare", parents=[common], help="exact vs shifted-quantized table")
    sub.add_parser("critical", parents=[common], help="yukawa critical values")
    sub.add_parser("count", parents=[common], help="bound states per level")
    sub.add_parser("plotdata", parents=[common], help="effective-potential and spectrum series")
    return parser


_CONFIG_KEYS = {
    "potential": str,
    "lambda": float,
    "method": str,
    "solver": str,
    "policy": str,
    "nmax": int,
    "all_bound": lambda v: v.lower() in ("1", "true", "yes"),
    "dim": int,
    "format": str,
    "output": str,
}

_KEY_TO_ATTR = {"lambda": "lam", "format": "fmt"}


def load_config_file(path: str) -> dict:
    """Parse a key=value defaults file ('#' comments, blank lines allowed)."""
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[_KEY_TO_ATTR.get(key, key)] = _CONFIG_KEYS[key](value)
    return out


def _merged_config(args: argparse.Namespace) -> harness.RunConfig:
    defaults = load_config_file(args.config) if args.config else {}

    def pick(attr, fallback):
        given = getattr(args, attr, None)
        if given is not None:
            return given
        return defaults.get(attr, fallback)

    return harness.RunConfig(
        potential=pick("potential", "log"),
        lam=pick("lam", None),
        method=pick("method", "schrodinger"),
        solver=pick("solver", "both"),
        policy=pick("policy", "ebk"),
        n_max=pick("nmax", None),
        all_bound=bool(pick("all_bound", False)),
        dim=pick("dim", 3),
        fmt=pick("fmt", "csv"),
        out=pick("output", None),
        ptheta=getattr(args, "ptheta", None) or [],
    )


def run_cli(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _merged_config(args)
    except (ValueError, OSError) as exc:
        print(f"semiquant: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "spectrum":
            records = harness.spectrum_records(config)
            text = harness.render_spectrum(records, config.fmt, config.metadata())
            harness.emit(text, config.out)
        elif args.command == "compare":
            result = harness.compare(config)
            text = harness.render_comparison(result.rows, config.fmt, result.metadata)
            harness.emit(text, config.out)
        elif args.command == "critical":
            records = harness.critical_records(config)
            text = harness.render_pairs(records, "name,value", config.fmt, config.metadata())
            harness.emit(text, config.out)
        elif args.command == "count":
            records = harness.count_records(config)
            text = harness.render_pairs(records, "n,count", config.fmt, config.metadata())
            harness.emit(text, config.out)
        else:
            series = harness.plotdata_series(config)
            harness.emit_plotdata(series, config.out)
    except ValueError as exc:
        print(f"semiquant: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except spectral.CrossCheckError as exc:
        print(f"semiquant: cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except _CONVERGENCE_ERRORS as exc:
        print(f"semiquant: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def main() -> None:
    raise SystemExit(run_cli())
