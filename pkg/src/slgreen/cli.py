"""Command-line surface: one subcommand per scenario.

Exit codes: 0 success, 2 config error, 3 computation error, 4 I/O error.
Each run writes the delimited table to --out and a PNG figure next to it
(suppress with --no-plot).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SCENARIOS, load_config
from .errors import ComputationError, ConfigError, EngineError
from .plots import render_figure
from .runner import run_scenario
from .tables import write_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slgreen",
        description="Exact 1D Green's functions with delta / delta-prime "
                    "point interactions: kernels, scattering, wave packets, "
                    "regularization scans.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="YAML scenario file")
    common.add_argument("--out", required=True, help="output CSV path")
    common.add_argument("--eta", type=float, default=None,
                        help="override Im(omega)")
    common.add_argument("--threads", type=int, default=1,
                        help="parallelism hint for frequency grids")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--no-plot", action="store_true",
                        help="skip the PNG figure")

    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sub.add_parser(name, parents=[common],
                       help=f"run the {name} scenario")
    return parser


def _fail(exc: Exception, code: int) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        cfg = load_config(args.config)
    except OSError as exc:
        return _fail(exc, EXIT_IO)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)

    if cfg.scenario != args.scenario:
        return _fail(ConfigError(
            f"config declares scenario {cfg.scenario!r} but the "
            f"{args.scenario!r} subcommand was invoked"), EXIT_CONFIG)
    if args.eta is not None:
        cfg.frequency["im"] = args.eta
    try:
        # Re-validate after overrides.
        from .config import _validate
        _validate(cfg)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)

    try:
        table = run_scenario(cfg, threads=args.threads)
    except ComputationError as exc:
        return _fail(exc, EXIT_COMPUTE)
    except EngineError as exc:
        return _fail(exc, EXIT_COMPUTE)
    except OSError as exc:
        # Missing or unreadable tabulated-profile files surface here.
        return _fail(exc, EXIT_IO)

    out = Path(args.out)
    try:
        if out.parent and not out.parent.exists():
            out.parent.mkdir(parents=True, exist_ok=True)
        write_csv(table, out)
        if not args.no_plot:
            render_figure(args.scenario, table, out.with_suffix(".png"))
    except OSError as exc:
        return _fail(exc, EXIT_IO)

    if args.verbose:
        print(f"wrote {len(table.rows)} rows to {out}")
        if not args.no_plot:
            print(f"figure: {out.with_suffix('.png')}")
    if args.scenario == "validate":
        failed = [row[0] for row in table.rows if not row[1]]
        for row in table.rows:
            status = "pass" if row[1] else "FAIL"
            print(f"{status}  {row[0]}  measured={row[2]:.3e} threshold={row[3]:.1e}")
        if failed:
            return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
