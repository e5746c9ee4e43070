"""Command-line front end.

Usage::

    trs simulate [--preset fig1|fig2|fig3|fig4] [--config PATH] [--set k=v ...] [--out DIR]
    trs sweep --axis NAME --values v1,v2,... [same flags]
    trs selftest [--tolerance-scale X]

Exit codes: 0 success, 2 invalid configuration, 3 numerical
non-convergence, 4 I/O failure, 5 selftest failure.
"""
import argparse
import sys

from . import __version__
from .config import PRESETS, resolve
from .errors import InvalidInput, NonConvergence
from .runner import SWEEP_AXES, simulate_to_dir, sweep_to_dir
from .selftest import run_selftest

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4
EXIT_SELFTEST = 5


def _add_run_flags(p):
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", metavar="PATH", help="flat 'key = value' file")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="override one key (repeatable)")
    p.add_argument("--out", default=".", metavar="DIR")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trs", description="Transient linear response under correlated "
        "and factorized initial conditions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one parameter set")
    _add_run_flags(p)

    p = sub.add_parser("sweep", help="run a one-parameter sweep")
    _add_run_flags(p)
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", required=True,
                   help="comma-separated list of values")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $TRS_WORKERS or CPU count)")

    p = sub.add_parser("selftest", help="check the analytic identities")
    p.add_argument("--tolerance-scale", type=float, default=1.0,
                   help="multiply every check tolerance (0 forces failures)")
    return parser


def _parse_values(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidInput(f"values: cannot parse {text!r}") from None


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            ok = run_selftest(args.tolerance_scale)
            return EXIT_OK if ok else EXIT_SELFTEST
        cfg = resolve(args.preset, args.config, args.overrides)
        if args.command == "simulate":
            doc = simulate_to_dir(cfg, args.out)
            print(f"rise_time_1={doc['rise_time_1']} rise_time_2={doc['rise_time_2']} "
                  f"amplitude_ratio_21={doc['amplitude_ratio_21']:.6g} "
                  f"phase_offset_21={doc['phase_offset_21']:.6g}")
        else:
            points = sweep_to_dir(cfg, args.axis, _parse_values(args.values),
                                  args.out, args.workers)
            failed = sum("error" in p for p in points)
            print(f"{len(points)} points, {failed} failed")
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
