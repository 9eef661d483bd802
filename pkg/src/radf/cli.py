"""Command-line entry point: ``radf test | datestamp | critvals | simulate``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import report
from .critical import DEFAULT_LEVELS, DEFAULT_REPLICATIONS, DEFAULT_SEED
from .errors import InfeasibleError, InputError, NumericalError, RadfError
from .recursive import DEFAULT_MIN_WINDOW

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4
EXIT_INFEASIBLE = 5

log = logging.getLogger("radf")


def _levels(text: str) -> tuple:
    try:
        levels = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must be comma-separated numbers, got {text!r}") from None
    if not all(0 < lv < 1 for lv in levels):
        raise argparse.ArgumentTypeError("levels must lie strictly between 0 and 1")
    return levels


def _kinds(text: str) -> tuple:
    kinds = tuple(k.strip().upper() for k in text.split(","))
    bad = [k for k in kinds if k not in ("SADF", "GSADF", "BSADF")]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown test kind(s): {', '.join(bad)}")
    return kinds


def _add_common(p: argparse.ArgumentParser, levels=DEFAULT_LEVELS) -> None:
    p.add_argument("--min-window", type=int, default=DEFAULT_MIN_WINDOW, dest="min_window_obs",
                   help="minimum window in observations (default %(default)s)")
    p.add_argument("--lags", type=int, default=0, help="augmentation lags (default %(default)s)")
    p.add_argument("--trend", action="store_true", help="add a linear trend to each regression")
    p.add_argument("--no-constant", dest="constant", action="store_false", help="drop the drift term")
    p.add_argument("--levels", type=_levels, default=levels,
                   help="comma-separated confidence levels (default %s)" % ",".join(f"{lv:g}" for lv in levels))
    p.add_argument("--replications", type=int, default=DEFAULT_REPLICATIONS,
                   help="Monte Carlo replications (default %(default)s)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Monte Carlo seed (default %(default)s)")
    p.add_argument("--cache-dir", type=Path, default=None, dest="cache_root",
                   help="critical-value cache (default $RADF_CACHE_DIR or ~/.cache/radf)")
    p.add_argument("--no-cache", dest="use_cache", action="store_false", help="always recompute critical values")
    p.add_argument("--format", choices=("human", "json", "csv"), default="human", dest="output_format")
    p.add_argument("-o", "--output", type=Path, default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radf", description="Recursive right-tailed unit-root tests for bubbles.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="SADF/GSADF statistics with critical values and verdicts")
    p.add_argument("input", type=Path)
    p.add_argument("-c", "--column", action="append", dest="columns", default=[],
                   help="value column to test; repeat for several (default: first column)")
    p.add_argument("--kinds", type=_kinds, default=report.TEST_KINDS, help="comma-separated, default SADF,GSADF")
    _add_common(p)

    p = sub.add_parser("datestamp", help="date-stamp episodes from the BSADF sequence")
    p.add_argument("input", type=Path)
    p.add_argument("-c", "--column", action="append", dest="columns", default=[])
    p.add_argument("--min-duration", type=int, default=1, dest="min_duration_obs",
                   help="drop episodes shorter than this many months (default %(default)s)")
    p.add_argument("--plot-csv", type=Path, default=None, help="also write period,bsadf,cv.. rows here")
    _add_common(p, levels=report.DATESTAMP_LEVELS)

    p = sub.add_parser("critvals", help="print (and cache) Monte Carlo critical values")
    p.add_argument("input", type=Path, nargs="?", help="take T from this CSV")
    p.add_argument("-T", "--sample-size", type=int, default=None, dest="sample_size")
    p.add_argument("-c", "--column", action="append", dest="columns", default=[])
    p.add_argument("--kinds", type=_kinds, default=report.TEST_KINDS)
    _add_common(p)

    p = sub.add_parser("simulate", help="write a synthetic series described by a JSON spec")
    p.add_argument("spec", type=Path)
    p.add_argument("-o", "--output", type=Path, default=None)
    return parser


def _config(args) -> report.RunConfig:
    fields = report.RunConfig.__dataclass_fields__
    return report.RunConfig(**{k: v for k, v in vars(args).items() if k in fields})


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def run(args) -> None:
    if args.command == "simulate":
        if args.output is None:
            report.cmd_simulate(args.spec, sys.stdout)
        else:
            report.cmd_simulate(args.spec, args.output)
        return

    config = _config(args)
    if args.command == "test":
        rep = report.cmd_test(config)
        render = {"human": report.render_test, "csv": report.render_test_csv}
    elif args.command == "datestamp":
        if len(config.columns) > 1:
            raise InputError("datestamp takes a single column")
        rep = report.cmd_datestamp(config)
        if args.plot_csv is not None:
            args.plot_csv.write_text(report.plot_csv(rep), encoding="utf-8")
        render = {"human": report.render_datestamp, "csv": report.plot_csv}
    else:
        rep = report.cmd_critvals(config)
        render = {"human": report.render_critvals, "csv": report.render_critvals_csv}
    fmt = config.output_format
    _emit(report.to_json(rep) if fmt == "json" else render[fmt](rep), args.output)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        run(args)
    except (InputError, FileNotFoundError) as exc:
        print(f"radf: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"radf: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InfeasibleError as exc:
        print(f"radf: infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (RadfError, OSError) as exc:
        print(f"radf: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
