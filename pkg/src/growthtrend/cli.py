"""``growthtrend`` command line: ``r2``, ``select`` and ``curve`` subcommands.

Exit codes: 0 success, 1 usage error, 2 input error, 3 computation failure.
Tables go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .dataio import SampleWindow, read_csv
from .errors import ComputationError, InputError, UnknownId
from .growth import DEFAULT_MAX_RATE, DEFAULT_POINTS, build_grid
from .report import curve_table, describe, r2_table, select_table
from .selection import DEFAULT_P_MAX, DEFAULT_Q_MAX, Criterion, run_battery

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2, 3

log = logging.getLogger("growthtrend")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV with header id,year,value")
    p.add_argument("--start-year", type=int, default=1960)
    p.add_argument("--end-year", type=int, default=2013)
    p.add_argument("--grid-points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--grid-max", type=float, default=DEFAULT_MAX_RATE)
    p.add_argument("--max-p", type=int, default=DEFAULT_P_MAX)
    p.add_argument("--max-q", type=int, default=DEFAULT_Q_MAX)
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--digits", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the battery")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="growthtrend", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("r2", help="R-squared of best exponential vs linear curve fit")
    _add_common(p)
    p = sub.add_parser("select", help="growth rate chosen by AIC, AICc and BIC")
    _add_common(p)
    p = sub.add_parser("curve", help="criterion value at every grid rate for one series")
    _add_common(p)
    p.add_argument("--id", required=True, help="series to trace")
    p.add_argument(
        "--criterion",
        type=Criterion.parse,
        default=Criterion.AIC,
        help="criterion whose chosen orders fill the p and q columns (default AIC)",
    )
    return parser


def _check_args(parser, args) -> None:
    if args.max_p < 0 or args.max_q < 0:
        parser.error("--max-p and --max-q must be non-negative")
    if args.digits < 0:
        parser.error("--digits must be non-negative")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_args(parser, args)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        sample = SampleWindow(args.start_year, args.end_year)
        grid = build_grid(args.grid_points, args.grid_max)
        series = read_csv(args.input)
    except (InputError, OSError) as exc:
        print(f"growthtrend: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.command == "r2":
        table = r2_table(series, grid, sample, args.digits)
    elif args.command == "select":
        selections = run_battery(
            series, grid, [sample], args.max_p, args.max_q, args.seed, n_jobs=args.jobs
        )
        for sel in selections:
            if sel.error:
                print(f"growthtrend: {sel.id}: {sel.error}", file=sys.stderr)
            for cs in sel.per_criterion.values():
                log.info("%s %s", sel.id, describe(cs))
        table = select_table(selections, args.digits)
    else:
        matches = [s for s in series if s.id == args.id]
        try:
            if not matches:
                raise UnknownId(f"no series with id {args.id!r}")
        except UnknownId as exc:
            print(f"growthtrend: input error: {exc.args[0]}", file=sys.stderr)
            return EXIT_INPUT
        (sel,) = run_battery(matches, grid, [sample], args.max_p, args.max_q, args.seed)
        if sel.error:
            print(f"growthtrend: {sel.id}: {sel.error}", file=sys.stderr)
        table = curve_table(sel, args.criterion, args.digits)

    stdout.write(table.render(args.format))
    return table.status


def main(argv=None) -> None:
    try:
        code = run(argv)
    except ComputationError as exc:
        print(f"growthtrend: computation failed: {exc}", file=sys.stderr)
        code = EXIT_COMPUTE
    sys.exit(code)


if __name__ == "__main__":
    main()
