"""Command line entry point: ``chaintrends <subcommand> [--flag value]...``

Exit codes: 0 on success, 1 on usage errors, 2 on data or validation errors.
Data goes to ``--out`` (standard output when omitted); diagnostics go to
standard error.
"""
from __future__ import annotations

import argparse
import glob
import os
import sys
from pathlib import Path

from . import aggregate, report, stats, trends, xcorr
from .errors import DataError
from .ingest import POLICIES, parse_prices, parse_series, parse_trends, format_series
from .series import DailySeries

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _path_list(text):
    items = [p.strip() for p in text.split(",") if p.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of paths")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaintrends", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("aggregate", help="monthly transaction statistics from shard files")
    p.add_argument("--input", required=True, help="glob (or comma-separated globs) of shard CSVs")
    p.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1)
    p.add_argument("--policy", choices=POLICIES, default="skip")
    p.add_argument("--kind", choices=("monthly", "gas-difficulty"), default="monthly")
    p.add_argument("--out")

    p = sub.add_parser("stitch", help="stitch raw trends windows into one daily series")
    p.add_argument("--input", required=True)
    p.add_argument("--min-overlap", type=_positive_int, default=trends.DEFAULT_MIN_OVERLAP)
    p.add_argument("--out")

    p = sub.add_parser("returns", help="percent log returns of a price file")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("series", "histogram"), default="series")
    p.add_argument("--bins", type=_positive_int, default=stats.DEFAULT_BINS)
    p.add_argument("--out")

    p = sub.add_parser("describe", help="summary table of one or more series")
    p.add_argument("--inputs", required=True, type=_path_list)
    p.add_argument("--kind", choices=("levels", "returns"), default="levels")
    p.add_argument("--out")

    p = sub.add_parser("xcorr", help="lagged cross-correlation matrix or curve")
    p.add_argument("--inputs", required=True, type=_path_list)
    p.add_argument("--max-lag", type=_non_negative_int, default=xcorr.DEFAULT_MAX_LAG)
    p.add_argument("--kind", choices=("matrix", "curve"), default="matrix")
    p.add_argument("--out")
    p.add_argument("--lags-out")

    p = sub.add_parser("render", help="SVG line chart or max-correlation heatmap")
    p.add_argument("--inputs", required=True, type=_path_list)
    p.add_argument("--kind", choices=("lines", "overlay", "heatmap"), default="lines")
    p.add_argument("--title", default="")
    p.add_argument("--max-lag", type=_non_negative_int, default=xcorr.DEFAULT_MAX_LAG)
    p.add_argument("--out")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def load_series(path: str) -> DailySeries:
    """Read a price (``date,close``), series (``date,value``) or monthly
    aggregate file; monthly files become a daily step series of tx_count."""
    name = Path(path).stem
    with open(path, "rb") as fh:
        header = fh.readline().decode("utf-8-sig").strip()
        fh.seek(0)
        if header == "date,close":
            return parse_prices(fh, name)
        if header == "date,value":
            return parse_series(fh, name)
        if header == ",".join(aggregate.MONTHLY_HEADER):
            return aggregate.monthly_to_daily(aggregate.parse_monthly(fh.read().decode("utf-8")), name=name)
    raise DataError(f"{path}: unrecognized header {header!r}")


def _expand(pattern: str) -> list[str]:
    paths: list[str] = []
    for part in pattern.split(","):
        part = part.strip()
        matches = sorted(glob.glob(part)) if glob.has_magic(part) else [part]
        paths.extend(matches)
    if not paths:
        raise DataError(f"no shard files match {pattern!r}")
    return paths


def cmd_aggregate(args) -> None:
    paths = _expand(args.input)
    partial, parse_report = aggregate.run_parallel_partial(paths, args.workers, args.policy)
    print(f"{len(paths)} shards: {parse_report.rows_ok} rows ok, {parse_report.rows_rejected} rejected",
          file=sys.stderr)
    for line, reason in parse_report.first_errors:
        print(f"  line {line}: {reason}", file=sys.stderr)
    if args.kind == "monthly":
        _emit(aggregate.format_monthly(aggregate.finalize(partial)), args.out)
    else:
        r = aggregate.gas_difficulty_pearson(partial)
        _emit(f"pairs,pearson\n{len(partial.difficulty_pairs())},{r:.6f}\n", args.out)


def cmd_stitch(args) -> None:
    with open(args.input, "rb") as fh:
        windows = parse_trends(fh)
    stitched = trends.stitch(windows, args.min_overlap, name=Path(args.input).stem)
    _emit(format_series(stitched, 4), args.out)


def cmd_returns(args) -> None:
    returns = stats.log_returns(load_series(args.input))
    if args.kind == "series":
        _emit(format_series(returns.as_daily(), 6), args.out)
        return
    h = stats.histogram(returns.values, args.bins)
    lines = ["bin_left,bin_right,count,density"]
    for i, (c, d) in enumerate(zip(h.counts, h.densities)):
        lines.append(f"{h.bin_edges[i]:.6f},{h.bin_edges[i + 1]:.6f},{c},{d:.8f}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_describe(args) -> None:
    columns = []
    for path in args.inputs:
        s = load_series(path)
        values = stats.log_returns(s).values if args.kind == "returns" else s.values
        columns.append((s.name, stats.describe(values).as_tuple()))
    lines = ["stat," + ",".join(name for name, _ in columns)]
    for k, row in enumerate(stats.SUMMARY_ROWS):
        lines.append(row + "," + ",".join(f"{col[k]:.2f}" for _, col in columns))
    _emit("\n".join(lines) + "\n", args.out)


def cmd_xcorr(args) -> None:
    series = [load_series(p) for p in args.inputs]
    if args.kind == "curve":
        if len(series) != 2:
            raise DataError(f"--kind curve needs exactly 2 inputs, got {len(series)}")
        _emit(xcorr.format_curve(xcorr.cross_correlation(series[0], series[1], args.max_lag)), args.out)
        return
    m = xcorr.xcorr_matrix(series, args.max_lag)
    _emit(xcorr.format_matrix(m, "corr"), args.out)
    if args.lags_out:
        _emit(xcorr.format_matrix(m, "lags"), args.lags_out)


def cmd_render(args) -> None:
    series = [load_series(p) for p in args.inputs]
    if args.kind == "heatmap":
        doc = report.render_heatmap(xcorr.xcorr_matrix(series, args.max_lag), title=args.title)
    else:
        if args.kind == "overlay":
            # secondary series are scaled to the first one's y range
            top = max(series[0].values)
            series = [series[0]] + [trends.rescale_to_max(s, top) for s in series[1:]]
        doc = report.render_lines(series, title=args.title)
    _emit(doc, args.out)


COMMANDS = {
    "aggregate": cmd_aggregate,
    "stitch": cmd_stitch,
    "returns": cmd_returns,
    "describe": cmd_describe,
    "xcorr": cmd_xcorr,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"chaintrends {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
