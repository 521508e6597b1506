"""Command-line front end: depth profiles, tests, simulations, DD-plots.

Exit codes: 0 success, 1 hypothesis rejected (test commands, so shell
scripts can branch on the decision), 2 usage or data error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import datasets
from .depth import DepthKind, as_data_matrix, depth_profile
from .distributions import parse_spec
from .one_sample import GofConfig, run_gof
from .simulate import ExperimentConfig, parse_depth_label, rows_to_csv, run_experiment
from .two_sample import PValueMethod, TwoSampleStat, ddplot_points, two_sample_test
from .uniformity import StatKind

__all__ = ["main", "read_matrix", "write_matrix"]


class DataError(ValueError):
    """Input that cannot be used; mapped to exit code 2."""


def read_matrix(source: str) -> np.ndarray:
    """Read a numeric CSV (header optional) or a bundled dataset reference.

    ``toothgrowth:VC`` / ``toothgrowth:OJ`` resolve to the (length, dose)
    rows of the bundled tooth growth data for that delivery method.
    """
    if source.startswith("toothgrowth:"):
        group = source.split(":", 1)[1]
        data, labels = datasets.tooth_growth()
        if group not in labels:
            raise DataError(f"unknown tooth growth group {group!r} (use VC or OJ)")
        return data[labels == group]
    path = Path(source)
    if not path.exists():
        raise DataError(f"no such file: {source}")
    rows: list[list[float]] = []
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise DataError(f"{source}: empty file")
    start = 0
    try:
        [float(v) for v in lines[0].split(",")]
    except ValueError:
        start = 1  # header row
    width = None
    for ln, line in enumerate(lines[start:], start + 1):
        try:
            row = [float(v) for v in line.split(",")]
        except ValueError as exc:
            raise DataError(f"{source}:{ln}: malformed CSV row ({exc})") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DataError(f"{source}:{ln}: expected {width} columns, got {len(row)}")
        rows.append(row)
    if not rows:
        raise DataError(f"{source}: no data rows")
    return np.array(rows)


def write_matrix(path: str, matrix: np.ndarray, header: str | None = None) -> None:
    """Write values as shortest round-trip decimals so read-back is exact."""
    with open(path, "w") as fh:
        if header:
            fh.write(header + "\n")
        for row in np.atleast_2d(matrix):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _depth_kind(text: str) -> DepthKind:
    try:
        return parse_depth_label(text)
    except ValueError as exc:
        raise DataError(str(exc)) from None


def _cmd_depth(args) -> int:
    points = read_matrix(args.input)
    ref = read_matrix(args.reference)
    depths = depth_profile(points, ref, _depth_kind(args.depth))
    if args.out:
        write_matrix(args.out, depths[:, None], header="depth")
    else:
        print("depth")
        for v in depths:
            print(repr(float(v)))
    return 0


def _cmd_gof(args) -> int:
    data = read_matrix(args.data)
    if ":" in args.null:
        null_source = parse_spec(args.null)
    else:
        null_source = read_matrix(args.null)
    stats = tuple(StatKind(s) for s in args.stats.split(","))
    cfg = GofConfig(
        null_source=null_source,
        depth=_depth_kind(args.depth),
        stats=stats,
        ref_size=args.ref_size,
        level=args.level,
        seed=args.seed,
    )
    report = run_gof(data, cfg)
    print(report.to_text())
    if args.out:
        Path(args.out).write_text("\n".join(report.to_csv_rows()) + "\n")
    return 1 if report.any_reject else 0


def _cmd_twosample(args) -> int:
    x = read_matrix(args.x)
    y = read_matrix(args.y)
    method = {"perm": PValueMethod.PERMUTATION,
              "table": PValueMethod.RANK_TABLE,
              "exact": PValueMethod.EXACT}[args.pvalue]
    stats = tuple(TwoSampleStat(s) for s in args.stats.split(","))
    report = two_sample_test(x, y, _depth_kind(args.depth), stats=stats,
                             method=method, replicates=args.B, seed=args.seed)
    print(report.to_text())
    return 1 if any(report.reject(args.level).values()) else 0


def _cmd_simulate(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise DataError(str(exc)) from None
    cfg = ExperimentConfig.from_json(text, profile=args.profile)
    rows = run_experiment(cfg, workers=args.threads)
    csv_text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def _svg_scatter(points: np.ndarray, groups: np.ndarray) -> str:
    size = 600
    margin = 40
    span = size - 2 * margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" '
        'fill="none" stroke="black"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" '
        f'y2="{margin}" stroke="gray" stroke-dasharray="4"/>',
    ]
    for (dx, dy), group in zip(points, groups):
        cx = margin + dx * span
        cy = size - margin - dy * span
        color = "steelblue" if group == 0 else "firebrick"
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def _cmd_ddplot(args) -> int:
    x = read_matrix(args.x)
    y = read_matrix(args.y)
    points = ddplot_points(x, y, _depth_kind(args.depth))
    groups = np.concatenate([np.zeros(x.shape[0], int), np.ones(y.shape[0], int)])
    if args.format == "svg":
        text = _svg_scatter(points, groups)
    else:
        lines = ["depth_x,depth_y,group"]
        for (dx, dy), g in zip(points, groups):
            lines.append(f"{dx!r},{dy!r},{g}")
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depthgof",
        description="Depth-based multivariate goodness-of-fit and two-sample tests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("depth", help="depth of each input row w.r.t. a reference CSV")
    p.add_argument("input")
    p.add_argument("reference")
    p.add_argument("--depth", default="halfspace")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_depth)

    p = sub.add_parser("gof", help="one-sample goodness-of-fit test")
    p.add_argument("data")
    p.add_argument("--null", required=True,
                   help="distribution spec (family:...) or reference CSV path")
    p.add_argument("--depth", default="halfspace")
    p.add_argument("--stats", default="ks,cvm")
    p.add_argument("--ref-size", type=int, default=5000)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gof)

    p = sub.add_parser("twosample", help="depth-rank two-sample test")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--depth", default="halfspace")
    p.add_argument("--stats", default="ks,cvm,ad")
    p.add_argument("--pvalue", choices=["perm", "table", "exact"], default="perm")
    p.add_argument("--B", type=int, default=10_000)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_twosample)

    p = sub.add_parser("simulate", help="run an experiment config (JSON) to CSV")
    p.add_argument("config")
    p.add_argument("--profile", choices=["desk", "paper"], default="desk")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("ddplot", help="depth-depth plot coordinates")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--depth", default="halfspace")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ddplot)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
