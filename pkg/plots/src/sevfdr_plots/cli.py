"""Console entry points: plot-study1 <csv> <out>, plot-study2 <csv> <out-prefix>."""

from __future__ import annotations

import argparse
import sys

from .render import SchemaError, plot_study1, plot_study2


def main_study1(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-study1", description="Render the ranking-comparison figure")
    parser.add_argument("csv", help="study1 CSV (R,beta_star_glfdr,beta_star_lfdr)")
    parser.add_argument("out", help="output image path (default format SVG)")
    parser.add_argument("--png", action="store_true", help="write PNG instead of SVG")
    args = parser.parse_args(argv)
    try:
        out = plot_study1(args.csv, args.out, fmt="png" if args.png else None)
    except (SchemaError, OSError) as exc:
        print(f"plot-study1: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


def main_study2(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-study2", description="Render the three oracle-comparison panels")
    parser.add_argument("csv", help="study2 CSV (pi11,procedure,...)")
    parser.add_argument("prefix", help="output path prefix for the three panels")
    parser.add_argument("--png", action="store_true", help="write PNG instead of SVG")
    args = parser.parse_args(argv)
    try:
        outputs = plot_study2(args.csv, args.prefix, fmt="png" if args.png else "svg")
    except (SchemaError, OSError) as exc:
        print(f"plot-study2: {exc}", file=sys.stderr)
        return 2
    for out in outputs:
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main_study1())
