"""Command-line front end: ``plots <kind> --in artifact --out figure.png``."""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render a figure from a simulation/probe artifact.")
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("--in", dest="input_path", required=True,
                        metavar="PATH", help="input CSV (or JSON for "
                        "region-2d)")
    parser.add_argument("--out", dest="output_path", required=True,
                        metavar="PATH", help="output PNG path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        target = render(PlotSpec(kind=args.kind, input_path=args.input_path,
                                 output_path=args.output_path))
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {args.kind} figure to {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
