"""Command-line entry point: ``plotview --in f.csv --kind contour
--component rho --out fig.png``."""

from __future__ import annotations

import argparse
import sys

from .fields import COMPONENTS, ParseError
from .render import KINDS, PlotSpec, plot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="plotview",
        description="Render flow-field snapshot files to images (batch).")
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="FILE", help="input snapshot; repeat to overlay")
    ap.add_argument("--kind", choices=KINDS, default="contour")
    ap.add_argument("--component", choices=COMPONENTS, default="rho")
    ap.add_argument("--levels", type=int, default=30,
                    help="number of contour levels (default 30)")
    ap.add_argument("--out", required=True, metavar="PNG",
                    help="output image path")
    ap.add_argument("--dpi", type=int, default=150)
    ap.add_argument("--title", default="")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(inputs=args.inputs, kind=args.kind,
                        component=args.component, levels=args.levels,
                        out=args.out, dpi=args.dpi, title=args.title)
    except ValueError as exc:
        print(f"plotview: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = plot(spec)
    except ParseError as exc:
        print(f"plotview: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, ValueError) as exc:
        print(f"plotview: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
