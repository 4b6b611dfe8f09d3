"""Command-line figure renderer.

    chainplots plot --figure fig1 --inputs run1/timeseries.csv ... --out fig.png

Exit codes: 0 success, 2 bad figure/columns, 4 unreadable input.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_IDS, make_spec, render
from .io import MissingColumn


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chainplots")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one figure from CSV inputs")
    p.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p.add_argument("--inputs", required=True, nargs="+", help="input CSV paths")
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--labels", nargs="*", default=None, help="legend labels")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = make_spec(args.figure, args.inputs, args.labels)
        out = render(spec, args.out)
    except (MissingColumn, ValueError) as exc:
        print(f"figure error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
