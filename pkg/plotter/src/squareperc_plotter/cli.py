"""squareperc-plot: render simulation outputs to figures.

Subcommands: `phase --in sweep.csv --out fig.svg [--lambda-c L]` and
`progeny --dwass d.json --sim s.json --out fig.svg`. Exit codes: 0 on
success, 2 for argument or schema errors (the message names missing
columns or keys), 1 for unreadable files.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .render import LAMBDA_C_DEFAULT, PlotSpec, SchemaError, render_phase, render_progeny

__all__ = ["main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squareperc-plot",
        description="Render squareperc sweep CSV and branching JSON into figures.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("phase", help="phase-transition curves from a sweep CSV")
    p.add_argument("--in", dest="input", required=True, help="sweep CSV path")
    p.add_argument("--out", required=True, help="output .svg or .png path")
    p.add_argument("--lambda-c", dest="lambda_c", type=float, default=LAMBDA_C_DEFAULT)

    p = sub.add_parser("progeny", help="total-progeny histogram with exact markers")
    p.add_argument("--dwass", required=True, help="JSON from `branching dwass`")
    p.add_argument("--sim", required=True, help="JSON from `branching sim`")
    p.add_argument("--out", required=True, help="output .svg or .png path")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "phase":
            spec = PlotSpec(
                input_path=args.input, output_path=args.out,
                kind="phase", lambda_c=args.lambda_c,
            )
            info = render_phase(spec)
        else:
            spec = PlotSpec(
                input_path=args.dwass, output_path=args.out,
                kind="progeny", sim_path=args.sim,
            )
            info = render_progeny(spec)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {info['path']} ({info['bytes']} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
