"""berplot: BER figures and gain tables from prodec sweep CSVs."""

from __future__ import annotations

import argparse
import sys

from .curves import gain_table, load_curve
from .figure import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="berplot",
        description="Render BER-vs-SNR curves from prodec sweep CSVs and "
                    "report dB gains at a chosen BER")
    parser.add_argument("csvs", nargs="+", help="sweep CSV files")
    parser.add_argument("--labels", default=None,
                        help="comma-separated curve labels (default: file stems)")
    parser.add_argument("--out", default=None, help="output image path")
    parser.add_argument("--title", default=None)
    parser.add_argument("--gain-at", type=float, default=None, metavar="BER",
                        help="print the pairwise dB gain table at this BER")
    parser.add_argument("--limits", default=None, metavar="CODE",
                        help="draw HD/SD limit markers for a fixture "
                             "(e.g. C2 or C2:scc)")
    try:
        args = parser.parse_args(argv)
        labels = args.labels.split(",") if args.labels else [None] * len(args.csvs)
        if len(labels) != len(args.csvs):
            raise ValueError("need as many labels as CSV files")
        curves = [load_curve(p, lab) for p, lab in zip(args.csvs, labels)]
        if args.out:
            render(curves, args.out, title=args.title, limits=args.limits)
            print(f"wrote {args.out}")
        if args.gain_at is not None:
            print(gain_table(curves, args.gain_at))
        if not args.out and args.gain_at is None:
            raise ValueError("nothing to do: pass --out and/or --gain-at")
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
