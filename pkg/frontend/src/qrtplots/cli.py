"""Render qrtlab figures from pipeline CSVs.

Examples:
    qrtplots --figure averages --input dataset_n4.csv --input dataset_n8.csv --output avg.png
    qrtplots --figure pairgrid --input dataset_n4.csv --input dataset_n8.csv --output grid.png
    qrtplots --figure pca --input pca_projections.csv --loadings pca_loadings.csv --output pca.svg
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_IDS, PlotSpec, render
from .io import SchemaError


def build_parser():
    p = argparse.ArgumentParser(prog="qrtplots", description=__doc__)
    p.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p.add_argument("--input", action="append", required=True,
                   help="dataset CSV (averages/pairgrid) or projections CSV (pca); repeatable")
    p.add_argument("--loadings", help="loadings CSV for the pca figure")
    p.add_argument("--output", required=True, help="output image (.png or .svg)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(figure_id=args.figure, inputs=tuple(args.input), output=args.output)
    try:
        render(spec, loadings=args.loadings)
    except (SchemaError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
