"""Command line entry point: plot --spec spec.toml"""

import argparse
import sys

from .render import render
from .spec import PlotSpecError, load_spec


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="plot", description="Render a figure from a TOML plot spec.")
    ap.add_argument("--spec", required=True, help="path to the spec file")
    args = ap.parse_args(argv)
    try:
        out = render(load_spec(args.spec))
    except PlotSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
