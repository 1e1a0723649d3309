"""Command line entry point: render one figure from one JSON spec file."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import PlotError, load_spec


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fbmclab-plot",
        description="Render one figure (PNG + SVG) from a JSON figure description.",
    )
    parser.add_argument("spec", help="path to the JSON figure description")
    args = parser.parse_args(argv)

    try:
        written = render(load_spec(args.spec))
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
