"""Render figures from fbmclab CSV files.

The package consumes only the CSV files written by the ``fbmclab`` command
line tool -- it never imports the synthesis code.  Each invocation reads one
JSON figure description and writes one figure as both PNG and SVG.
"""

from .spec import AxesSpec, CurveData, FigureKind, FigureSpec, InputSpec, PlotError, load_curve, load_spec
from .render import build_figure, render

__all__ = [
    "AxesSpec",
    "CurveData",
    "FigureKind",
    "FigureSpec",
    "InputSpec",
    "PlotError",
    "build_figure",
    "load_curve",
    "load_spec",
    "render",
]
