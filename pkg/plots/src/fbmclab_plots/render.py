"""Build matplotlib figures from validated CSV curves and write PNG + SVG."""

from __future__ import annotations

import pathlib

import matplotlib

matplotlib.use("Agg")
# Stable ids inside the SVG output so identical specs render identical bytes.
matplotlib.rcParams["svg.hashsalt"] = "fbmclab-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .spec import AxesSpec, CurveData, FigureKind, FigureSpec, load_curve

_PNG_DPI = 150

# Axis fallbacks applied when the spec leaves a field unset.
_DEFAULT_AXES: dict[FigureKind, AxesSpec] = {
    FigureKind.FILTERS: AxesSpec(),
    FigureKind.CCDF: AxesSpec(x=(4.0, 10.0), y=(1e-4, 1.0), y_log=True),
    FigureKind.FRAME: AxesSpec(),
    FigureKind.PSD: AxesSpec(),
}


def _effective_axes(spec: FigureSpec) -> AxesSpec:
    base = _DEFAULT_AXES[spec.figure]
    given = spec.axes
    return AxesSpec(
        x=given.x if given.x is not None else base.x,
        y=given.y if given.y is not None else base.y,
        x_log=given.x_log if given.x_log is not None else base.x_log,
        y_log=given.y_log if given.y_log is not None else base.y_log,
    )


def _apply_axes(ax: plt.Axes, axes: AxesSpec) -> None:
    if axes.x_log:
        ax.set_xscale("log")
    if axes.y_log:
        ax.set_yscale("log")
    if axes.x is not None:
        ax.set_xlim(axes.x)
    if axes.y is not None:
        ax.set_ylim(axes.y)


def _labels(spec: FigureSpec, curves: list[CurveData]) -> list[str]:
    # Spec override wins; otherwise the label travels inside the CSV metadata.
    return [
        inp.label if inp.label is not None else curve.label
        for inp, curve in zip(spec.inputs, curves)
    ]


def _plot_overlaid(ax: plt.Axes, curves: list[CurveData], labels: list[str], x_col: str, y_col: str) -> None:
    for curve, label in zip(curves, labels):
        ax.plot(curve.columns[x_col], curve.columns[y_col], label=label or None)
    if any(labels):
        ax.legend()


def build_figure(spec: FigureSpec, curves: list[CurveData]) -> plt.Figure:
    """Assemble the figure for ``spec`` from already-validated curves."""
    labels = _labels(spec, curves)
    axes_spec = _effective_axes(spec)

    if spec.figure is FigureKind.FRAME:
        n = len(curves)
        fig, axs = plt.subplots(1, n, figsize=(4.2 * n, 3.4), sharey=True, squeeze=False)
        for ax, curve, label in zip(axs[0], curves, labels):
            ax.plot(curve.columns["index"], curve.columns["abs"], linewidth=0.7)
            if label:
                ax.set_title(label)
            ax.set_xlabel("sample index")
            _apply_axes(ax, axes_spec)
        axs[0][0].set_ylabel("envelope")
        fig.tight_layout()
        return fig

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    if spec.figure is FigureKind.FILTERS:
        _plot_overlaid(ax, curves, labels, "index", "value")
        ax.set_xlabel("tap index")
        ax.set_ylabel("amplitude")
    elif spec.figure is FigureKind.CCDF:
        _plot_overlaid(ax, curves, labels, "gamma_db", "prob")
        ax.set_xlabel("threshold (dB)")
        ax.set_ylabel("probability of exceeding the threshold")
    else:  # PSD
        _plot_overlaid(ax, curves, labels, "freq_norm", "power_db")
        ax.set_xlabel("normalized frequency (cycles/sample)")
        ax.set_ylabel("power spectral density (dB)")
    ax.grid(True, which="both", alpha=0.3)
    _apply_axes(ax, axes_spec)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> list[pathlib.Path]:
    """Validate every input, then write ``<output>.png`` and ``<output>.svg``.

    All inputs are read and checked before any output file is touched, so a
    failing run leaves nothing behind.
    """
    curves = [load_curve(inp.path, spec.figure) for inp in spec.inputs]
    fig = build_figure(spec, curves)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    png = spec.output.parent / (spec.output.name + ".png")
    svg = spec.output.parent / (spec.output.name + ".svg")
    try:
        # Strip the writer version and timestamp so reruns are byte-identical.
        fig.savefig(png, dpi=_PNG_DPI, metadata={"Software": None})
        fig.savefig(svg, metadata={"Date": None})
    finally:
        plt.close(fig)
    return [png, svg]
