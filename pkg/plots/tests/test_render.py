"""Figure assembly and file output."""

import pathlib

import pytest

from fbmclab_plots import build_figure, load_curve, load_spec, render
from fbmclab_plots.spec import FigureKind, PlotError

from conftest import DATA, fixture_label


def _spec(make_spec, tmp_path, figure, names, output="fig", **extra):
    payload = {
        "figure": figure,
        "inputs": [{"path": str(DATA / n)} for n in names],
        "output": str(tmp_path / output),
        **extra,
    }
    return load_spec(make_spec(payload))


def _curves(spec):
    return [load_curve(i.path, spec.figure) for i in spec.inputs]


@pytest.mark.parametrize(
    "figure, names",
    [
        ("filters", ["fbmc_srrc_N64_K4_filter.csv", "fbmc_phydyas_N64_K4_filter.csv"]),
        ("ccdf", ["fbmc_srrc_N16_K4_ccdf.csv", "fbmc_srrc_N16_K4_ccdf_model_all.csv"]),
        ("frame", ["fbmc_srrc_N64_K4_frame.csv"]),
        ("psd", ["fbmc_srrc_N64_K4_psd_full.csv", "fbmc_phydyas_N64_K4_psd_full.csv"]),
    ],
    ids=["filters", "ccdf", "frame", "psd"],
)
def test_every_kind_writes_png_and_svg(make_spec, tmp_path, figure, names):
    spec = _spec(make_spec, tmp_path, figure, names)
    written = render(spec)
    assert [p.name for p in written] == ["fig.png", "fig.svg"]
    png, svg = written
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert svg.read_bytes().lstrip()[:5] == b"<?xml"
    assert png.stat().st_size > 1000 and svg.stat().st_size > 1000


def test_output_directory_is_created(make_spec, tmp_path):
    spec = _spec(make_spec, tmp_path, "filters", ["fbmc_srrc_N64_K4_filter.csv"], output="a/b/fig")
    for path in render(spec):
        assert path.exists() and path.parent == tmp_path / "a" / "b"


def test_frame_inputs_become_side_by_side_panels(make_spec, tmp_path):
    two = _spec(make_spec, tmp_path, "frame", ["fbmc_srrc_N64_K4_frame.csv", "fbmc_phydyas_N64_K4_frame.csv"])
    fig = build_figure(two, _curves(two))
    assert len(fig.axes) == 2
    titles = [ax.get_title() for ax in fig.axes]
    assert titles == [fixture_label("fbmc_srrc_N64_K4_frame.csv"), fixture_label("fbmc_phydyas_N64_K4_frame.csv")]
    # panels share the envelope scale so the two filters are comparable
    assert fig.axes[0].get_ylim() == fig.axes[1].get_ylim()

    one = _spec(make_spec, tmp_path, "frame", ["fbmc_srrc_N64_K4_frame.csv"])
    assert len(build_figure(one, _curves(one)).axes) == 1


def test_ccdf_defaults_log_probability_axis(make_spec, tmp_path):
    spec = _spec(make_spec, tmp_path, "ccdf", ["fbmc_srrc_N16_K4_ccdf.csv"])
    ax = build_figure(spec, _curves(spec)).axes[0]
    assert ax.get_yscale() == "log"
    assert ax.get_xlim() == (4.0, 10.0)
    assert ax.get_ylim() == (1e-4, 1.0)


def test_axes_overrides_beat_the_defaults(make_spec, tmp_path):
    spec = _spec(
        make_spec,
        tmp_path,
        "ccdf",
        ["fbmc_srrc_N16_K4_ccdf.csv"],
        axes={"x": [2, 12], "y": [1e-3, 1], "y_log": False},
    )
    ax = build_figure(spec, _curves(spec)).axes[0]
    assert ax.get_yscale() == "linear"
    assert ax.get_xlim() == (2.0, 12.0)
    assert ax.get_ylim() == (1e-3, 1.0)


def test_psd_axes_are_linear_and_unconstrained_by_default(make_spec, tmp_path):
    spec = _spec(make_spec, tmp_path, "psd", ["fbmc_srrc_N64_K4_psd_full.csv"])
    ax = build_figure(spec, _curves(spec)).axes[0]
    assert ax.get_xscale() == "linear" and ax.get_yscale() == "linear"


def test_legend_text_comes_from_csv_metadata(make_spec, tmp_path):
    names = ["fbmc_srrc_N16_K4_ccdf.csv", "fbmc_srrc_N16_K4_ccdf_model_all.csv"]
    spec = _spec(make_spec, tmp_path, "ccdf", names)
    legend = build_figure(spec, _curves(spec)).axes[0].get_legend()
    assert [t.get_text() for t in legend.get_texts()] == [fixture_label(n) for n in names]


def test_spec_label_override_wins(make_spec, tmp_path):
    payload = {
        "figure": "ccdf",
        "inputs": [
            {"path": str(DATA / "fbmc_srrc_N16_K4_ccdf.csv")},
            {"path": str(DATA / "fbmc_srrc_N16_K4_ccdf_model_all.csv"), "label": "closed form"},
        ],
        "output": str(tmp_path / "fig"),
    }
    spec = load_spec(make_spec(payload))
    legend = build_figure(spec, _curves(spec)).axes[0].get_legend()
    texts = [t.get_text() for t in legend.get_texts()]
    assert texts[0] == fixture_label("fbmc_srrc_N16_K4_ccdf.csv")
    assert texts[1] == "closed form"


def test_unlabeled_curves_get_no_legend(make_spec, tmp_path):
    raw = tmp_path / "bare.csv"
    raw.write_text("freq_norm,power_db\n-0.5,-40\n0.0,0\n0.4,-40\n")
    spec = load_spec(make_spec({"figure": "psd", "inputs": [{"path": str(raw)}], "output": str(tmp_path / "f")}))
    assert build_figure(spec, _curves(spec)).axes[0].get_legend() is None


def test_rendering_is_deterministic(make_spec, tmp_path):
    names = ["fbmc_srrc_N64_K4_psd_full.csv", "fbmc_phydyas_N64_K4_psd_full.csv"]
    first = render(_spec(make_spec, tmp_path, "psd", names, output="run1/fig"))
    second = render(_spec(make_spec, tmp_path, "psd", names, output="run2/fig"))
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()


def test_failed_validation_writes_no_files(make_spec, tmp_path):
    out = tmp_path / "out"
    payload = {
        "figure": "psd",
        "inputs": [
            {"path": str(DATA / "fbmc_srrc_N64_K4_psd_full.csv")},
            {"path": str(tmp_path / "missing.csv")},
        ],
        "output": str(out / "fig"),
    }
    with pytest.raises(PlotError, match="missing.csv"):
        render(load_spec(make_spec(payload)))
    assert not out.exists()


def test_frame_uses_the_envelope_column(make_spec, tmp_path):
    spec = _spec(make_spec, tmp_path, "frame", ["fbmc_srrc_N64_K4_frame.csv"])
    curves = _curves(spec)
    line = build_figure(spec, curves).axes[0].lines[0]
    assert list(line.get_ydata()) == curves[0].columns["abs"]
    assert min(line.get_ydata()) >= 0.0


def test_render_accepts_every_kind_enum_member():
    assert {k.value for k in FigureKind} == {"filters", "ccdf", "frame", "psd"}
