"""Exit codes and diagnostics of the fbmclab-plot entry point."""

import subprocess
import sys

from fbmclab_plots.cli import main

from conftest import DATA


def _payload(tmp_path, **overrides):
    base = {
        "figure": "filters",
        "inputs": [{"path": str(DATA / "fbmc_srrc_N64_K4_filter.csv")}],
        "output": str(tmp_path / "fig"),
    }
    base.update(overrides)
    return base


def test_success_prints_both_written_paths(make_spec, tmp_path, capsys):
    assert main([str(make_spec(_payload(tmp_path)))]) == 0
    out = capsys.readouterr()
    lines = out.out.splitlines()
    assert [line.rsplit(".", 1)[1] for line in lines] == ["png", "svg"]
    assert out.err == ""
    assert (tmp_path / "fig.png").exists() and (tmp_path / "fig.svg").exists()


def test_missing_input_fails_without_writing(make_spec, tmp_path, capsys):
    bad = tmp_path / "ghost.csv"
    spec = make_spec(_payload(tmp_path, inputs=[{"path": str(bad)}]))
    assert main([str(spec)]) == 2
    out = capsys.readouterr()
    assert out.out == ""
    assert out.err.startswith("error: ")
    assert str(bad) in out.err
    assert not (tmp_path / "fig.png").exists() and not (tmp_path / "fig.svg").exists()


def test_empty_input_list_is_rejected(make_spec, tmp_path, capsys):
    spec = make_spec(_payload(tmp_path, inputs=[]))
    assert main([str(spec)]) == 2
    assert "non-empty array" in capsys.readouterr().err
    assert not (tmp_path / "fig.png").exists()


def test_schema_mismatch_is_a_clean_failure(make_spec, tmp_path, capsys):
    # frame dump handed to a psd figure: right file, wrong metric
    path = DATA / "fbmc_srrc_N64_K4_frame.csv"
    spec = make_spec(_payload(tmp_path, figure="psd", inputs=[{"path": str(path)}]))
    assert main([str(spec)]) == 2
    err = capsys.readouterr().err
    assert str(path) in err and "psd schema" in err


def test_unreadable_spec_file(tmp_path, capsys):
    assert main([str(tmp_path / "absent.json")]) == 2
    assert "absent.json" in capsys.readouterr().err


def test_module_entry_point_runs_standalone(make_spec, tmp_path):
    spec = make_spec(_payload(tmp_path))
    proc = subprocess.run(
        [sys.executable, "-m", "fbmclab_plots.cli", str(spec)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.splitlines()[-1].endswith("fig.svg")
