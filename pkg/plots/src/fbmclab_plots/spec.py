"""Figure descriptions and CSV input validation.

A figure is described by a small JSON file::

    {
      "figure": "ccdf",
      "inputs": [
        {"path": "fbmc_srrc_N64_K4_ccdf.csv"},
        {"path": "fbmc_srrc_N64_K4_ccdf_model_all.csv", "label": "closed form"}
      ],
      "axes": {"x": [4, 10], "y": [1e-4, 1]},
      "output": "ccdf_fbmc"
    }

Relative paths (inputs and output alike) resolve against the directory that
contains the spec file, so a spec committed next to its data renders the same
from any working directory.  ``output`` is an image path without extension;
rendering appends ``.png`` and ``.svg``.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import pathlib


class PlotError(Exception):
    """Anything that should abort the run with a one-line diagnostic."""


class FigureKind(enum.Enum):
    FILTERS = "filters"
    CCDF = "ccdf"
    FRAME = "frame"
    PSD = "psd"


# Required CSV header per figure kind; files are rejected on any mismatch.
SCHEMAS: dict[FigureKind, tuple[str, ...]] = {
    FigureKind.FILTERS: ("index", "value"),
    FigureKind.CCDF: ("gamma_db", "prob", "n_windows"),
    FigureKind.FRAME: ("index", "re", "im", "abs"),
    FigureKind.PSD: ("freq_norm", "power_db"),
}


@dataclasses.dataclass(frozen=True)
class InputSpec:
    path: pathlib.Path
    label: str | None = None  # overrides the CSV metadata label when set


@dataclasses.dataclass(frozen=True)
class AxesSpec:
    x: tuple[float, float] | None = None
    y: tuple[float, float] | None = None
    x_log: bool | None = None
    y_log: bool | None = None


@dataclasses.dataclass(frozen=True)
class FigureSpec:
    figure: FigureKind
    inputs: tuple[InputSpec, ...]
    output: pathlib.Path
    axes: AxesSpec = AxesSpec()


@dataclasses.dataclass(frozen=True)
class CurveData:
    """One validated CSV input: metadata label plus named float columns."""

    path: pathlib.Path
    label: str
    columns: dict[str, list[float]]


def _parse_range(raw: object, spec_path: pathlib.Path, key: str) -> tuple[float, float]:
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
    ):
        raise PlotError(f"{spec_path}: axes.{key} must be a two-number array")
    lo, hi = float(raw[0]), float(raw[1])
    if not lo < hi:
        raise PlotError(f"{spec_path}: axes.{key} must be increasing, got [{lo}, {hi}]")
    return lo, hi


def _parse_axes(raw: object, spec_path: pathlib.Path) -> AxesSpec:
    if not isinstance(raw, dict):
        raise PlotError(f"{spec_path}: axes must be an object")
    known = {"x", "y", "x_log", "y_log"}
    extra = set(raw) - known
    if extra:
        raise PlotError(f"{spec_path}: unknown axes key {sorted(extra)[0]!r}")
    kwargs: dict[str, object] = {}
    for key in ("x", "y"):
        if key in raw:
            kwargs[key] = _parse_range(raw[key], spec_path, key)
    for key in ("x_log", "y_log"):
        if key in raw:
            if not isinstance(raw[key], bool):
                raise PlotError(f"{spec_path}: axes.{key} must be true or false")
            kwargs[key] = raw[key]
    return AxesSpec(**kwargs)  # type: ignore[arg-type]


def _parse_input(raw: object, spec_path: pathlib.Path, base: pathlib.Path) -> InputSpec:
    if not isinstance(raw, dict):
        raise PlotError(f"{spec_path}: each input must be an object with a 'path'")
    extra = set(raw) - {"path", "label"}
    if extra:
        raise PlotError(f"{spec_path}: unknown input key {sorted(extra)[0]!r}")
    path = raw.get("path")
    if not isinstance(path, str) or not path:
        raise PlotError(f"{spec_path}: each input needs a non-empty 'path' string")
    label = raw.get("label")
    if label is not None and not isinstance(label, str):
        raise PlotError(f"{spec_path}: input label for {path!r} must be a string")
    return InputSpec(path=base / path, label=label)


def load_spec(path: str | pathlib.Path) -> FigureSpec:
    """Parse and validate a JSON figure description."""
    spec_path = pathlib.Path(path)
    try:
        text = spec_path.read_text()
    except OSError as exc:
        raise PlotError(f"cannot read spec file {spec_path}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlotError(f"{spec_path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise PlotError(f"{spec_path}: top level must be a JSON object")

    extra = set(raw) - {"figure", "inputs", "axes", "output"}
    if extra:
        raise PlotError(f"{spec_path}: unknown key {sorted(extra)[0]!r}")
    for key in ("figure", "inputs", "output"):
        if key not in raw:
            raise PlotError(f"{spec_path}: missing required key {key!r}")

    kind_raw = raw["figure"]
    if not isinstance(kind_raw, str):
        raise PlotError(f"{spec_path}: 'figure' must be a string")
    try:
        kind = FigureKind(kind_raw.lower())
    except ValueError:
        names = ", ".join(k.value for k in FigureKind)
        raise PlotError(f"{spec_path}: unknown figure kind {kind_raw!r} (expected one of: {names})") from None

    inputs_raw = raw["inputs"]
    if not isinstance(inputs_raw, list) or not inputs_raw:
        raise PlotError(f"{spec_path}: 'inputs' must be a non-empty array")
    base = spec_path.resolve().parent
    inputs = tuple(_parse_input(item, spec_path, base) for item in inputs_raw)

    output_raw = raw["output"]
    if not isinstance(output_raw, str) or not output_raw:
        raise PlotError(f"{spec_path}: 'output' must be a non-empty path string")
    if pathlib.PurePath(output_raw).suffix in (".png", ".svg"):
        raise PlotError(f"{spec_path}: 'output' must not carry an image extension; both .png and .svg are written")
    output = base / output_raw

    axes = _parse_axes(raw["axes"], spec_path) if "axes" in raw else AxesSpec()
    return FigureSpec(figure=kind, inputs=inputs, output=output, axes=axes)


def load_curve(path: pathlib.Path, kind: FigureKind) -> CurveData:
    """Read one CSV input, enforcing the schema for the requested figure."""
    try:
        text = pathlib.Path(path).read_text()
    except OSError as exc:
        raise PlotError(f"cannot read input file {path}: {exc.strerror or exc}") from exc

    label = ""
    header: list[str] | None = None
    schema = SCHEMAS[kind]
    columns: dict[str, list[float]] = {name: [] for name in schema}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("label:"):
                label = body[len("label:"):].strip()
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            if tuple(header) != schema:
                raise PlotError(
                    f"{path}: header {','.join(header)!r} does not match the "
                    f"{kind.value} schema {','.join(schema)!r}"
                )
            continue
        cells = line.split(",")
        if len(cells) != len(schema):
            raise PlotError(f"{path}: line {lineno} has {len(cells)} fields, expected {len(schema)}")
        try:
            values = [float(c) for c in cells]
        except ValueError:
            raise PlotError(f"{path}: line {lineno} is not numeric: {line!r}") from None
        for name, value in zip(schema, values):
            columns[name].append(value)

    if header is None:
        raise PlotError(f"{path}: no header row found")
    if not columns[schema[0]]:
        raise PlotError(f"{path}: no data rows found")
    return CurveData(path=pathlib.Path(path), label=label, columns=columns)
