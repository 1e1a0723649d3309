"""Config-driven measurement campaigns and the command line surface.

Every run resolves its configuration (defaults filled), writes the
resolved key=value file next to its outputs, and derives all randomness
from (seed, frame_index) pairs, so reruns and parallel runs produce
byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .filters import FilterKind, PrototypeFilter, design_phydyas, design_rect, design_srrc
from .mapping import QamGrid, oqam_stagger, random_qam_grid
from .metrics import (
    ParityMask,
    PsdCurve,
    analytic_alpha,
    analytic_ccdf,
    default_gamma_grid,
    empirical_ccdf,
    intrinsic_interference,
    papr_windows,
    truncate_tails,
    _welch_linear,
)
from .modem import BasebandSignal, cp_ofdm_modulate, synthesize_ppn
from .polarization import Structure, synthesize_dp


class Waveform(enum.Enum):
    CP_OFDM = "cp_ofdm"
    FBMC = "fbmc"
    DP_S1 = "dp_s1"
    DP_S2 = "dp_s2"
    DP_S3 = "dp_s3"


_STRUCTURES = {
    Waveform.DP_S1: Structure.S1_TPDM,
    Waveform.DP_S2: Structure.S2_FPDM,
    Waveform.DP_S3: Structure.S3_TFPDM,
}

_PRETTY = {
    Waveform.CP_OFDM: "CP-OFDM",
    Waveform.FBMC: "FBMC",
    Waveform.DP_S1: "DP-S1",
    Waveform.DP_S2: "DP-S2",
    Waveform.DP_S3: "DP-S3",
}


@dataclass
class ScenarioConfig:
    waveform: Waveform = Waveform.FBMC
    filter_kind: FilterKind = FilterKind.SRRC
    N: int = 64
    K: int = 4
    rolloff: float | None = None
    symbols_per_frame: int = 32
    n_frames: int = 1000
    qam_order: int = 16
    seed: int = 0
    cp_len: int | None = None
    window_len: int = 0
    truncate: bool | None = None
    oversample: int = 1
    output_dir: str = "."
    jobs: int = 1
    measure_v: bool = False
    zero_grid: bool = False

    def resolve(self) -> "ScenarioConfig":
        """Fill waveform-dependent defaults and validate ranges."""
        cfg = dataclasses.replace(self)
        if cfg.N < 2 or cfg.N % 2:
            raise ValueError(f"N must be a positive even integer, got {cfg.N}")
        if cfg.K < 1:
            raise ValueError(f"K must be >= 1, got {cfg.K}")
        if cfg.waveform is Waveform.CP_OFDM:
            cfg.filter_kind = FilterKind.RECT
            cfg.K = 1
            cfg.rolloff = None
            if cfg.cp_len is None:
                cfg.cp_len = cfg.N // 4
        else:
            cfg.cp_len = 0
            cfg.window_len = 0
            if cfg.filter_kind is FilterKind.RECT:
                cfg.K = 1
            if cfg.filter_kind is FilterKind.SRRC and cfg.rolloff is None:
                cfg.rolloff = 2.0 / cfg.K
            if cfg.filter_kind is not FilterKind.SRRC:
                cfg.rolloff = None
        if cfg.rolloff is not None and not 0.0 < cfg.rolloff <= 1.0:
            raise ValueError(f"rolloff must be in (0, 1], got {cfg.rolloff}")
        if cfg.symbols_per_frame < 1:
            raise ValueError("symbols_per_frame must be >= 1")
        if cfg.n_frames < 1:
            raise ValueError("n_frames must be >= 1")
        if cfg.seed < 0:
            raise ValueError("seed must be non-negative")
        if cfg.oversample < 1:
            raise ValueError("oversample must be >= 1")
        if cfg.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if cfg.waveform is Waveform.CP_OFDM:
            if not 0 <= cfg.cp_len < cfg.N:
                raise ValueError(f"cp_len must lie in [0, N), got {cfg.cp_len}")
            if not 0 <= cfg.window_len <= cfg.cp_len:
                raise ValueError(f"window_len must lie in [0, cp_len], got {cfg.window_len}")
        return cfg

    @property
    def structure(self) -> Structure | None:
        return _STRUCTURES.get(self.waveform)

    def stem(self) -> str:
        return f"{self.waveform.value}_{self.filter_kind.value}_N{self.N}_K{self.K}"

    def label(self, suffix: str = "") -> str:
        parts = [_PRETTY[self.waveform]]
        if self.waveform is not Waveform.CP_OFDM:
            f = self.filter_kind.value
            if self.rolloff is not None:
                f += f" a={self.rolloff:g}"
            parts.append(f"{f} K={self.K}")
        parts.append(f"N={self.N}")
        if suffix:
            parts.append(suffix)
        return " ".join(parts)


# -- config file round trip -------------------------------------------------

_CONFIG_KEYS = {
    "waveform": ("waveform", lambda s: Waveform(s)),
    "filter": ("filter_kind", lambda s: FilterKind(s)),
    "N": ("N", int),
    "K": ("K", int),
    "rolloff": ("rolloff", lambda s: None if s == "none" else float(s)),
    "symbols_per_frame": ("symbols_per_frame", int),
    "n_frames": ("n_frames", int),
    "qam_order": ("qam_order", int),
    "seed": ("seed", int),
    "cp_len": ("cp_len", lambda s: None if s == "none" else int(s)),
    "window_len": ("window_len", int),
    "truncate": ("truncate", lambda s: None if s == "none" else s == "true"),
    "oversample": ("oversample", int),
    "output_dir": ("output_dir", str),
    "jobs": ("jobs", int),
    "measure_v": ("measure_v", lambda s: s == "true"),
    "zero_grid": ("zero_grid", lambda s: s == "true"),
}


def _fmt_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def load_config(path: str | Path, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse a flat key=value file into a ScenarioConfig."""
    cfg = base or ScenarioConfig()
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        field, conv = _CONFIG_KEYS[key]
        try:
            setattr(cfg, field, conv(value.strip()))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return cfg


def write_config(path: Path, cfg: ScenarioConfig) -> None:
    lines = []
    for key, (field, _) in _CONFIG_KEYS.items():
        lines.append(f"{key}={_fmt_value(getattr(cfg, field))}")
    path.write_text("\n".join(lines) + "\n")


# -- frame generation -------------------------------------------------------

def frame_qam_grid(cfg: ScenarioConfig, frame_index: int) -> QamGrid:
    """Deterministic per-frame symbol source, independent of n_frames."""
    if cfg.zero_grid:
        d = np.zeros((cfg.N, cfg.symbols_per_frame), dtype=complex)
        return QamGrid(d, cfg.qam_order)
    return random_qam_grid(cfg.N, cfg.symbols_per_frame, cfg.qam_order, (cfg.seed, frame_index))


def build_prototype(cfg: ScenarioConfig) -> PrototypeFilter:
    """Prototype at the synthesis rate (N * oversample samples per period)."""
    n_samp = cfg.N * cfg.oversample
    if cfg.filter_kind is FilterKind.SRRC:
        return design_srrc(n_samp, cfg.K, cfg.rolloff if cfg.rolloff is not None else 2.0 / cfg.K)
    if cfg.filter_kind is FilterKind.PHYDYAS:
        return design_phydyas(n_samp, cfg.K)
    return design_rect(n_samp)


def synthesize_frame(cfg: ScenarioConfig, pf: PrototypeFilter | None, frame_index: int):
    """Return (h_branch, v_branch or None) for one frame."""
    grid = frame_qam_grid(cfg, frame_index)
    if cfg.waveform is Waveform.CP_OFDM:
        x = cp_ofdm_modulate(
            grid, cfg.cp_len * cfg.oversample, cfg.window_len * cfg.oversample, cfg.oversample
        )
        return x, None
    a = oqam_stagger(grid)
    if cfg.structure is None:
        return synthesize_ppn(a, pf, cfg.oversample), None
    frame = synthesize_dp(a, pf, cfg.structure, cfg.oversample)
    return frame.h_signal, frame.v_signal


def _map_frames(cfg: ScenarioConfig, worker):
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
            return list(ex.map(worker, range(cfg.n_frames)))
    return [worker(i) for i in range(cfg.n_frames)]


def papr_frame_pools(cfg: ScenarioConfig):
    """Per-frame PAPR window arrays for the H branch (and V if asked).

    Frames are seeded individually and merged in frame order, so the
    result does not depend on the worker count.
    """
    cfg = cfg.resolve()
    pf = None if cfg.waveform is Waveform.CP_OFDM else build_prototype(cfg)
    win = cfg.N * cfg.oversample

    def worker(i):
        xh, xv = synthesize_frame(cfg, pf, i)
        ph = papr_windows(xh, win)
        pv = papr_windows(xv, win) if (xv is not None and cfg.measure_v) else None
        return ph, pv

    results = _map_frames(cfg, worker)
    pools_h = [r[0] for r in results]
    pools_v = [r[1] for r in results] if cfg.measure_v and cfg.structure is not None else None
    return pools_h, pools_v


# -- CSV output -------------------------------------------------------------

def _fmt_float(v: float) -> str:
    return f"{v:.9g}"


def _write_rows(path: Path, label: str, header: str, rows, extra_meta: list[str] | None = None):
    lines = [f"# label: {label}"]
    lines.extend(extra_meta or [])
    lines.append(header)
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")


def write_ccdf_csv(path: Path, curve) -> None:
    rows = [
        f"{_fmt_float(g)},{_fmt_float(p)},{curve.n_samples}"
        for g, p in zip(curve.gamma_db, curve.prob)
    ]
    _write_rows(path, curve.label, "gamma_db,prob,n_windows", rows)


def write_psd_csv(path: Path, curve) -> None:
    rows = [f"{_fmt_float(f)},{_fmt_float(p)}" for f, p in zip(curve.freq, curve.power_db)]
    _write_rows(path, curve.label, "freq_norm,power_db", rows)


def write_frame_csv(path: Path, label: str, x: BasebandSignal) -> None:
    rows = [
        f"{i},{_fmt_float(s.real)},{_fmt_float(s.imag)},{_fmt_float(abs(s))}"
        for i, s in enumerate(x.samples)
    ]
    _write_rows(path, label, "index,re,im,abs", rows)


def write_filter_csv(path: Path, label: str, pf: PrototypeFilter) -> None:
    rows = [f"{i},{_fmt_float(v)}" for i, v in enumerate(pf.coeffs)]
    _write_rows(path, label, "index,value", rows)


def write_interference_csv(path: Path, table) -> None:
    rows = [f"{dn},{dm},{_fmt_float(mag)}" for dn, dm, mag in table.rows]
    meta = [f"# pilot_imag: {_fmt_float(table.pilot_imag)}"]
    _write_rows(path, table.label, "dn,dm,magnitude", rows, meta)


# -- runners ----------------------------------------------------------------

def _outdir(cfg: ScenarioConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_ccdf(cfg: ScenarioConfig) -> list[Path]:
    """Empirical CCDF campaign plus the applicable closed-form curves."""
    cfg = cfg.resolve()
    out = _outdir(cfg)
    stem = cfg.stem()
    grid_db = default_gamma_grid()
    pools_h, pools_v = papr_frame_pools(cfg)

    written = []
    curve = empirical_ccdf(np.concatenate(pools_h), grid_db, cfg.label("empirical"))
    path = out / f"{stem}_ccdf.csv"
    write_ccdf_csv(path, curve)
    written.append(path)

    if pools_v is not None:
        curve_v = empirical_ccdf(np.concatenate(pools_v), grid_db, cfg.label("empirical V"))
        path = out / f"{stem}_ccdf_v.csv"
        write_ccdf_csv(path, curve_v)
        written.append(path)

    if cfg.waveform is not Waveform.CP_OFDM:
        base_pf = dataclasses.replace(cfg, oversample=1)
        model_pf = build_prototype(base_pf)
        masks = [ParityMask.ALL]
        if cfg.waveform is Waveform.DP_S1:
            masks.append(ParityMask.EVEN_ONLY)
        for mask in masks:
            model = analytic_alpha(model_pf, cfg.N, mask)
            tag = "model_all" if mask is ParityMask.ALL else "model_even"
            curve_m = analytic_ccdf(model, grid_db, cfg.label(f"model {mask.value} slots"))
            path = out / f"{stem}_ccdf_{tag}.csv"
            write_ccdf_csv(path, curve_m)
            written.append(path)

    write_config(out / f"{stem}_ccdf.cfg", cfg)
    return written


def _center_spectrum(x: BasebandSignal) -> BasebandSignal:
    # Occupied subcarriers sit on [0, 1/oversample); shift them to
    # straddle DC so out-of-band regions are symmetric.
    k = np.arange(len(x.samples))
    shifted = x.samples * np.exp(-1j * np.pi * k / x.oversample)
    return dataclasses.replace(x, samples=shifted)


def run_psd(cfg: ScenarioConfig) -> list[Path]:
    """Averaged PSD campaign; emits tails/no-tails variants as configured."""
    cfg = cfg.resolve()
    out = _outdir(cfg)
    stem = cfg.stem()
    pf = None if cfg.waveform is Waveform.CP_OFDM else build_prototype(cfg)
    spp = cfg.N * cfg.oversample
    segment_len = 4 * spp
    overlap = segment_len // 2
    nfft = 8 * spp

    want_full = cfg.truncate is not True
    want_trunc = cfg.truncate is not False and cfg.waveform is not Waveform.CP_OFDM

    def worker(i):
        xh, _ = synthesize_frame(cfg, pf, i)
        res = {}
        if want_full:
            res["full"] = _welch_linear(_center_spectrum(xh).samples, nfft, segment_len, overlap)[1]
        if want_trunc:
            res["trunc"] = _welch_linear(
                _center_spectrum(truncate_tails(xh)).samples, nfft, segment_len, overlap
            )[1]
        return res

    results = _map_frames(cfg, worker)
    freq = np.fft.fftshift(np.fft.fftfreq(nfft))
    written = []
    for tag, truncated in (("full", False), ("trunc", True)):
        if tag not in results[0]:
            continue
        acc = np.sum(np.stack([r[tag] for r in results]), axis=0) / len(results)
        power_db = 10.0 * np.log10(np.maximum(acc, 1e-300) / acc.max())
        suffix = "with tails" if tag == "full" else "no tails"
        curve = PsdCurve(freq, power_db, truncated, cfg.label(suffix))
        path = out / f"{stem}_psd_{tag}.csv"
        write_psd_csv(path, curve)
        written.append(path)

    write_config(out / f"{stem}_psd.cfg", cfg)
    return written


def run_frame(cfg: ScenarioConfig) -> list[Path]:
    """Dump one frame's samples for inspection or plotting."""
    cfg = cfg.resolve()
    out = _outdir(cfg)
    stem = cfg.stem()
    pf = None if cfg.waveform is Waveform.CP_OFDM else build_prototype(cfg)
    xh, xv = synthesize_frame(cfg, pf, 0)
    if cfg.truncate:
        xh = truncate_tails(xh)
        xv = truncate_tails(xv) if xv is not None else None
    written = []
    if xv is None:
        path = out / f"{stem}_frame.csv"
        write_frame_csv(path, cfg.label(), xh)
        written.append(path)
    else:
        for tag, sig in (("h", xh), ("v", xv)):
            path = out / f"{stem}_frame_{tag}.csv"
            write_frame_csv(path, cfg.label(tag.upper()), sig)
            written.append(path)
    write_config(out / f"{stem}_frame.cfg", cfg)
    return written


def run_filters(cfg: ScenarioConfig) -> list[Path]:
    """Dump the synthesis prototype's taps."""
    cfg = cfg.resolve()
    out = _outdir(cfg)
    pf = build_prototype(cfg)
    path = out / f"{cfg.stem()}_filter.csv"
    write_filter_csv(path, cfg.label(), pf)
    write_config(out / f"{cfg.stem()}_filter.cfg", cfg)
    return [path]


def run_interference(cfg: ScenarioConfig) -> list[Path]:
    """Single-pilot interference table for the configured waveform."""
    cfg = cfg.resolve()
    if cfg.waveform is Waveform.CP_OFDM:
        raise ValueError("interference tables apply to filter-bank waveforms only")
    out = _outdir(cfg)
    base = dataclasses.replace(cfg, oversample=1)
    pf = build_prototype(base)
    table = intrinsic_interference(pf, cfg.structure, label=cfg.label("interference"))
    path = out / f"{cfg.stem()}_interference.csv"
    write_interference_csv(path, table)
    write_config(out / f"{cfg.stem()}_interference.cfg", cfg)
    return [path]


# -- argument parsing -------------------------------------------------------

_RUNNERS = {
    "filters": run_filters,
    "frame": run_frame,
    "ccdf": run_ccdf,
    "psd": run_psd,
    "interference": run_interference,
}


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="key=value config file")
    p.add_argument("--waveform", choices=[w.value for w in Waveform])
    p.add_argument("--filter", dest="filter_kind", choices=[f.value for f in FilterKind])
    p.add_argument("-N", type=int, dest="N")
    p.add_argument("-K", type=int, dest="K")
    p.add_argument("--rolloff", type=float)
    p.add_argument("--symbols", type=int, dest="symbols_per_frame")
    p.add_argument("--frames", type=int, dest="n_frames")
    p.add_argument("--order", type=int, dest="qam_order")
    p.add_argument("--seed", type=int)
    p.add_argument("--cp-len", type=int, dest="cp_len")
    p.add_argument("--window-len", type=int, dest="window_len")
    p.add_argument("--truncate", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--oversample", type=int)
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--jobs", type=int)
    p.add_argument("--measure-v", action=argparse.BooleanOptionalAction, default=None, dest="measure_v")
    p.add_argument("--zero-grid", action=argparse.BooleanOptionalAction, default=None, dest="zero_grid")


def _config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    cfg = ScenarioConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    for field, conv in (
        ("waveform", Waveform),
        ("filter_kind", FilterKind),
    ):
        v = getattr(args, field)
        if v is not None:
            setattr(cfg, field, conv(v))
    for field in (
        "N", "K", "rolloff", "symbols_per_frame", "n_frames", "qam_order", "seed",
        "cp_len", "window_len", "truncate", "oversample", "output_dir", "jobs",
        "measure_v", "zero_grid",
    ):
        v = getattr(args, field)
        if v is not None:
            setattr(cfg, field, v)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fbmclab",
        description="Synthesize multicarrier frames and measure PAPR and PSD.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("filters", "dump prototype filter taps"),
        ("frame", "dump one synthesized frame"),
        ("ccdf", "run a PAPR CCDF campaign"),
        ("psd", "run an averaged PSD campaign"),
        ("interference", "dump a single-pilot interference table"),
    ):
        _add_common_flags(sub.add_parser(name, help=help_text))

    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        written = _RUNNERS[args.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
