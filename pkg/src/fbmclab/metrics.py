"""Peak-power and spectral measurements, plus their closed-form models.

The empirical and analytic CCDF routes are independent on purpose: the
former counts windowed peaks in synthesized frames, the latter evaluates
a Rayleigh-envelope product model from the prototype's shift-sum energy
profile.  Tests compare them; nothing here shares intermediate state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize, signal

from .filters import PrototypeFilter
from .mapping import OqamGrid
from .modem import BasebandSignal, frame_length, synthesize_ppn, _demodulate_complex
from .polarization import Structure

__all__ = [
    "ParityMask",
    "CcdfCurve",
    "AnalyticCcdfModel",
    "PsdCurve",
    "InterferenceTable",
    "default_gamma_grid",
    "papr_windows",
    "empirical_ccdf",
    "analytic_alpha",
    "analytic_ccdf",
    "truncate_tails",
    "psd_periodogram",
    "intrinsic_interference",
    "papr_quantile_db",
    "model_gamma_db_at_prob",
]


class ParityMask(enum.Enum):
    ALL = "all"
    EVEN_ONLY = "even"


@dataclass
class CcdfCurve:
    """Pr(PAPR >= gamma) sampled on a dB grid."""

    gamma_db: np.ndarray
    prob: np.ndarray
    n_samples: int
    label: str = ""


@dataclass
class AnalyticCcdfModel:
    """Per-sample inverse normalized variances over one symbol period."""

    alpha: np.ndarray
    N: int
    parity_mask: ParityMask


@dataclass
class PsdCurve:
    """Power spectral density in dB, peak-normalized, DC centered."""

    freq: np.ndarray
    power_db: np.ndarray
    truncated: bool
    label: str = ""


@dataclass
class InterferenceTable:
    """Single-pilot leakage magnitudes on same-branch lattice offsets."""

    rows: list
    pilot_imag: float
    label: str = ""

    def interference_power(self) -> float:
        return float(sum(mag * mag for dn, dm, mag in self.rows if (dn, dm) != (0, 0)))


def default_gamma_grid() -> np.ndarray:
    """Threshold grid: 4.0 to 10.0 dB in 0.1 dB steps."""
    return np.round(np.arange(40, 101) * 0.1, 1)


def truncate_tails(x: BasebandSignal) -> BasebandSignal:
    """Cut the filter ramp-up and ramp-down from both frame ends.

    Removes floor((K/2 - 1) * N * oversample) samples per side, nothing
    for K <= 2.  Refuses to cut twice.
    """
    if x.tails_removed:
        raise ValueError("tails already removed from this frame")
    cut = int(max(0.0, x.K / 2.0 - 1.0) * x.samples_per_period)
    if len(x.samples) <= 2 * cut:
        raise ValueError(f"frame too short to truncate: {len(x.samples)} samples, cut {cut} per side")
    trimmed = x.samples[cut : len(x.samples) - cut] if cut else x.samples
    return replace(x, samples=trimmed, tails_removed=True)


def papr_windows(x: BasebandSignal, win: int | None = None) -> np.ndarray:
    """Per-window peak-to-average ratios over the frame interior.

    Tails are cut first (unless already cut), then non-overlapping
    windows of win samples are scored as max|x|^2 over the window's own
    mean |x|^2.  win defaults to one symbol period.
    """
    if win is None:
        win = x.samples_per_period
    if win < 1:
        raise ValueError(f"win must be >= 1, got {win}")
    y = x if x.tails_removed else truncate_tails(x)
    n_win = len(y.samples) // win
    if n_win == 0:
        raise ValueError(f"interior shorter than one window ({len(y.samples)} < {win})")
    p = np.abs(y.samples[: n_win * win].reshape(n_win, win)) ** 2
    peak = p.max(axis=1)
    mean = p.mean(axis=1)
    return np.where(mean > 0.0, peak / np.where(mean > 0.0, mean, 1.0), 0.0)


def empirical_ccdf(values: np.ndarray, gamma_db: np.ndarray, label: str = "") -> CcdfCurve:
    """Fraction of values at or above each threshold (ties count)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("need at least one value")
    ordered = np.sort(values)
    thresholds = 10.0 ** (np.asarray(gamma_db) / 10.0)
    below = np.searchsorted(ordered, thresholds, side="left")
    prob = 1.0 - below / values.size
    return CcdfCurve(np.asarray(gamma_db, dtype=float), prob, values.size, label)


def _shift_energy_profile(h: PrototypeFilter, N: int, parity_mask: ParityMask) -> np.ndarray:
    """Sum of squared taps over all half-period shifts covering each sample."""
    hop = N // 2
    hh = h.coeffs * h.coeffs
    profile = np.zeros(N)
    for k in range(N):
        m_hi = k // hop
        m_lo = -((h.L - 1 - k) // hop)
        for m in range(m_lo, m_hi + 1):
            if parity_mask is ParityMask.EVEN_ONLY and m % 2 != 0:
                continue
            profile[k] += hh[k - m * hop]
    return profile


def analytic_alpha(h: PrototypeFilter, N: int, parity_mask: ParityMask = ParityMask.ALL) -> AnalyticCcdfModel:
    """Inverse normalized per-sample variances of the envelope model.

    alpha_k = 2 / (N * sum_m h[k - m*N/2]^2), the shift sum running over
    the slot parities the mask keeps.  With the full lattice every tap
    is counted twice per period, so the profile averages 2/N and a
    rectangular prototype gives alpha_k = 1; a single-parity branch
    halves the sum and roughly doubles alpha.
    """
    if h.N != N:
        raise ValueError(f"model is defined at symbol rate: filter N {h.N} != {N}")
    profile = _shift_energy_profile(h, N, parity_mask)
    if np.any(profile <= 0.0):
        raise ValueError("shift-energy profile must be strictly positive")
    return AnalyticCcdfModel(2.0 / (N * profile), N, parity_mask)


def analytic_ccdf(model: AnalyticCcdfModel, gamma_db: np.ndarray, label: str = "") -> CcdfCurve:
    """Closed-form CCDF: 1 - prod_k (1 - exp(-alpha_k * gamma))."""
    gamma = 10.0 ** (np.asarray(gamma_db) / 10.0)
    log_terms = np.log1p(-np.exp(-np.outer(gamma, model.alpha)))
    prob = -np.expm1(log_terms.sum(axis=1))
    return CcdfCurve(np.asarray(gamma_db, dtype=float), prob, model.N, label)


def model_gamma_db_at_prob(model: AnalyticCcdfModel, prob: float) -> float:
    """Threshold (dB) where the analytic CCDF crosses prob."""
    if not 0.0 < prob < 1.0:
        raise ValueError("prob must lie strictly between 0 and 1")

    def excess(gamma):
        return -np.expm1(np.sum(np.log1p(-np.exp(-gamma * model.alpha)))) - prob

    gamma = optimize.brentq(excess, 1e-9, 1e6)
    return 10.0 * np.log10(gamma)


def papr_quantile_db(values: np.ndarray, prob: float) -> float:
    """Empirical threshold (dB) exceeded with probability prob."""
    if not 0.0 < prob < 1.0:
        raise ValueError("prob must lie strictly between 0 and 1")
    return float(10.0 * np.log10(np.quantile(np.asarray(values, dtype=float), 1.0 - prob)))


def _welch_linear(samples: np.ndarray, nfft: int, segment_len: int, overlap: int):
    freq, pxx = signal.welch(
        samples,
        window="hann",
        nperseg=segment_len,
        noverlap=overlap,
        nfft=nfft,
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    return np.fft.fftshift(freq), np.fft.fftshift(pxx)


def psd_periodogram(
    x: BasebandSignal,
    nfft: int | None = None,
    segment_len: int | None = None,
    overlap: int | None = None,
    label: str = "",
) -> PsdCurve:
    """Averaged modified periodogram (Hann segments), peak at 0 dB.

    Defaults: segments of four symbol periods with 50% overlap, analyzed
    on an 8x symbol-period FFT grid.
    """
    spp = x.samples_per_period
    if segment_len is None:
        segment_len = min(4 * spp, len(x.samples))
    if overlap is None:
        overlap = segment_len // 2
    if nfft is None:
        nfft = max(8 * spp, segment_len)
    if not 0 <= overlap < segment_len:
        raise ValueError(f"overlap must lie in [0, segment_len), got {overlap}")
    if len(x.samples) < segment_len:
        raise ValueError("frame shorter than one segment")
    freq, pxx = _welch_linear(x.samples, nfft, segment_len, overlap)
    power_db = 10.0 * np.log10(np.maximum(pxx, 1e-300) / pxx.max())
    return PsdCurve(freq, power_db, x.tails_removed, label)


def _branch_keeps(structure: Structure | None, n: int, m: int) -> bool:
    if structure is None:
        return True
    if structure is Structure.S1_TPDM:
        return m % 2 == 0
    if structure is Structure.S2_FPDM:
        return n % 2 == 0
    return (n + m) % 2 == 0


def intrinsic_interference(
    h: PrototypeFilter,
    structure: Structure | None = None,
    neighborhood: tuple[int, int] = (1, 3),
    label: str = "",
) -> InterferenceTable:
    """Single-pilot leakage survey on one transmit branch.

    A unit pilot is synthesized alone and demodulated without noise; the
    table lists the complex response magnitude at every lattice offset
    that lives on the pilot's branch (offsets multiplexed to the other
    branch are omitted).  pilot_imag is the quadrature component at the
    pilot position itself, before the real projection.
    """
    dn_ext, dm_ext = neighborhood
    if dn_ext < 0 or dm_ext < 0:
        raise ValueError("neighborhood extents must be non-negative")
    N = h.N
    if N < 2 * dn_ext + 2:
        raise ValueError("subcarrier count too small for the requested neighborhood")

    n_slots = 4 * (h.K + dm_ext + 1)
    n0 = N // 2
    m0 = n_slots // 2
    n0 -= n0 % 2
    m0 -= m0 % 2  # keep the pilot on every structure's H branch

    values = np.zeros((N, n_slots))
    values[n0, m0] = 1.0
    x = synthesize_ppn(OqamGrid(values, N, n_slots), h)
    est = _demodulate_complex(x, h, N, n_slots)

    rows = []
    for dn in range(-dn_ext, dn_ext + 1):
        for dm in range(-dm_ext, dm_ext + 1):
            n, m = n0 + dn, m0 + dm
            if not _branch_keeps(structure, n, m):
                continue
            rows.append((dn, dm, float(np.abs(est[n, m]))))
    return InterferenceTable(rows, float(est[n0, m0].imag), label)
