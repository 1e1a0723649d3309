"""Baseband frame synthesis and recovery.

Two synthesis routes are kept side by side on purpose: a literal
superposition of pulse-shaped subcarrier bursts (slow, easy to audit)
and a polyphase/IFFT fast path.  They must agree to within float
rounding, and the test suite pins that agreement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import PrototypeFilter
from .mapping import OqamGrid, QamGrid, phase_factor


@dataclass
class BasebandSignal:
    """A synthesized frame plus the geometry needed to interpret it.

    N is the subcarrier count; one symbol period spans N*oversample
    samples.  K is the prototype overlapping factor (1 for OFDM).
    tails_removed marks frames whose filter ramp-up/down has been cut.
    """

    samples: np.ndarray
    N: int
    M: int
    K: int
    oversample: int = 1
    tails_removed: bool = False

    @property
    def samples_per_period(self) -> int:
        return self.N * self.oversample


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def _check_pair(a: OqamGrid, h: PrototypeFilter, oversample: int):
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    if h.N != a.N * oversample:
        raise ValueError(
            f"filter rate mismatch: filter has {h.N} samples per period, "
            f"grid needs {a.N * oversample}"
        )


def frame_length(M: int, N_samp: int, K: int) -> int:
    """Samples in a frame of M half-symbol slots at N_samp per period."""
    return (M - 1) * (N_samp // 2) + K * N_samp


def synthesize_direct(a: OqamGrid, h: PrototypeFilter, oversample: int = 1) -> BasebandSignal:
    """Reference synthesis: explicit sum of pulse-shaped bursts.

    Each lattice point (n, m) contributes its real value times the
    prototype shifted to m*N/2, a subcarrier exponential referenced to
    the filter center, and the quarter-turn lattice phase.  Quadratic
    cost; use synthesize_ppn for anything beyond small frames.
    """
    _check_pair(a, h, oversample)
    Ns = h.N
    L = h.L
    hop = Ns // 2
    length = frame_length(a.M, Ns, h.K)
    k = np.arange(length)
    x = np.zeros(length, dtype=complex)
    for n in range(a.N):
        carrier = np.exp(2j * np.pi * n * (k - L / 2.0) / Ns)
        for m in range(a.M):
            v = a.a[n, m]
            if v == 0.0:
                continue
            off = m * hop
            x[off : off + L] += v * phase_factor(n, m) * h.coeffs * carrier[off : off + L]
    if not np.all(np.isfinite(x)):
        raise ValueError("synthesis produced non-finite samples")
    return BasebandSignal(x, a.N, a.M, h.K, oversample)


def synthesize_ppn(a: OqamGrid, h: PrototypeFilter, oversample: int = 1) -> BasebandSignal:
    """Fast synthesis: per-slot IFFT, polyphase weighting, overlap-add.

    Because the prototype spans exactly K periods, the subcarrier
    exponential of slot m reduces to the slot's N-point IFFT circularly
    shifted by half a period when m - K is odd.  The IFFT is zero padded
    to N*oversample bins when oversampling.
    """
    _check_pair(a, h, oversample)
    Ns = h.N
    if not (_is_pow2(a.N) and _is_pow2(Ns)):
        raise ValueError(f"fast path needs a power-of-two subcarrier count, got N={a.N}")
    L = h.L
    hop = Ns // 2
    M = a.M
    length = frame_length(M, Ns, h.K)

    n = np.arange(a.N)[:, None]
    m = np.arange(M)[None, :]
    spectra = np.zeros((Ns, M), dtype=complex)
    spectra[: a.N, :] = a.a * phase_factor(n, m)

    # One period of each slot's waveform; the half-period shift absorbs
    # the filter-center reference of the subcarrier exponential.
    periods = np.fft.ifft(spectra, axis=0) * Ns
    odd_shift = ((np.arange(M) - h.K) % 2) == 1
    periods[:, odd_shift] = np.roll(periods[:, odd_shift], -hop, axis=0)

    bursts = np.tile(periods, (h.K, 1)) * h.coeffs[:, None]
    x = np.zeros(length, dtype=complex)
    for mm in range(M):
        off = mm * hop
        x[off : off + L] += bursts[:, mm]
    if not np.all(np.isfinite(x)):
        raise ValueError("synthesis produced non-finite samples")
    return BasebandSignal(x, a.N, a.M, h.K, oversample)


def _demodulate_complex(x: BasebandSignal, h: PrototypeFilter, n_subcarriers: int, n_slots: int):
    """Complex matched-filter bank output, before the real projection."""
    Ns = h.N
    L = h.L
    hop = Ns // 2
    expected = frame_length(n_slots, Ns, h.K)
    if len(x.samples) != expected:
        raise ValueError(f"frame length {len(x.samples)} does not match geometry ({expected})")
    k_local = np.arange(L)[None, :]
    n = np.arange(n_subcarriers)[:, None]
    out = np.empty((n_subcarriers, n_slots), dtype=complex)
    for m in range(n_slots):
        off = m * hop
        seg = x.samples[off : off + L] * h.coeffs
        conj_carrier = np.exp(-2j * np.pi * n * (off + k_local - L / 2.0) / Ns)
        out[:, m] = conj_carrier @ seg
    out *= np.conj(phase_factor(n, np.arange(n_slots)[None, :]))
    return out


def demodulate(x: BasebandSignal, h: PrototypeFilter, n_subcarriers: int, n_slots: int) -> OqamGrid:
    """Recover offset-QAM values with a matched-filter bank.

    Correlates against every pulse-shaped carrier and takes the real
    part after removing the lattice phase.  Deliberately the slow,
    transparent route.
    """
    est = _demodulate_complex(x, h, n_subcarriers, n_slots).real
    return OqamGrid(est, n_subcarriers, n_slots)


def _taper_ramp(width):
    # Raised-cosine ramp; together with its reverse it sums to one.
    i = np.arange(width)
    return 0.5 * (1.0 - np.cos(np.pi * (i + 0.5) / width))


def cp_ofdm_modulate(grid: QamGrid, cp_len: int, window_len: int = 0, oversample: int = 1) -> BasebandSignal:
    """Synthesize a CP-OFDM frame with a unitary IFFT per symbol.

    cp_len and window_len count output samples.  When window_len > 0,
    each extended symbol gets raised-cosine edge tapers and overlaps its
    neighbor by window_len samples, eating into the cyclic prefix.
    """
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    Ns = grid.N * oversample
    if not 0 <= cp_len < Ns:
        raise ValueError(f"cp_len must lie in [0, {Ns}), got {cp_len}")
    if not 0 <= window_len <= cp_len:
        raise ValueError(f"window_len must lie in [0, cp_len], got {window_len}")

    spectra = np.zeros((Ns, grid.L_sym), dtype=complex)
    spectra[: grid.N, :] = grid.d
    symbols = np.fft.ifft(spectra, axis=0) * (Ns / np.sqrt(grid.N))

    stride = Ns + cp_len
    if window_len == 0:
        blocks = np.concatenate([symbols[Ns - cp_len :, :], symbols], axis=0) if cp_len else symbols
        x = blocks.T.reshape(-1).astype(complex)
    else:
        up = _taper_ramp(window_len)
        down = up[::-1]
        x = np.zeros(grid.L_sym * stride + window_len, dtype=complex)
        for l in range(grid.L_sym):
            ext = np.concatenate([symbols[Ns - cp_len :, l], symbols[:, l], symbols[:window_len, l]])
            ext[:window_len] *= up
            ext[-window_len:] *= down
            x[l * stride : l * stride + stride + window_len] += ext
    if not np.all(np.isfinite(x)):
        raise ValueError("synthesis produced non-finite samples")
    return BasebandSignal(x, grid.N, grid.L_sym, 1, oversample)
