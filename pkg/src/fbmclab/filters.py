"""Prototype filter design for the filter-bank and OFDM synthesizers.

Every design returns a unit-energy, linear-phase FIR prototype with
L = K*N taps, where N is the number of samples per symbol period and K
the overlapping factor.  Taps sit on the centered grid
t_k = (k - (L-1)/2) / N symbol periods, so even-length designs are
exactly symmetric about the array midpoint.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FilterKind",
    "PrototypeFilter",
    "design_srrc",
    "design_phydyas",
    "design_rect",
]


class FilterKind(enum.Enum):
    SRRC = "srrc"
    PHYDYAS = "phydyas"
    RECT = "rect"


# Frequency-sampling coefficients of the near-perfect-reconstruction
# prototype published by the PHYDYAS project, by overlapping factor.
# H_0 = 1 is implicit; adjacent pairs satisfy H_k^2 + H_{K-k}^2 = 1.
_PHYDYAS_FREQ_COEFFS = {
    2: (np.sqrt(2.0) / 2.0,),
    3: (0.911438, 0.411438),
    4: (0.971960, np.sqrt(2.0) / 2.0, 0.235147),
}


@dataclass(frozen=True)
class PrototypeFilter:
    """Unit-energy FIR prototype plus the lattice geometry it was built for."""

    kind: FilterKind
    N: int
    K: int
    coeffs: np.ndarray
    rolloff: float | None = None

    def __post_init__(self):
        if len(self.coeffs) != self.K * self.N:
            raise ValueError("tap count must equal K*N")

    @property
    def L(self) -> int:
        return self.K * self.N


def _normalize_energy(h):
    return h / np.sqrt(np.sum(h * h))


def _check_geometry(N, K):
    if N < 2 or N % 2 != 0:
        raise ValueError(f"N must be a positive even integer, got {N}")
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")


def _srrc_amplitude(t, rolloff):
    """Square-root raised cosine pulse on a normalized time grid.

    Parameters
    ----------
    t : np.array
        Time in symbol periods.
    rolloff : float
        Excess-bandwidth factor in (0, 1].

    Returns
    -------
    np.array
        Pulse amplitude (unnormalized).

    The two removable singularities (t = 0 and |t| = 1/(4*rolloff)) are
    replaced by their analytic limits.
    """
    a = rolloff
    h = np.empty_like(t, dtype=float)

    at_zero = np.abs(t) < 1e-10
    at_pole = np.abs(np.abs(t) - 1.0 / (4.0 * a)) < 1e-10
    regular = ~(at_zero | at_pole)

    tr = t[regular]
    num = np.sin(np.pi * tr * (1.0 - a)) + 4.0 * a * tr * np.cos(np.pi * tr * (1.0 + a))
    den = np.pi * tr * (1.0 - (4.0 * a * tr) ** 2)
    h[regular] = num / den

    h[at_zero] = 1.0 - a + 4.0 * a / np.pi
    h[at_pole] = (a / np.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * a))
        + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * a))
    )
    return h


def design_srrc(N: int, K: int, rolloff: float) -> PrototypeFilter:
    """Design a truncated square-root raised cosine prototype.

    Parameters
    ----------
    N : int
        Samples per symbol period (even, positive).
    K : int
        Overlapping factor; the filter spans K symbol periods.
    rolloff : float
        Excess-bandwidth factor in (0, 1].

    Returns
    -------
    PrototypeFilter
        K*N taps, renormalized to unit energy after truncation.
    """
    _check_geometry(N, K)
    if not 0.0 < rolloff <= 1.0:
        raise ValueError(f"rolloff must be in (0, 1], got {rolloff}")
    L = K * N
    t = (np.arange(L) - (L - 1) / 2.0) / N
    h = _normalize_energy(_srrc_amplitude(t, rolloff))
    return PrototypeFilter(FilterKind.SRRC, N, K, h, rolloff)


def design_phydyas(N: int, K: int) -> PrototypeFilter:
    """Design the PHYDYAS frequency-sampling prototype.

    The impulse response is the real cosine series built from the 2K-1
    published frequency-domain coefficients.  Its peak sits on tap L/2,
    the reconstruction delay of the synthesis lattice, which keeps the
    filter bank near-perfectly reconstructing; tap 0 is the (almost
    exactly zero) boundary sample.
    """
    _check_geometry(N, K)
    if K not in _PHYDYAS_FREQ_COEFFS:
        raise ValueError(f"overlapping factor {K} not supported, pick one of {sorted(_PHYDYAS_FREQ_COEFFS)}")
    L = K * N
    tau = (np.arange(L) - L / 2.0) / L
    h = np.ones(L)
    for k, hk in enumerate(_PHYDYAS_FREQ_COEFFS[K], start=1):
        h += 2.0 * hk * np.cos(2.0 * np.pi * k * tau)
    h = _normalize_energy(h)
    return PrototypeFilter(FilterKind.PHYDYAS, N, K, h)


def design_rect(N: int) -> PrototypeFilter:
    """Rectangular prototype: K = 1, every tap equal to 1/sqrt(N)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    h = np.full(N, 1.0 / np.sqrt(N))
    return PrototypeFilter(FilterKind.RECT, N, 1, _normalize_energy(h))
