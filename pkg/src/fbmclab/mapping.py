"""QAM symbol sources and the offset-QAM lattice transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# i^q for q = 0..3, kept as an exact lookup so the two synthesis paths
# agree to the last bit.
_QUARTER_TURNS = np.array([1.0 + 0.0j, 0.0 + 1.0j, -1.0 + 0.0j, 0.0 - 1.0j])

_QAM_ORDERS = (4, 16, 64)


@dataclass
class QamGrid:
    """Complex symbols on the subcarrier-by-symbol lattice.

    d has shape (N, L_sym).  sigma_a2 is the per-real-component variance
    of the offset-QAM values derived from d: 1/2 for a unit-power
    constellation.
    """

    d: np.ndarray
    order: int | None
    sigma_a2: float = 0.5

    @property
    def N(self) -> int:
        return self.d.shape[0]

    @property
    def L_sym(self) -> int:
        return self.d.shape[1]


@dataclass
class OqamGrid:
    """Real offset-QAM values, two columns per source QAM column."""

    a: np.ndarray
    N: int
    M: int

    def __post_init__(self):
        if self.a.shape != (self.N, self.M):
            raise ValueError("a must have shape (N, M)")
        if self.M % 2 != 0:
            raise ValueError("M must be even")


def _gray_to_binary(g):
    b = g.copy()
    shift = g >> 1
    while np.any(shift):
        b ^= shift
        shift >>= 1
    return b


def _qam_alphabet(order):
    """Gray-coded square constellation scaled to unit average power."""
    side = int(np.sqrt(order))
    bits_per_axis = side.bit_length() - 1
    gray = np.arange(side)
    levels = 2 * _gray_to_binary(gray) - (side - 1)
    scale = np.sqrt(2.0 * (order - 1) / 3.0)
    sym = np.arange(order)
    i = levels[sym >> bits_per_axis]
    q = levels[sym & (side - 1)]
    return (i + 1j * q) / scale


def random_qam_grid(n_subcarriers: int, n_symbols: int, order: int, seed) -> QamGrid:
    """Draw a uniform random QAM grid, deterministic in the seed.

    seed may be an int or a tuple of ints; it feeds a SeedSequence so
    composite keys like (run_seed, frame_index) give independent,
    order-free streams.
    """
    if order not in _QAM_ORDERS:
        raise ValueError(f"order must be one of {_QAM_ORDERS}, got {order}")
    if n_subcarriers < 1 or n_symbols < 1:
        raise ValueError("grid must have at least one subcarrier and one symbol")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    alphabet = _qam_alphabet(order)
    idx = rng.integers(0, order, size=(n_subcarriers, n_symbols))
    return QamGrid(alphabet[idx], order)


def _first_slot_is_real(N, L_sym):
    # Which component leads at m = 2l: the real part when n + l is even,
    # the imaginary part otherwise.
    n = np.arange(N)[:, None]
    l = np.arange(L_sym)[None, :]
    return (n + l) % 2 == 0


def oqam_stagger(grid: QamGrid) -> OqamGrid:
    """Split each complex symbol into two real half-symbol slots.

    Column l of the QAM grid feeds columns m = 2l and m = 2l + 1; the
    component order alternates with subcarrier and symbol parity so
    adjacent lattice points never carry the same component.
    """
    lead_real = _first_slot_is_real(grid.N, grid.L_sym)
    a = np.empty((grid.N, 2 * grid.L_sym))
    a[:, 0::2] = np.where(lead_real, grid.d.real, grid.d.imag)
    a[:, 1::2] = np.where(lead_real, grid.d.imag, grid.d.real)
    return OqamGrid(a, grid.N, 2 * grid.L_sym)


def oqam_destagger(grid: OqamGrid) -> QamGrid:
    """Exact inverse of oqam_stagger."""
    lead_real = _first_slot_is_real(grid.N, grid.M // 2)
    first = grid.a[:, 0::2]
    second = grid.a[:, 1::2]
    d = np.where(lead_real, first + 1j * second, second + 1j * first)
    return QamGrid(d, None)


def phase(n, m):
    """Lattice phase angle pi/2*(n+m), reduced to [0, 2*pi)."""
    return (np.pi / 2.0) * ((np.asarray(n) + np.asarray(m)) % 4)


def phase_factor(n, m):
    """exp(j*phase(n, m)) as an exact quarter-turn unit."""
    return _QUARTER_TURNS[(np.asarray(n) + np.asarray(m)) % 4]
