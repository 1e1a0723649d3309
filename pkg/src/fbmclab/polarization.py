"""Dual-polarization multiplexing of the offset-QAM lattice.

Each structure partitions the lattice between the H and V branches; the
branch synthesizers keep every surviving value at its original (n, m)
position, so lattice phases are untouched and the two branch signals sum
back to the single-polarization frame.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .filters import PrototypeFilter
from .mapping import OqamGrid
from .modem import BasebandSignal, synthesize_ppn


class Structure(enum.Enum):
    S1_TPDM = "s1"   # time multiplexed: branches alternate half-symbol slots
    S2_FPDM = "s2"   # frequency multiplexed: branches alternate subcarriers
    S3_TFPDM = "s3"  # checkerboard in both indices


@dataclass
class DualPolFrame:
    h_signal: BasebandSignal
    v_signal: BasebandSignal
    structure: Structure

    def __post_init__(self):
        if len(self.h_signal.samples) != len(self.v_signal.samples):
            raise ValueError("branch frames must have identical length")


def _split(a: OqamGrid, keep_h: np.ndarray):
    h_vals = np.where(keep_h, a.a, 0.0)
    v_vals = np.where(keep_h, 0.0, a.a)
    return OqamGrid(h_vals, a.N, a.M), OqamGrid(v_vals, a.N, a.M)


def multiplex_structure1(a: OqamGrid):
    """H carries even half-symbol slots, V the odd ones.

    Each branch sees pulses one full symbol period apart instead of the
    half-period spacing of the combined lattice.
    """
    m = np.arange(a.M)[None, :]
    return _split(a, np.broadcast_to(m % 2 == 0, a.a.shape))


def multiplex_structure2(a: OqamGrid):
    """H carries even subcarriers, V the odd ones."""
    n = np.arange(a.N)[:, None]
    return _split(a, np.broadcast_to(n % 2 == 0, a.a.shape))


def multiplex_structure3(a: OqamGrid):
    """Checkerboard split: H where n + m is even, V elsewhere."""
    n = np.arange(a.N)[:, None]
    m = np.arange(a.M)[None, :]
    return _split(a, (n + m) % 2 == 0)


_MULTIPLEXERS = {
    Structure.S1_TPDM: multiplex_structure1,
    Structure.S2_FPDM: multiplex_structure2,
    Structure.S3_TFPDM: multiplex_structure3,
}


def multiplex(a: OqamGrid, structure: Structure):
    return _MULTIPLEXERS[structure](a)


def synthesize_dp(a: OqamGrid, h: PrototypeFilter, structure: Structure, oversample: int = 1) -> DualPolFrame:
    """Split the lattice per the chosen structure and synthesize both branches."""
    a_h, a_v = multiplex(a, structure)
    return DualPolFrame(
        synthesize_ppn(a_h, h, oversample),
        synthesize_ppn(a_v, h, oversample),
        structure,
    )
