"""Multicarrier waveform laboratory.

Synthesizes CP-OFDM, FBMC and dual-polarization FBMC baseband frames and
measures their peak-to-average power and spectral behavior, with
closed-form CCDF models alongside the empirical estimators.
"""

from .filters import FilterKind, PrototypeFilter, design_phydyas, design_rect, design_srrc
from .mapping import (
    OqamGrid,
    QamGrid,
    oqam_destagger,
    oqam_stagger,
    phase,
    phase_factor,
    random_qam_grid,
)
from .metrics import (
    AnalyticCcdfModel,
    CcdfCurve,
    InterferenceTable,
    ParityMask,
    PsdCurve,
    analytic_alpha,
    analytic_ccdf,
    default_gamma_grid,
    empirical_ccdf,
    intrinsic_interference,
    model_gamma_db_at_prob,
    papr_quantile_db,
    papr_windows,
    psd_periodogram,
    truncate_tails,
)
from .modem import (
    BasebandSignal,
    cp_ofdm_modulate,
    demodulate,
    frame_length,
    synthesize_direct,
    synthesize_ppn,
)
from .polarization import (
    DualPolFrame,
    Structure,
    multiplex,
    multiplex_structure1,
    multiplex_structure2,
    multiplex_structure3,
    synthesize_dp,
)

__version__ = "0.1.0"
