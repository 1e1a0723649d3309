"""Dual-polarization lattice splits and branch signal statistics."""

import numpy as np
import pytest
from scipy import stats

from fbmclab.filters import design_phydyas, design_srrc
from fbmclab.mapping import OqamGrid, oqam_stagger, random_qam_grid
from fbmclab.modem import synthesize_ppn
from fbmclab.polarization import (
    DualPolFrame,
    Structure,
    multiplex,
    multiplex_structure1,
    multiplex_structure2,
    multiplex_structure3,
    synthesize_dp,
)


def _oqam(N, L_sym, seed):
    return oqam_stagger(random_qam_grid(N, L_sym, 16, seed))


@pytest.mark.parametrize("structure", list(Structure))
def test_split_is_a_partition(structure):
    a = _oqam(16, 8, 1)
    ah, av = multiplex(a, structure)
    np.testing.assert_array_equal(ah.a + av.a, a.a)
    # disjoint: a value is never on both branches
    assert not np.any((ah.a != 0) & (av.a != 0))
    assert ah.a.shape == av.a.shape == a.a.shape


def test_structure1_alternates_slots():
    a = _oqam(8, 4, 0)
    ah, av = multiplex_structure1(a)
    np.testing.assert_array_equal(ah.a[:, 0::2], a.a[:, 0::2])
    assert np.all(ah.a[:, 1::2] == 0)
    np.testing.assert_array_equal(av.a[:, 1::2], a.a[:, 1::2])
    assert np.all(av.a[:, 0::2] == 0)


def test_structure2_alternates_subcarriers():
    a = _oqam(8, 4, 0)
    ah, av = multiplex_structure2(a)
    np.testing.assert_array_equal(ah.a[0::2, :], a.a[0::2, :])
    assert np.all(ah.a[1::2, :] == 0)
    np.testing.assert_array_equal(av.a[1::2, :], a.a[1::2, :])


def test_structure3_is_a_checkerboard():
    a = _oqam(8, 4, 0)
    ah, av = multiplex_structure3(a)
    n = np.arange(8)[:, None]
    m = np.arange(8)[None, :]
    even = (n + m) % 2 == 0
    np.testing.assert_array_equal(ah.a[even], a.a[even])
    assert np.all(ah.a[~even] == 0)
    np.testing.assert_array_equal(av.a[~even], a.a[~even])


def test_single_value_routes_by_structure():
    vals = np.zeros((4, 4))
    vals[1, 2] = 1.0  # odd subcarrier, even slot
    a = OqamGrid(vals, 4, 4)
    ah, av = multiplex(a, Structure.S1_TPDM)
    assert ah.a[1, 2] == 1.0 and np.all(av.a == 0)
    ah, av = multiplex(a, Structure.S2_FPDM)
    assert av.a[1, 2] == 1.0 and np.all(ah.a == 0)
    ah, av = multiplex(a, Structure.S3_TFPDM)
    assert av.a[1, 2] == 1.0 and np.all(ah.a == 0)


@pytest.mark.parametrize("structure", list(Structure))
def test_branch_signals_sum_to_single_pol_frame(structure):
    N = 32
    pf = design_srrc(N, 4, 0.5)
    a = _oqam(N, 8, 5)
    frame = synthesize_dp(a, pf, structure)
    combined = frame.h_signal.samples + frame.v_signal.samples
    reference = synthesize_ppn(a, pf).samples
    np.testing.assert_allclose(combined, reference, atol=1e-9)
    assert frame.structure is structure


def test_branch_is_plain_synthesis_of_masked_grid():
    N = 16
    pf = design_phydyas(N, 4)
    a = _oqam(N, 6, 2)
    ah, _ = multiplex(a, Structure.S1_TPDM)
    frame = synthesize_dp(a, pf, Structure.S1_TPDM)
    np.testing.assert_array_equal(frame.h_signal.samples, synthesize_ppn(ah, pf).samples)


def test_all_zero_grid_gives_silent_branches():
    N = 16
    pf = design_srrc(N, 2, 1.0)
    a = OqamGrid(np.zeros((N, 4)), N, 4)
    frame = synthesize_dp(a, pf, Structure.S3_TFPDM)
    assert np.all(frame.h_signal.samples == 0)
    assert np.all(frame.v_signal.samples == 0)


def test_mismatched_branch_lengths_rejected():
    N = 16
    pf = design_srrc(N, 2, 1.0)
    a = _oqam(N, 4, 0)
    x = synthesize_ppn(a, pf)
    longer = _oqam(N, 6, 0)
    y = synthesize_ppn(longer, pf)
    with pytest.raises(ValueError):
        DualPolFrame(x, y, Structure.S1_TPDM)


def _folded_power(signals, N, trim):
    # average |x|^2 over the frame interiors, folded onto one symbol period
    acc = np.zeros(N)
    count = 0
    for x in signals:
        s = np.abs(x[trim : len(x) - trim]) ** 2
        periods = len(s) // N
        acc += s[: periods * N].reshape(periods, N).sum(axis=0)
        count += periods
    return acc / count


def test_structure1_branch_power_has_symbol_rate_valleys():
    # every second half-symbol slot is silent on a branch, so the branch
    # power profile dips between the surviving pulse centers (the trim is
    # a whole number of periods, which puts those centers at fold zero and
    # the dip near N/2); the full lattice has no such structure
    N = 64
    pf = design_srrc(N, 4, 0.5)
    single, branch = [], []
    for seed in range(100):
        a = _oqam(N, 16, seed)
        single.append(synthesize_ppn(a, pf).samples)
        branch.append(synthesize_dp(a, pf, Structure.S1_TPDM).h_signal.samples)
    p_single = _folded_power(single, N, pf.L)
    p_branch = _folded_power(branch, N, pf.L)
    assert p_single.min() / p_single.max() > 0.75
    assert p_branch.min() / p_branch.max() < 0.65
    # the dip sits where the skipped slots would have put their pulses
    assert p_branch[N // 2] / p_branch.max() < 0.6


def test_structure1_branches_are_statistically_alike():
    # H holds slots 0, 2, ... and V slots 1, 3, ...; V is H delayed by
    # half a period, so PAPR windows must be compared on windows shifted
    # by N/2, trimming one filter length at each frame edge
    N, L_sym, n_frames = 64, 16, 400
    pf = design_phydyas(N, 4)
    pools_h, pools_v = [], []
    for i in range(n_frames):
        a = _oqam(N, L_sym, (99, i))
        frame = synthesize_dp(a, pf, Structure.S1_TPDM)
        for sig, off, pool in (
            (frame.h_signal.samples, 0, pools_h),
            (frame.v_signal.samples, N // 2, pools_v),
        ):
            seg = sig[pf.L + off : len(sig) - pf.L + off]
            nwin = len(seg) // N
            p = np.abs(seg[: nwin * N].reshape(nwin, N)) ** 2
            pool.append(p.max(axis=1) / p.mean(axis=1))
    res = stats.ks_2samp(np.concatenate(pools_h), np.concatenate(pools_v))
    assert res.pvalue > 0.01
