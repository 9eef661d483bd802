import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radf.adf import AdfSpec, adf_t_stat
from radf.dgp import spliced
from radf.errors import AlignmentError, InfeasibleError, InputError, InsufficientObservationsError
from radf.recursive import (
    StatSequence,
    brute_force,
    bsadf_sequence,
    date_stamp,
    full_sample_adf,
    gsadf,
    gsadf_from_bsadf,
    sadf,
    sadf_path,
)
from radf.series import Month, Series


def _seq(values, w=12, start=None):
    values = np.asarray(values, dtype=float)
    ends = np.arange(w, w + values.size)
    return StatSequence("BSADF", ends, values, np.zeros(values.size, dtype=np.int64), w, start)


def test_sadf_brute_force_n80():
    p = np.cumsum(np.random.default_rng(80).standard_normal(80))
    stat, path = sadf(p)
    ref = [adf_t_stat(p[:t2]).t_stat for t2 in range(12, 81)]
    assert len(ref) == len(path) == 69
    np.testing.assert_allclose(path.values, ref, rtol=0, atol=1e-10)
    assert stat == pytest.approx(max(ref), abs=1e-10)


def test_gsadf_brute_force_n60(rw60):
    table = brute_force(rw60)
    assert len(table) == 1225
    (t1, t2), best = max(table.items(), key=lambda kv: kv[1])
    stat, window = gsadf(rw60)
    assert stat == pytest.approx(best, abs=1e-10)
    assert (window.t1, window.t2) == (t1, t2)
    seq = bsadf_sequence(rw60)
    for i, t in enumerate(seq.endpoints):
        col = max(v for (a, b), v in table.items() if b == t)
        assert seq.values[i] == pytest.approx(col, abs=1e-10)


def test_nesting_invariants(rw60):
    s, path = sadf(rw60)
    g, _ = gsadf(rw60)
    seq = bsadf_sequence(rw60)
    assert np.all(seq.values >= path.values - 1e-12)
    assert g >= s - 1e-12
    assert g == np.nanmax(seq.values)
    assert seq.values[0] == pytest.approx(adf_t_stat(rw60.values[:12]).t_stat, abs=1e-12)
    assert seq.period(0) == Month(2008, 11)
    assert seq.period(len(seq) - 1) == rw60.end


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(13, 50))
def test_sadf_monotone_in_appended_data(seed, T):
    p = np.cumsum(np.random.default_rng(seed).standard_normal(T + 1))
    assert sadf(p)[0] >= sadf(p[:-1])[0]
    assert gsadf(p)[0] >= gsadf(p[:-1])[0]


def test_final_argmax_inside_explosive_segment():
    # Explosive transitions p[59] -> p[60] ... p[98] -> p[99]; the window that holds
    # exactly those transitions starts at t1 = 59.
    hits = 0
    for seed in range(50):
        p = spliced(100, 60, 100, beta=1.05, seed=seed).values
        seq = bsadf_sequence(p)
        t1 = int(seq.window_starts[-1])
        if seed < 3:
            col = [adf_t_stat(p[a:100]).t_stat for a in range(100 - 12 + 1)]
            assert t1 == int(np.argmax(col))
        hits += 59 <= t1 < 100
    assert hits >= 45


def test_gsadf_tie_break_smallest_start():
    seq = StatSequence("BSADF", np.arange(12, 16), np.array([1.0, 3.0, 3.0, 0.5]), np.array([0, 2, 1, 0]), 12)
    stat, window = gsadf_from_bsadf(seq)
    assert stat == 3.0 and (window.t1, window.t2) == (1, 14)


def test_window_validation(rw60):
    with pytest.raises(InfeasibleError):
        sadf_path(rw60, AdfSpec(lags=5), 8)
    with pytest.raises(InsufficientObservationsError):
        gsadf(rw60.values[:10])


def test_degenerate_windows_logged(caplog):
    rng = np.random.default_rng(5)
    p = np.concatenate([np.full(15, 3.0), 3.0 + np.cumsum(rng.standard_normal(25))])
    with caplog.at_level(logging.WARNING, logger="radf"):
        seq = bsadf_sequence(p)
    assert seq.n_skipped > 0
    assert "skipped" in caplog.text


def test_date_stamp_single_episode():
    eps = date_stamp(_seq([0, 2, 2, 0], start=Month(2008, 1)), np.ones(4))
    assert len(eps) == 1
    ep = eps[0]
    assert (ep.start_obs, ep.end_obs, ep.last_obs, ep.duration) == (12, 14, 13, 2)
    assert ep.origination == Month(2009, 1) and ep.termination == Month(2009, 3)
    assert ep.peak_stat == 2.0 and ep.peak_obs == 12


def test_date_stamp_never_exceeds():
    assert date_stamp(_seq([0, 0.5, 1.0, 0]), np.ones(4)) == []


def test_date_stamp_ties_keep_state():
    eps = date_stamp(_seq([2, 1, 1, 0.5, 1, 1]), np.ones(6))
    assert len(eps) == 1 and eps[0].last_obs == 13 and eps[0].end_obs == 14


def test_date_stamp_open_and_min_duration():
    eps = date_stamp(_seq([0, 2, 0, 2, 3]), np.ones(5))
    assert [e.is_open for e in eps] == [False, True]
    assert eps[1].end_obs is None and eps[1].last_obs == 15
    kept = date_stamp(_seq([0, 2, 0, 2, 3]), np.ones(5), min_duration_obs=2)
    assert len(kept) == 1 and kept[0].start_obs == 14


def test_date_stamp_errors():
    with pytest.raises(AlignmentError):
        date_stamp(_seq([0, 1, 2]), np.ones(4))
    with pytest.raises(InputError):
        date_stamp(_seq([0, 1]), np.ones(2), min_duration_obs=0)


@settings(max_examples=100)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=60), st.integers(1, 4))
def test_episodes_disjoint_and_ordered(values, dur):
    eps = date_stamp(_seq(values), np.full(len(values), 0.5), dur)
    for ep in eps:
        assert ep.last_obs >= ep.start_obs and ep.duration >= dur
        assert ep.end_obs is None or ep.end_obs > ep.last_obs
    for a, b in zip(eps, eps[1:]):
        assert a.end_obs is not None and a.end_obs <= b.start_obs


def test_series_and_array_inputs_agree(rw60):
    a = bsadf_sequence(rw60)
    b = bsadf_sequence(np.array(rw60.values))
    np.testing.assert_array_equal(a.values, b.values)
    assert b.start is None and b.period(0) is None
    assert isinstance(rw60, Series)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(12, 80))
def test_full_sample_adf_nests_exactly(seed, T):
    p = np.cumsum(np.random.default_rng(seed).standard_normal(T))
    full = full_sample_adf(p)
    assert sadf(p)[0] >= full
    assert sadf_path(p).values[-1] == full
    assert full == pytest.approx(adf_t_stat(p).t_stat, abs=1e-12)
