import logging

import numpy as np
import pytest

from radf.adf import AdfSpec
from radf.critical import (
    DEFAULT_LEVELS,
    CriticalValueCache,
    CriticalValueTable,
    bsadf_cv_sequence,
    critical_values,
    null_draws,
    null_paths,
    order_quantile,
    read_table,
    simulate_null,
)
from radf.errors import CacheChecksumError, InfeasibleError, InsufficientObservationsError


def test_simulate_null_deterministic():
    a = simulate_null(50, seed=7)
    b = simulate_null(50, seed=7)
    assert a.values.tobytes() == b.values.tobytes()
    assert a.values[0] == 0.0
    assert simulate_null(50, seed=8).values.tobytes() != a.values.tobytes()


def test_null_paths_start_at_zero_and_match_rows():
    paths = null_paths(30, 20, seed=3)
    assert np.all(paths[:, 0] == 0.0)
    np.testing.assert_array_equal(paths[5], simulate_null(30, seed=3, index=5).values)


def test_increments_law_of_large_numbers():
    inc = np.diff(simulate_null(1000, seed=11).values)
    assert abs(inc.mean()) < 0.1
    assert abs(inc.var(ddof=1) - 1) < 0.15


def test_order_quantile_index():
    x = np.arange(1.0, 101.0)
    assert order_quantile(x, 0.95) == 95.0
    assert order_quantile(x, 0.951) == 96.0
    assert order_quantile(np.arange(1.0, 11.0), 0.9) == 9.0


@pytest.mark.parametrize("kind", ["SADF", "GSADF", "BSADF"])
def test_quantiles_strictly_increasing(kind):
    table = critical_values(kind, 40, replications=1000, seed=5)
    q = [table.quantiles[lv] for lv in DEFAULT_LEVELS]
    assert q[0] < q[1] < q[2]
    assert table.replications == 1000 and table.seed == 5


def test_seed_stability_at_2000():
    a = critical_values("SADF", 62, replications=2000, seed=1, levels=(0.95,))
    b = critical_values("SADF", 62, replications=2000, seed=2, levels=(0.95,))
    assert abs(a.quantiles[0.95] - b.quantiles[0.95]) < 0.15


def test_bsadf_sequence_shape_and_order():
    s90 = bsadf_cv_sequence(40, level=0.90, replications=1000, seed=5)
    s95 = bsadf_cv_sequence(40, level=0.95, replications=1000, seed=5)
    assert s95.size == 40 - 12 + 1
    assert np.all(s95 >= s90)
    gs = critical_values("GSADF", 40, replications=1000, seed=5)
    assert s95[-1] <= gs.quantiles[0.95]


def test_bsadf_prefix_consistency():
    # the endpoint-t2 column only sees the first t2 observations of each path
    seq = bsadf_cv_sequence(40, level=0.95, replications=1000, seed=5)
    short = bsadf_cv_sequence(30, level=0.95, replications=1000, seed=5)
    np.testing.assert_array_equal(seq[: short.size], short)


def test_sadf_only_path_matches_full_sweep():
    fast = null_draws(35, replications=1000, seed=9, full=False)
    full = null_draws(35, replications=1000, seed=9, full=True)
    np.testing.assert_allclose(fast.sadf, full.sadf, atol=1e-12)


def test_infeasible_requests():
    with pytest.raises(InfeasibleError):
        critical_values("SADF", 40, replications=999)
    with pytest.raises(InsufficientObservationsError):
        critical_values("SADF", 10, min_window_obs=12, replications=1000)
    with pytest.raises(InfeasibleError):
        critical_values("SADF", 40, min_window_obs=6, replications=1000, spec=AdfSpec(lags=3))
    with pytest.raises(ValueError):
        critical_values("SADF", 40, levels=(1.2,), replications=1000)


def test_cache_round_trip(tmp_path):
    cache = CriticalValueCache(tmp_path)
    assert cache.get("GSADF", 40, 12, 1000, 5) is None
    table = critical_values("GSADF", 40, replications=1000, seed=5)
    path = cache.put(table)
    back = cache.get("GSADF", 40, 12, 1000, 5)
    assert back == table
    assert read_table(path) == table


def test_cache_refuses_small_tables(tmp_path):
    t = CriticalValueTable("SADF", 40, 12, {0.95: 1.0}, 500, 1)
    with pytest.raises(ValueError):
        CriticalValueCache(tmp_path).put(t)


def test_cache_key_includes_spec(tmp_path):
    cache = CriticalValueCache(tmp_path)
    a = cache.path_for("SADF", 40, 12, 1000, 5)
    b = cache.path_for("SADF", 40, 12, 1000, 5, AdfSpec(lags=1))
    assert a != b and a.name == "SADF_T40_w12_r1000_s5.cvt"


def test_flipped_byte_recomputes(tmp_path, caplog):
    cache = CriticalValueCache(tmp_path)
    table = critical_values("SADF", 40, replications=1000, seed=5, cache=cache)
    path = cache.path_for("SADF", 40, 12, 1000, 5)
    raw = bytearray(path.read_bytes())
    i = raw.index(b'"quantiles"') + 20
    raw[i] = ord("7") if raw[i] != ord("7") else ord("3")
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheChecksumError):
        read_table(path)
    with caplog.at_level(logging.INFO, logger="radf"):
        again = critical_values("SADF", 40, replications=1000, seed=5, cache=cache)
    assert "corrupt" in caplog.text and "computed" in caplog.text
    assert again == table
    assert read_table(path) == table


def test_cache_hit_logged(tmp_path, caplog):
    critical_values("GSADF", 41, replications=1000, seed=5, cache=tmp_path)
    with caplog.at_level(logging.INFO, logger="radf"):
        t = critical_values("BSADF", 41, levels=(0.9,), replications=1000, seed=5, cache=tmp_path)
    assert "served from cache" in caplog.text
    assert t.levels == (0.9,) and len(t.sequence[0.9]) == 30
