import json
from math import comb

import numpy as np
import pytest

from radf.dgp import DgpSpec, explosive_ar, generate, generate_draw, random_walk, spliced
from radf.errors import DgpSpecError
from radf.series import Month


def test_zero_noise_geometric():
    s = generate(DgpSpec("explosive-ar", 5, params={"beta": 1.05, "p0": 1.0}, noise=False))
    np.testing.assert_allclose(s.values, [1, 1.05, 1.1025, 1.157625, 1.21550625], rtol=1e-15)


def test_zero_noise_random_walk_is_flat():
    s = generate(DgpSpec("random-walk", 10, noise=False))
    assert np.all(s.values == 100.0)


def test_splice_contract():
    s = spliced(120, 60, 80, seed=42)
    rw = random_walk(120, seed=42)
    assert s.values[:60].tobytes() == rw.values[:60].tobytes()
    assert not np.array_equal(s.values[60:], rw.values[60:])


def test_spliced_zero_noise_growth():
    params = {"p0": 1.0, "segments": [{"start": 3, "end": 6, "beta": 2.0}]}
    s = generate(DgpSpec("spliced", 10, params=params, noise=False))
    np.testing.assert_array_equal(s.values, [1, 1, 1, 2, 4, 8, 8, 8, 8, 8])


@pytest.mark.parametrize("kind", ["random-walk", "explosive-ar", "collapsing-bubble", "spliced"])
def test_deterministic_under_seed(kind):
    a = generate(DgpSpec(kind, 150, seed=9))
    b = generate(DgpSpec(kind, 150, seed=9))
    assert a.values.tobytes() == b.values.tobytes()
    assert len(a) == 150 and a.start == Month(2000, 1)


def test_collapse_counts():
    # collapses are Bernoulli(0.05) over 399 transitions
    n, q = 399, 0.05
    p_in = sum(comb(n, k) * q**k * (1 - q) ** (n - k) for k in range(5, 41))
    assert p_in > 0.999
    counts = [generate_draw(DgpSpec("collapsing-bubble", 400, seed=s)).n_collapses for s in range(100)]
    assert sum(5 <= c <= 40 for c in counts) >= 95


def test_collapsing_bubble_positive():
    for s in range(20):
        draw = generate_draw(DgpSpec("collapsing-bubble", 300, seed=s))
        assert np.all(draw.series.values > 0)
        assert np.all(draw.bubble > 0)


@pytest.mark.parametrize(
    "kind,params",
    [
        ("explosive-ar", {"beta": 0.9}),
        ("random-walk", {"sigma": -1}),
        ("collapsing-bubble", {"collapse_prob": 1.5}),
        ("collapsing-bubble", {"growth": 0.99}),
        ("spliced", {"segments": [{"start": 50, "end": 130, "beta": 1.05}]}),
        ("spliced", {"segments": [{"start": 10, "end": 30}, {"start": 20, "end": 40}]}),
        ("random-walk", {"beta": 1.05}),
    ],
)
def test_invalid_params(kind, params):
    with pytest.raises(DgpSpecError):
        DgpSpec(kind, 120, params=params)


def test_unknown_kind_and_bad_T():
    with pytest.raises(DgpSpecError):
        DgpSpec("garch", 100)
    with pytest.raises(DgpSpecError):
        DgpSpec("random-walk", 1)


def test_from_file(tmp_path):
    path = tmp_path / "dgp.json"
    path.write_text(json.dumps({"kind": "spliced", "T": 120, "seed": 4, "start": "2007-12", "label": "pr"}))
    spec = DgpSpec.from_file(path)
    assert spec.start == Month(2007, 12) and spec.params["segments"][0]["start"] == 60
    assert generate(spec).label == "pr"
    path.write_text("{not json")
    with pytest.raises(DgpSpecError):
        DgpSpec.from_file(path)
    with pytest.raises(DgpSpecError):
        DgpSpec.from_dict({"T": 10})
    with pytest.raises(DgpSpecError):
        DgpSpec.from_dict({"kind": "random-walk", "T": 10, "colour": "red"})


def test_explosive_ar_grows():
    s = explosive_ar(100, 1.05, seed=1)
    assert s.values[-1] > 50 * s.values[0]
