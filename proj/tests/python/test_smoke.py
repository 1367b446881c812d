import math

import pytest

import riskrates as rr


def test_avar_two_point():
    law = rr.FiniteDiscrete([0.0, 1.0], [0.75, 0.25])
    assert rr.avar(law, 0.5) == pytest.approx(0.5, abs=1e-12)
    assert rr.evaluate(law, {"kind": "avar", "u": 0.5}) == pytest.approx(0.5, abs=1e-12)
    assert rr.sharpness_risk(law, 0.5) == pytest.approx(0.625, abs=1e-12)


def test_oce_matches_avar():
    law = rr.empirical([1.0, 2.0, 3.0, 4.0])
    oce = rr.evaluate(law, {"kind": "oce", "loss": {"name": "avar-loss", "u": 0.5}})
    assert oce == pytest.approx(3.5, abs=1e-8)


def test_oracles():
    assert rr.oracle.avar_pareto(2.0, 0.75) == pytest.approx(4.0)
    assert rr.oracle.avar_bernoulli(0.3, 0.5) == pytest.approx(0.6)
    assert rr.oracle.sharpness_two_point(0.25, 0.5) == pytest.approx(0.625)


def test_sample_is_deterministic():
    a = rr.sample({"kind": "pareto", "q": 2.0}, 100, seed=3)
    assert a == rr.sample({"kind": "pareto", "q": 2.0}, 100, seed=3)
    assert min(a) >= 1.0


def test_perfect_hedge():
    r = rr.hedged_risk([0.5, 0.5], [-0.5, 0.5], [[0.5], [-0.5]], {"kind": "avar", "u": 0.5},
                       {"kind": "box", "lo": [-2.0], "hi": [2.0]})
    assert abs(r["value"]) < 1e-8
    assert r["g_star"][0] == pytest.approx(1.0, abs=1e-6)


def test_utility_max():
    r = rr.utility_max([0.5, 0.5], [0.0, 0.0], [[1.0], [-0.5]], {"kind": "identity"},
                       {"kind": "box", "lo": [0.0], "hi": [1.0]})
    assert r["value"] == pytest.approx(0.25, abs=1e-8)


def test_probe():
    _, diverging = rr.unboundedness_probe([0.5, 0.5], [0.0, 0.0], [[-1.0], [-2.0]],
                                          {"kind": "avar", "u": 0.5}, [1.0])
    assert diverging


def test_rate_experiment():
    config = {
        "distribution": {"kind": "bernoulli", "p": 0.3},
        "risk": {"kind": "avar", "u": 0.0},
        "n_grid": [128, 512, 2048],
        "replications": 200,
        "epsilons": [0.05],
    }
    assert rr.true_value(config) == (pytest.approx(0.3), False)
    curve = rr.mean_error_curve(config)
    assert [n for n, _, _ in curve] == [128, 512, 2048]
    slope, _, _ = rr.fit_rate([(n, e) for n, e, _ in curve])
    assert -0.7 < slope < -0.3
    dev = rr.deviation_curve(config)
    assert dev[0][2] >= dev[-1][2]
    bias, se = rr.bias_report({**config, "replications": 200}, 64)
    assert abs(bias) <= 4 * se


def test_errors_map_to_exceptions():
    with pytest.raises(rr.DomainError):
        rr.avar(rr.FiniteDiscrete([0.0], [1.0]), 1.5)
    with pytest.raises(rr.SchemaError):
        rr.evaluate(rr.FiniteDiscrete([0.0], [1.0]), {"kind": "avar", "u": 0.5, "x": 1})
    with pytest.raises(rr.Error):
        rr.FiniteDiscrete([0.0, 1.0], [0.5, 0.6])
    assert math.isfinite(rr.sharpness_curve(0.5, [16, 64, 256], 50)[0][1])
