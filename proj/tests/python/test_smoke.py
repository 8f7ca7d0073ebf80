"""Smoke tests for the python bindings: a thin pass over every bound surface."""

import math

import numpy as np
import pytest

import maxstab as ms


def make_grid(n=21, dim=1):
    rect = ms.Hyperrectangle(np.ones(dim))
    return rect, ms.regular_grid(rect, [n] * dim)


def test_constants():
    assert ms.gneiting_constant(1.0, 1) == pytest.approx(1.0, abs=1e-12)
    assert ms.gneiting_constant(1.0, 2) == pytest.approx(math.pi / 2, abs=1e-12)
    assert ms.scale_for_target_variance(1.0, 0.5) == pytest.approx(1.0, abs=1e-12)
    assert ms.scale_for_target_variance(0.7, 0.5) == pytest.approx(0.818, abs=5e-4)


def test_variogram_eval():
    v = ms.Variogram(1.0, 1.0)
    assert v(np.array([2.0])) == pytest.approx(2.0)
    assert v(np.array([0.0])) == 0.0
    with pytest.raises(ValueError):
        ms.Variogram(2.5, 1.0)


def test_grid_and_measures():
    rect, grid = make_grid(5)
    assert grid.size == 5 and grid.dim == 1
    m = ms.uniform_vertex_measure(grid, rect)
    assert m.weights[0] == pytest.approx(0.5)
    assert ms.dirac_measure(grid, 2).weights[2] == 1.0
    assert len(ms.vertices(rect)) == 2


def test_representations_and_minmax():
    rect, grid = make_grid(21)
    v = ms.Variogram(1.3, 1.0)
    lam = ms.covariance_from_measure(v, grid, ms.uniform_vertex_measure(grid, rect))
    assert lam.provenance == "lambda_modified"
    value, index = ms.max_variance(lam)
    assert value == pytest.approx(2 ** (1.3 - 2.0), rel=1e-12)

    orig = ms.covariance_from_measure(v, grid, ms.dirac_measure(grid, grid.find_point(np.zeros(1))))
    assert orig.provenance == "original"
    assert ms.max_variance(orig)[0] >= value

    weights, opt_value, gap, _ = ms.solve_min_max_measure(v, grid, tol=1e-8)
    assert opt_value == pytest.approx(value, rel=1e-6)
    assert weights.sum() == pytest.approx(1.0)

    kstat = ms.k_stationary_covariance(v, grid, 1.0)
    assert kstat.provenance == "k_stationary"
    assert np.allclose(kstat.variance_profile, kstat.variance_profile[0])


def test_sampling_and_stopping():
    rect, grid = make_grid(11)
    v = ms.Variogram(1.0, 1.0)
    rep = ms.covariance_from_measure(v, grid, ms.uniform_vertex_measure(grid, rect))
    rng = ms.RngStream(20240817, 1)
    w = ms.sample_gaussian(rep, rng)
    assert w.shape == (11,)
    spec = ms.log_gaussian_spectral(rep, rng)
    assert (spec > 0).all()

    sampler = ms.log_gaussian_sampler(rep)
    field = ms.threshold_stopping(sampler, 5.0, rng)
    assert field.T >= 1 and (field.values > 0).all()

    const = ms.constant_sampler(4)
    cfield = ms.threshold_stopping(const, 1.0, ms.RngStream(1, 2))
    assert cfield.T == 1

    ef, draws = ms.extremal_functions_simulate(rep, ms.equispaced_subset(11, 3), rng)
    assert draws >= 1 and (ef > 0).all()


def test_reproducibility():
    rect, grid = make_grid(7)
    v = ms.Variogram(0.7, 1.0)
    rep = ms.covariance_from_measure(v, grid, ms.uniform_vertex_measure(grid, rect))
    a = ms.sample_gaussian(rep, ms.RngStream(99, 5))
    b = ms.sample_gaussian(rep, ms.RngStream(99, 5))
    assert (a == b).all()


def test_error_probability_hand_value():
    z = np.array([[1.0], [2.0]])
    pool = np.array([[0.5], [1.5]])
    p, se = ms.error_probability(z, pool, 1.0)
    expected = 1 - 0.5 * (math.exp(-0.25) + math.exp(-0.125))
    assert p == pytest.approx(expected, abs=1e-12)


def test_run_scenario_smoke():
    config = """{
      "id": "smoke", "alpha": 1.0, "sigma2_K": 0.5, "dim": 1,
      "half_widths": [1.0], "counts": [11],
      "algorithms": ["lambda_modified"],
      "n_Z": 100, "n_V": 100, "seed": 3, "anchor_tau": 3.0
    }"""
    out = ms.run_scenario_json(config)
    row = out["rows"][0]
    assert row["algorithm"] == "lambda_modified"
    assert 0.0 <= row["Phat"] <= 1.0
    assert row["ET_mean"] >= 1.0
