"""Smoke tests for the python bindings: a thin pass over each main operation."""

import math

import numpy as np
import pytest

import cfda

LN2 = math.log(2.0)


def unit_grid(t=21):
    return cfda.TimeGrid.uniform(0.0, 1.0, t)


def constant_composition(parts, t=21, id=""):
    grid = unit_grid(t)
    raw = np.tile(np.asarray(parts, dtype=float)[:, None], (1, t))
    return cfda.closure(grid, raw, pseudocount=0.0, id=id)


def test_grid_and_closure():
    grid = unit_grid(5)
    assert len(grid) == 5
    assert grid.weights.sum() == pytest.approx(1.0)

    f = constant_composition([2, 1, 1])
    assert f.parts[:, 0] == pytest.approx([0.5, 0.25, 0.25])


def test_clr_roundtrip_and_isometry():
    rng = np.random.default_rng(7)
    raw = np.exp(rng.normal(size=(4, 21)))
    f = cfda.closure(unit_grid(), raw, pseudocount=0.0)
    back = cfda.clr_inv(cfda.clr(f))
    np.testing.assert_allclose(back.parts, f.parts, atol=1e-10)

    g = cfda.power(0.5, f)
    assert cfda.inner_product(f, g) == pytest.approx(
        cfda.clr_inner_product(cfda.clr(f), cfda.clr(g)), abs=1e-12
    )


def test_rank_one_eigenstructure():
    f1 = constant_composition([2, 1, 1], id="f1")
    f2 = constant_composition([1, 2, 1], id="f2")
    mu = cfda.mean([f1, f2])
    centered = cfda.center([f1, f2], mu)
    eig = cfda.eigendecompose(cfda.covariance(centered), 5)
    assert eig.eigenvalues[0] == pytest.approx(LN2**2 / 2, abs=1e-10)

    sm = cfda.scores(centered, eig, 1)
    assert abs(sm.values[0, 0]) == pytest.approx(LN2 / math.sqrt(2), abs=1e-10)

    rec = cfda.reconstruct(mu, eig, sm.values[0], 1)
    np.testing.assert_allclose(rec.parts, f1.parts, atol=1e-8)


def test_smoothing_and_imputation():
    cfg = cfda.SmoothingConfig(basis_dimension=10, penalty_order=2)
    f = constant_composition([5, 2, 3], t=30)
    smoothed = cfda.smooth_composition(f, cfg)
    np.testing.assert_allclose(smoothed.parts, f.parts, atol=1e-8)

    sample = [constant_composition([5, 2, 3], t=30, id=f"c{i}") for i in range(6)]
    masks = [cfda.MissingMask(f"c{i}", [False] * 30) for i in range(6)]
    masks[0] = cfda.MissingMask("c0", [i == 4 for i in range(30)])
    completed = cfda.impute_missing(sample, masks)
    np.testing.assert_allclose(completed[0].parts[:, 4], f.parts[:, 4], atol=1e-6)


def test_clustering_two_blobs():
    pts = np.vstack([np.zeros((5, 2)), np.full((5, 2), 10.0)])
    sm = cfda.ScoreMatrix(pts, [f"p{i}" for i in range(10)])
    graph = cfda.similarity(sm, 1.0)
    result = cfda.majority_vote(graph, 2, 25, 42)
    assert result.labels[:5] == [1] * 5
    assert result.labels[5:] == [2] * 5
    assert result.vote_share == 1.0
    assert result.silhouette_mean == pytest.approx(1.0)

    mean_s, per_point = cfda.silhouette(pts, result.labels)
    assert mean_s == pytest.approx(1.0)
    assert len(per_point) == 10


def test_errors_are_typed():
    with pytest.raises(cfda.DataError):
        cfda.closure(unit_grid(2), -np.ones((2, 2)))
    with pytest.raises(cfda.ConfigError):
        cfda.SmoothingConfig(basis_dimension=2)
