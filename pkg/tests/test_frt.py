import numpy as np
import pytest

from transcost.errors import InvalidParameters, InvalidSize
from transcost.frt import (
    component_rng,
    estimate_expected_stretch,
    frt_leaf_distances,
    frt_scale,
    retention_bound,
    retention_probability,
    sample_frt_partition,
    sample_frt_tree,
)
from transcost.metric import cycle_graph, diameter, geodesic_metric, torus_graph, validate_metric

from oracles import random_points_metric


def test_two_point_example():
    M = validate_metric([[0, 1.5], [1.5, 0]])
    hp, tree, leaf = sample_frt_tree(M, np.random.default_rng(0))
    assert hp.k == 1
    assert tree.distance_matrix()[leaf[0], leaf[1]] == 2.0


def test_scale_small_distances():
    M = validate_metric([[0, 0.1], [0.1, 0]])
    scale, k = frt_scale(M)
    assert scale * 0.1 > 1
    assert scale * 0.1 < 2**k


def test_partition_covers_and_bounds_diameter(rng):
    M = geodesic_metric(torus_graph(6))
    for R in (1.5, 3.0, 6.0):
        clusters = sample_frt_partition(M, R, rng)
        assert sorted(x for B in clusters for x in B) == list(range(36))
        for B in clusters:
            assert diameter(M, set(B)) < R


def test_partition_rejects_bad_radius(rng):
    with pytest.raises(InvalidParameters):
        sample_frt_partition(geodesic_metric(cycle_graph(4)), 0.0, rng)


def test_hierarchy_is_nested(rng):
    M = validate_metric(random_points_metric(rng, 20))
    hp, tree, leaf = sample_frt_tree(M, rng)
    assert hp.levels[0] == (tuple(range(20)),)
    assert all(len(B) == 1 for B in hp.levels[-1])
    for j in range(1, hp.k + 1):
        for B in hp.levels[j]:
            assert len({hp.labels[j - 1, x] for x in B}) == 1
    assert len(set(leaf.tolist())) == 20


def test_leaf_formula_matches_tree(rng):
    M = validate_metric(random_points_metric(rng, 15))
    for _ in range(5):
        hp, tree, leaf = sample_frt_tree(M, rng)
        D = tree.distance_matrix()[np.ix_(leaf, leaf)]
        np.testing.assert_allclose(frt_leaf_distances(hp), D, rtol=1e-12)
        assert np.all(D >= M.dist * (1 - 1e-9))


def test_stretch_estimate_bound():
    M = geodesic_metric(cycle_graph(16))
    est = estimate_expected_stretch(M, 50, seed=1)
    assert est["n_samples"] == 50
    assert est["max_mean"] <= 96 * np.log(16) + 96
    assert est["mean"].shape == (16, 16)
    assert np.all(np.diag(est["mean"]) == 0)


def test_stretch_threads_identical():
    M = geodesic_metric(cycle_graph(10))
    a = estimate_expected_stretch(M, 20, seed=3, threads=1)
    b = estimate_expected_stretch(M, 20, seed=3, threads=4)
    assert np.array_equal(a["mean"], b["mean"]) and a["max_sample"] == b["max_sample"]


def test_component_streams_differ():
    assert component_rng(0, 0).random() != component_rng(0, 1).random()
    assert component_rng(5, 2).random() == component_rng(5, 2).random()


def test_zero_samples():
    with pytest.raises(InvalidSize):
        estimate_expected_stretch(geodesic_metric(cycle_graph(4)), 0)


def test_retention_respects_bound():
    M = geodesic_metric(cycle_graph(8))
    p, se = retention_probability(M, 4.0, 0.5, 2000, seed=0)
    assert np.all(p >= retention_bound(M, 4.0, 0.5) - 3 * se)
