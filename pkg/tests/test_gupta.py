import itertools

import numpy as np
import pytest

from transcost.errors import EmptyKeepSet, InvalidTree
from transcost.gupta import _distances, _leaf_case, gupta_edges, gupta_restrict
from transcost.metric import random_tree
from transcost.trees import RootedWeightedTree


def _ratios(tree, keep):
    out, kept = gupta_restrict(tree, keep)
    D = tree.distance_matrix()[np.ix_(kept, kept)]
    Dp = out.distance_matrix()
    off = ~np.eye(len(kept), dtype=bool)
    return (Dp[off] / D[off]) if off.any() else np.array([1.0])


def test_keep_all_is_identity():
    t = RootedWeightedTree.from_graph(random_tree(10, seed=2))
    out, kept = gupta_restrict(t, range(10))
    np.testing.assert_allclose(out.distance_matrix(), t.distance_matrix())


def test_star_leaves():
    t = RootedWeightedTree.from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)])
    out, kept = gupta_restrict(t, [1, 2, 3])
    assert kept == (1, 2, 3) and out.n == 3
    r = _ratios(t, [1, 2, 3])
    assert r.min() >= 0.25 - 1e-9 and r.max() <= 2 + 1e-9


def test_path_interior_removed():
    # r0 = 1 from the removed middle vertex, so the glued edge is 2 - 1/2
    t = RootedWeightedTree.from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)])
    out, _ = gupta_restrict(t, [0, 2])
    assert out.distance_matrix()[0, 1] == pytest.approx(1.5)


def test_single_keep():
    t = RootedWeightedTree.from_graph(random_tree(6, seed=0))
    out, kept = gupta_restrict(t, [4])
    assert out.n == 1 and kept == (4,)


def test_errors():
    t = RootedWeightedTree.from_graph(random_tree(5, seed=0))
    with pytest.raises(EmptyKeepSet):
        gupta_restrict(t, [])
    with pytest.raises(InvalidTree):
        gupta_restrict(t, [7])


def test_random_instances_within_bounds():
    rng = np.random.default_rng(7)
    for s in range(300):
        n = int(rng.integers(2, 30))
        t = RootedWeightedTree.from_graph(random_tree(n, seed=s))
        keep = rng.choice(n, int(rng.integers(1, n + 1)), replace=False)
        r = _ratios(t, keep)
        assert r.min() >= 0.25 - 1e-9 and r.max() <= 2 + 1e-9


def test_leaf_keep_sets():
    # keep exactly the leaves, the case arising from level trees
    rng = np.random.default_rng(11)
    for s in range(100):
        t = RootedWeightedTree.from_graph(random_tree(int(rng.integers(3, 25)), seed=100 + s))
        leaves = [v for v in range(t.n) if len(t.to_graph().adjacency()[v]) == 1]
        r = _ratios(t, leaves)
        assert r.min() >= 0.25 - 1e-9 and r.max() <= 2 + 1e-9


def test_leaf_case_representative_invariant():
    # d'(x, v0) <= 2 d(x, x0) - r0 for every kept x
    rng = np.random.default_rng(3)
    checked = 0
    for s in range(200):
        t = RootedWeightedTree.from_graph(random_tree(int(rng.integers(3, 20)), seed=500 + s))
        adj = {v: {} for v in range(t.n)}
        for u, v, w in t.edge_list():
            adj[u][v] = w
            adj[v][u] = w
        keep = {v for v in adj if len(adj[v]) == 1}
        others = [v for v in adj if v not in keep]
        if not others:
            continue
        x0 = others[0]
        edges, v0 = _leaf_case(adj, keep, x0, itertools.count(t.n))
        d, _ = _distances(adj, x0)
        r0 = min(d[v] for v in keep)
        sub = {v: {} for v in keep}
        for u, v, w in edges:
            sub.setdefault(u, {})[v] = w
            sub.setdefault(v, {})[u] = w
        dp, _ = _distances(sub, v0)
        for x in keep:
            assert dp[x] <= 2 * d[x] - r0 + 1e-9 * (1 + d[x])
        checked += 1
    assert checked > 50


def test_edges_on_adjacency_dict():
    adj = {0: {1: 1.0}, 1: {0: 1.0, 2: 1.0}, 2: {1: 1.0}}
    edges = gupta_edges(adj, {0, 2})
    assert len(edges) == 1 and {edges[0][0], edges[0][1]} == {0, 2}
    assert edges[0][2] == pytest.approx(0.5)
