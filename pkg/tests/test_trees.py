import numpy as np
import pytest

from oracles import floyd_warshall, subtree_sets
from transcost.errors import EdgeNotInTree, InvalidTree, SizeMismatch
from transcost.metric import geodesic_metric, random_tree
from transcost.transport import ZeroSumMeasure, random_measure, tc_norm
from transcost.trees import (
    RootedWeightedTree,
    subtree_mass,
    subtree_masses,
    tree_isometry,
    tree_tc_norm,
    vertex_embedding,
    weighted_l1,
)


@pytest.fixture
def star():
    return RootedWeightedTree.from_edges(4, [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)])


class TestStructure:
    def test_rejects_cycle(self):
        with pytest.raises(InvalidTree):
            RootedWeightedTree(3, 0, [-1, 2, 1], [0, 1, 1])

    def test_rejects_two_roots(self):
        with pytest.raises(InvalidTree):
            RootedWeightedTree(3, 0, [-1, -1, 0], [0, 1, 1])

    def test_rejects_bad_weight(self):
        with pytest.raises(InvalidTree):
            RootedWeightedTree(2, 0, [-1, 0], [0, 0])

    def test_rejects_wrong_edge_count(self):
        with pytest.raises(InvalidTree):
            RootedWeightedTree.from_edges(3, [(0, 1, 1.0)])

    def test_disconnected_edges(self):
        with pytest.raises(InvalidTree):
            RootedWeightedTree.from_edges(4, [(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0)])

    def test_from_parents_finds_root(self):
        t = RootedWeightedTree.from_parents([1, None, 1], [1.0, None, 2.0])
        assert t.root == 1 and t.children[1] == (0, 2)

    def test_single_vertex(self):
        t = RootedWeightedTree(1, 0, [-1], [0])
        assert t.distance_matrix().tolist() == [[0.0]]
        assert tree_tc_norm(t, [0.0]) == 0.0

    def test_edge_naming(self, star):
        assert star._edge((0, 2)) == 2
        assert star._edge(3) == 3
        with pytest.raises(EdgeNotInTree):
            star._edge((1, 2))
        with pytest.raises(EdgeNotInTree):
            star._edge(0)

    def test_rerooted(self, star):
        t = star.rerooted(2)
        np.testing.assert_array_equal(t.distance_matrix(), star.distance_matrix())
        assert t.root == 2

    def test_distances_match_floyd_warshall(self):
        for s in range(10):
            g = random_tree(25, seed=s)
            t = RootedWeightedTree.from_graph(g, root=s % 25)
            np.testing.assert_allclose(t.distance_matrix(), floyd_warshall(25, g.edges), atol=1e-12)


class TestClosedForm:
    def test_doc_example(self):
        t = RootedWeightedTree.from_edges(3, [(0, 1, 2.0), (0, 2, 3.0)])
        assert tree_tc_norm(t, {1: 1.0, 2: -1.0}) == 5.0

    def test_subtree_masses_match_sets(self, rng):
        for s in range(5):
            t = RootedWeightedTree.from_graph(random_tree(15, seed=s), root=3)
            mu = rng.normal(size=15)
            masses = subtree_masses(t, mu)
            for c, members in subtree_sets(t.parent.tolist(), t.root).items():
                assert masses[c] == pytest.approx(sum(mu[v] for v in members), abs=1e-12)
                assert subtree_mass(t, mu, (int(t.parent[c]), c)) == pytest.approx(masses[c])

    def test_matches_flow_solver(self, rng):
        for s in range(40):
            g = random_tree(int(rng.integers(2, 30)), seed=s)
            t = RootedWeightedTree.from_graph(g, root=int(rng.integers(g.n)))
            mu = random_measure(geodesic_metric(g), rng)
            assert tree_tc_norm(t, mu) == pytest.approx(tc_norm(mu)[0], rel=1e-9)

    def test_isometry(self, rng):
        t = RootedWeightedTree.from_graph(random_tree(12, seed=1))
        mu = random_measure(t.metric(), rng)
        assert weighted_l1(t, subtree_masses(t, mu) * (np.arange(12) != t.root)) == pytest.approx(tree_tc_norm(t, mu))
        assert np.abs(tree_isometry(t, mu)).sum() == pytest.approx(tree_tc_norm(t, mu))

    def test_vertex_embedding_differences(self):
        t = RootedWeightedTree.from_graph(random_tree(10, seed=4))
        D = t.distance_matrix()
        for x in range(10):
            for y in range(10):
                diff = vertex_embedding(t, x) - vertex_embedding(t, y)
                assert weighted_l1(t, diff) == pytest.approx(D[x, y], abs=1e-12)

    def test_root_independent(self, rng):
        g = random_tree(14, seed=9)
        mu = rng.normal(size=14)
        mu -= mu.mean()
        values = {tree_tc_norm(RootedWeightedTree.from_graph(g, root=r), mu) for r in range(14)}
        assert max(values) - min(values) < 1e-9

    def test_size_mismatch(self, star):
        with pytest.raises(SizeMismatch):
            tree_tc_norm(star, [1.0, -1.0])
        other = geodesic_metric(random_tree(5, seed=0))
        with pytest.raises(SizeMismatch):
            tree_tc_norm(star, ZeroSumMeasure.molecule(other, 0, 1))
