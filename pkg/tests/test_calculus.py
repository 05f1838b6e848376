import numpy as np
import pytest

from oracles import all_simple_paths
from transcost.calculus import (
    VectorField,
    edge_stretch_constant,
    extend_integral_operator,
    gradient,
    integral_operator,
    is_conservative,
    lex_shortest_path,
    line_integral,
    vertex_lip,
)
from transcost.embedding import bijective_embedding, cycle_path_embedding
from transcost.errors import EmbeddingNotCanonical, NotAWalk, NotConservative, PathMismatch, SizeMismatch
from transcost.frt import sample_frt_tree
from transcost.embedding import StochasticTreeEmbedding
from transcost.metric import cycle_graph, geodesic_metric, random_tree, torus_graph


@pytest.fixture
def c8():
    g = cycle_graph(8)
    return g, geodesic_metric(g)


def test_antisymmetry(c8):
    g, M = c8
    f = VectorField.from_edges(g, [(1, 0, 2.0)], M)
    assert f(0, 1) == -2.0 and f(1, 0) == 2.0
    with pytest.raises(NotAWalk):
        f(0, 2)


def test_size_mismatch(c8):
    g, M = c8
    with pytest.raises(SizeMismatch):
        VectorField(g, M, np.zeros(3))


def test_gradient_then_integral_recovers_function(c8, rng):
    g, M = c8
    F = rng.normal(size=8)
    F -= F[0]
    np.testing.assert_allclose(integral_operator(gradient(F, g, M)), F, atol=1e-12)


def test_integral_then_gradient_is_identity(rng):
    for s in range(20):
        g = torus_graph(4) if s % 2 else random_tree(12, seed=s)
        M = geodesic_metric(g)
        f = gradient(rng.normal(size=g.n), g, M)
        back = gradient(integral_operator(f), g, M)
        np.testing.assert_allclose(back.values, f.values, atol=1e-9)


def test_cycle_field_not_conservative(c8):
    g, M = c8
    f = VectorField.from_edges(g, [(i, (i + 1) % 8, 1.0) for i in range(8)], M)
    assert not is_conservative(f)
    assert line_integral(f, list(range(8)) + [0]) == pytest.approx(8.0)
    with pytest.raises(NotConservative):
        integral_operator(f)


def test_trees_always_conservative(rng):
    g = random_tree(15, seed=3)
    f = VectorField(g, geodesic_metric(g), rng.normal(size=14))
    assert is_conservative(f)


def test_line_integral_rejects_jump(c8):
    g, M = c8
    f = VectorField(g, M, np.ones(8))
    with pytest.raises(NotAWalk):
        line_integral(f, [0, 2])


def test_lex_shortest_path(c8):
    g, M = c8
    assert lex_shortest_path(g, M, 0, 4) == [0, 1, 2, 3, 4]
    tg = torus_graph(4)
    TM = geodesic_metric(tg)
    adj = tg.adjacency()
    for y in range(16):
        shortest = [p for p in all_simple_paths(adj, 0, y) if len(p) - 1 == TM.d(0, y)]
        assert lex_shortest_path(tg, TM, 0, y) == min(shortest)


def test_extension_matches_on_conservative(rng):
    g = torus_graph(4)
    M = geodesic_metric(g)
    emb = bijective_embedding(M, 10, seed=0)
    for _ in range(10):
        f = gradient(rng.normal(size=16), g, M)
        np.testing.assert_allclose(extend_integral_operator(f, emb), integral_operator(f), atol=1e-9)


def test_extension_lip_bound(c8, rng):
    g, M = c8
    emb = cycle_path_embedding(8)
    D = edge_stretch_constant(emb, g)
    assert D == pytest.approx(2 * 7 / 8)
    for _ in range(20):
        f = VectorField(g, M, rng.uniform(-1, 1, 8))
        ext = extend_integral_operator(f, emb)
        assert ext[0] == 0
        assert vertex_lip(ext, g, M) <= D * f.sup_norm() + 1e-9


def test_extension_path_choice(rng):
    g = torus_graph(4)
    M = geodesic_metric(g)
    emb = bijective_embedding(M, 5, seed=1)
    f = VectorField(g, M, rng.normal(size=len(g.edges)))
    default = extend_integral_operator(f, emb)
    same = extend_integral_operator(f, emb, lambda x, y: lex_shortest_path(g, M, x, y))
    np.testing.assert_array_equal(default, same)
    with pytest.raises(PathMismatch):
        extend_integral_operator(f, emb, lambda x, y: [x, y] if x != y else [x])


def test_extension_rejects_non_canonical(c8, rng):
    g, M = c8
    _, tree, leaf = sample_frt_tree(M, rng)
    emb = StochasticTreeEmbedding(M, ((1.0, tree, leaf),))
    with pytest.raises(EmbeddingNotCanonical):
        extend_integral_operator(VectorField(g, M, np.ones(8)), emb)


def test_c3_circulation_bound():
    g = cycle_graph(3)
    M = geodesic_metric(g)
    emb = cycle_path_embedding(3)
    f = VectorField.from_edges(g, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], M)
    assert edge_stretch_constant(emb, g) == pytest.approx(4 / 3)
    assert vertex_lip(extend_integral_operator(f, emb), g, M) <= 4 / 3 + 1e-12
