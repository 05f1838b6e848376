"""Stochastic embeddings into trees and the induced linear map into l1."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidEmbedding, InvalidSize, NonBijectiveComponents
from .frt import _map_ordered, component_rng, sample_frt_tree
from .gupta import gupta_restrict
from .metric import FiniteMetricSpace, cycle_graph, geodesic_metric
from .transport import ZeroSumMeasure, tc_norm
from .trees import RootedWeightedTree

__all__ = [
    "StochasticTreeEmbedding",
    "L1EmbeddingMap",
    "cycle_path_embedding",
    "bijective_embedding",
    "build_l1_map",
    "measure_distortion",
]


@dataclass(frozen=True, eq=False)
class StochasticTreeEmbedding:
    """Probability distribution over expansive maps of ``base`` into trees.

    ``components`` holds ``(p, tree, vertex_map)`` triples where
    ``vertex_map[x]`` is the tree vertex receiving base point ``x``.
    """

    base: FiniteMetricSpace
    components: tuple

    def __post_init__(self):
        comps = []
        for p, tree, vm in self.components:
            vm = np.array(vm, dtype=np.int64)
            if vm.shape != (self.base.n,) or vm.min() < 0 or vm.max() >= tree.n:
                raise InvalidEmbedding("vertex map must send every base point to a tree vertex")
            if not p > 0:
                raise InvalidEmbedding("component probabilities must be positive")
            vm.setflags(write=False)
            comps.append((float(p), tree, vm))
        if not comps:
            raise InvalidEmbedding("an embedding needs at least one component")
        total = sum(p for p, _, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise InvalidEmbedding(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "components", tuple(comps))
        d = self.base.dist
        for i, D in enumerate(self.component_distances):
            if np.any(D < d * (1 - 1e-9) - 1e-12):
                x, y = np.argwhere(D < d * (1 - 1e-9) - 1e-12)[0]
                raise InvalidEmbedding(f"component {i} contracts the pair ({x}, {y})")

    def __len__(self):
        return len(self.components)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _, _ in self.components])

    @cached_property
    def component_distances(self) -> tuple:
        """Per component, the pulled-back tree metric on the base points."""
        out = []
        for _, tree, vm in self.components:
            out.append(tree.distance_matrix()[np.ix_(vm, vm)])
        return tuple(out)

    def expected_distance(self) -> np.ndarray:
        return sum(p * D for (p, _, _), D in zip(self.components, self.component_distances))

    def stretch(self) -> np.ndarray:
        """Mean stretch ``E d_i(x, y) / d(x, y)`` (ones on the diagonal)."""
        d = self.base.dist
        off = ~np.eye(self.base.n, dtype=bool)
        return np.where(off, self.expected_distance() / np.where(off, d, 1.0), 1.0)

    def max_stretch(self) -> float:
        """Empirical distortion: the largest mean pair stretch."""
        return float(self.stretch().max())

    def is_bijective(self) -> bool:
        return all(tree.n == self.base.n and len(set(vm.tolist())) == self.base.n for _, tree, vm in self.components)

    def is_canonical(self, tol: float = 1e-9) -> bool:
        """Bijective with every tree edge weighted by the base distance of its ends."""
        if not self.is_bijective():
            return False
        d = self.base.dist
        for _, tree, vm in self.components:
            inv = np.empty(tree.n, dtype=np.int64)
            inv[vm] = np.arange(self.base.n)
            for u, v, w in tree.edge_list():
                if abs(w - d[inv[u], inv[v]]) > tol * max(1.0, w):
                    return False
        return True


def cycle_path_embedding(n: int) -> StochasticTreeEmbedding:
    """The ``n`` paths obtained by deleting one edge of the cycle, each with probability ``1/n``.

    Component ``j`` drops the edge ``{j - 1, j}`` (indices mod ``n``).

    Examples
    --------
    >>> emb = cycle_path_embedding(4)
    >>> float(emb.stretch()[0, 1])
    1.5
    """
    if n < 3:
        raise InvalidSize("cycle needs n >= 3")
    base = geodesic_metric(cycle_graph(n))
    comps = []
    for j in range(n):
        edges = [(i, (i + 1) % n, 1.0) for i in range(n) if (i + 1) % n != j]
        comps.append((1.0 / n, RootedWeightedTree.from_edges(n, edges, 0), np.arange(n)))
    return StochasticTreeEmbedding(base, tuple(comps))


def _bijective_component(space: FiniteMetricSpace, rng) -> RootedWeightedTree:
    _, tree, leaf_map = sample_frt_tree(space, rng)
    restricted, kept = gupta_restrict(tree, leaf_map)
    point_of = {int(v): x for x, v in enumerate(leaf_map)}
    d = space.dist
    edges = []
    for u, v, _ in restricted.edge_list():
        a, b = point_of[kept[u]], point_of[kept[v]]
        edges.append((a, b, float(d[a, b])))
    return RootedWeightedTree.from_edges(space.n, edges, space.base_point)


def bijective_embedding(space: FiniteMetricSpace, n_samples: int, seed: int = 0, threads: int = 1) -> StochasticTreeEmbedding:
    """Sample trees whose vertex sets are exactly the base points.

    Each component is a sampled level tree restricted to its leaves, relabelled
    by the base points and reweighted so that every edge ``{u, v}`` has weight
    ``d(u, v)``. Components are equally likely and depend only on ``seed``.
    """
    if n_samples < 1:
        raise InvalidSize("n_samples must be >= 1")
    trees = _map_ordered(lambda i: _bijective_component(space, component_rng(seed, i)), range(n_samples), threads)
    ident = np.arange(space.n)
    p = 1.0 / n_samples
    return StochasticTreeEmbedding(space, tuple((p, t, ident) for t in trees))


@dataclass(frozen=True, eq=False)
class L1EmbeddingMap:
    """Linear map sending a measure to coordinates ``p_i w_e mu(T_e)``.

    ``matrix`` has one row per ``(component, edge)`` listed in ``index``
    (edges named by their child vertex) and one column per base point.
    """

    embedding: StochasticTreeEmbedding
    matrix: np.ndarray
    index: tuple

    def __call__(self, mu) -> np.ndarray:
        return self.matrix @ _as_vector(self.embedding.base, mu)

    def norm(self, mu) -> float:
        return float(np.abs(self(mu)).sum())


def _as_vector(space, mu) -> np.ndarray:
    if isinstance(mu, ZeroSumMeasure):
        return mu.as_array()
    return np.asarray(mu, dtype=float)


def build_l1_map(embedding: StochasticTreeEmbedding) -> L1EmbeddingMap:
    """Assemble the map whose l1 norm averages the tree norms of the components.

    Raises
    ------
    NonBijectiveComponents
        Some vertex map sends two points to the same vertex.
    """
    blocks = []
    index = []
    for i, (p, tree, vm) in enumerate(embedding.components):
        if len(set(vm.tolist())) != len(vm):
            raise NonBijectiveComponents(f"component {i} is not injective")
        E = tree.ancestor_matrix()[vm]  # E[x, c] = 1 when f(x) lies below edge c
        edges = [c for c in range(tree.n) if c != tree.root]
        blocks.append(p * tree.weight[edges, None] * E[:, edges].T)
        index += [(i, c) for c in edges]
    matrix = np.vstack(blocks) if blocks else np.zeros((0, embedding.base.n))
    return L1EmbeddingMap(embedding, matrix, tuple(index))


def measure_distortion(phi: L1EmbeddingMap, measures) -> tuple[dict, list]:
    """Compare ``||Phi(mu)||_1`` with ``||mu||_tc`` for each measure.

    Returns
    -------
    report : dict
        ``ratios`` plus their ``min``, ``max`` and ``mean``.
    rows : list of tuple
        ``(measure_id, tc_norm, l1_norm, ratio)`` per measure.
    """
    rows = []
    for k, mu in enumerate(measures):
        tc = tc_norm(mu)[0]
        l1 = phi.norm(mu)
        rows.append((k, tc, l1, l1 / tc if tc > 0 else 1.0))
    ratios = np.array([r[3] for r in rows])
    report = {
        "count": len(rows),
        "ratios": ratios.tolist(),
        "min": float(ratios.min()) if rows else None,
        "max": float(ratios.max()) if rows else None,
        "mean": float(ratios.mean()) if rows else None,
    }
    return report, rows
