"""Vector fields on graphs: gradients, line integrals and integral operators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .embedding import StochasticTreeEmbedding
from .errors import (
    EmbeddingNotCanonical,
    InvalidGraph,
    NotAWalk,
    NotConservative,
    PathMismatch,
    SizeMismatch,
)
from .metric import FiniteMetricSpace, WeightedGraph, geodesic_metric

__all__ = [
    "VectorField",
    "gradient",
    "line_integral",
    "is_conservative",
    "integral_operator",
    "extend_integral_operator",
    "edge_stretch_constant",
    "lex_shortest_path",
    "vertex_lip",
]

CONSERVATIVE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class VectorField:
    """Antisymmetric function on the oriented edges of ``graph``.

    ``values[k]`` is ``f(u, v)`` for the ``k``-th edge with ``u < v``;
    ``f(v, u) = -f(u, v)``.
    """

    graph: WeightedGraph
    metric: FiniteMetricSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.graph.edges),):
            raise SizeMismatch(f"expected {len(self.graph.edges)} edge values, got shape {v.shape}")
        if self.metric.n != self.graph.n:
            raise SizeMismatch("metric and graph have different vertex counts")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        lookup = {}
        for k, (a, b, _) in enumerate(self.graph.edges):
            lookup[(min(a, b), max(a, b))] = k
        object.__setattr__(self, "_index", lookup)

    @classmethod
    def from_edges(cls, graph: WeightedGraph, items, metric: FiniteMetricSpace | None = None) -> "VectorField":
        """Build from ``(x, y, f(x, y))`` triples; unspecified edges get 0."""
        metric = geodesic_metric(graph) if metric is None else metric
        field = cls(graph, metric, np.zeros(len(graph.edges)))
        vals = np.zeros(len(graph.edges))
        for x, y, val in items:
            k, sign = field._locate(int(x), int(y))
            vals[k] = sign * float(val)
        return cls(graph, metric, vals)

    def _locate(self, x: int, y: int) -> tuple[int, float]:
        k = self._index.get((min(x, y), max(x, y)))
        if k is None:
            raise NotAWalk(f"({x}, {y}) is not an edge")
        return k, (1.0 if x < y else -1.0)

    def __call__(self, x: int, y: int) -> float:
        k, sign = self._locate(x, y)
        return sign * float(self.values[k])

    def oriented(self) -> list[tuple[int, int, float]]:
        """``(u, v, f(u, v))`` with ``u < v`` for every edge."""
        return [(min(a, b), max(a, b), float(val)) for (a, b, _), val in zip(self.graph.edges, self.values)]

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def lengths(self) -> np.ndarray:
        """Geodesic length ``d_G(u, v)`` of every edge."""
        return np.array([self.metric.dist[a, b] for a, b, _ in self.graph.edges])


def gradient(F, graph: WeightedGraph, metric: FiniteMetricSpace | None = None) -> VectorField:
    """``(F(y) - F(x)) / d_G(x, y)`` on every edge."""
    metric = geodesic_metric(graph) if metric is None else metric
    F = np.asarray(F, dtype=float)
    if F.shape != (graph.n,):
        raise SizeMismatch(f"expected {graph.n} vertex values")
    vals = []
    for a, b, _ in graph.edges:
        u, v = min(a, b), max(a, b)
        vals.append((F[v] - F[u]) / metric.dist[u, v])
    return VectorField(graph, metric, np.array(vals))


def line_integral(f: VectorField, walk) -> float:
    """``sum f(x_{j-1}, x_j) d_G(x_{j-1}, x_j)`` along ``walk``.

    Raises
    ------
    NotAWalk
        Two consecutive vertices are not adjacent.
    """
    walk = [int(v) for v in walk]
    total = 0.0
    for x, y in zip(walk, walk[1:]):
        total += f(x, y) * f.metric.dist[x, y]
    return total


def _tree_potential(f: VectorField, base: int) -> tuple[np.ndarray, set]:
    # integrate along a BFS spanning tree; returns potentials and tree edge keys
    adj = f.graph.adjacency()
    F = np.full(f.graph.n, np.nan)
    F[base] = 0.0
    used = set()
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if np.isnan(F[v]):
                F[v] = F[u] + f(u, v) * f.metric.dist[u, v]
                used.add((min(u, v), max(u, v)))
                queue.append(v)
    if np.isnan(F).any():
        raise InvalidGraph("graph is not connected")
    return F, used


def is_conservative(f: VectorField, tol: float = CONSERVATIVE_TOL) -> bool:
    """True iff every fundamental cycle integrates to zero within ``tol``."""
    F, _ = _tree_potential(f, 0)
    scale = 1.0 + float(np.abs(F).max(initial=0.0))
    for u, v, val in f.oriented():
        if abs(F[v] - F[u] - val * f.metric.dist[u, v]) > tol * scale:
            return False
    return True


def integral_operator(f: VectorField, base: int = 0) -> np.ndarray:
    """The potential ``F`` with ``F(base) = 0`` and gradient ``f``.

    Raises
    ------
    NotConservative
        Some cycle integral of ``f`` is nonzero.
    """
    if not is_conservative(f):
        raise NotConservative("field has a nonzero cycle integral")
    return _tree_potential(f, base)[0]


def vertex_lip(F, graph: WeightedGraph, metric: FiniteMetricSpace | None = None) -> float:
    """Lipschitz constant of a vertex function; edge ratios suffice on a geodesic metric."""
    return gradient(F, graph, metric).sup_norm()


def lex_shortest_path(graph: WeightedGraph, metric: FiniteMetricSpace, x: int, y: int) -> list[int]:
    """Lexicographically smallest shortest path from ``x`` to ``y``."""
    adj = graph.adjacency()
    d = metric.dist
    tol = 1e-9 * (1.0 + d[x, y])
    path = [x]
    u = x
    while u != y:
        u = next(v for v in sorted(adj[u]) if abs(d[u, v] + d[v, y] - d[u, y]) <= tol)
        path.append(u)
    return path


def edge_stretch_constant(embedding: StochasticTreeEmbedding, graph: WeightedGraph) -> float:
    """``max over graph edges {x, y}`` of ``sum_i p_i d_i(x, y) / d_G(x, y)``."""
    E = embedding.expected_distance()
    d = embedding.base.dist
    return float(max(E[a, b] / d[a, b] for a, b, _ in graph.edges))


def _path_for(path_choice, x, y):
    if path_choice is None:
        return None
    if callable(path_choice):
        return path_choice(x, y)
    if isinstance(path_choice, Mapping):
        if (x, y) in path_choice:
            return list(path_choice[(x, y)])
        if (y, x) in path_choice:
            return list(path_choice[(y, x)])[::-1]
    return None


def extend_integral_operator(
    f: VectorField,
    embedding: StochasticTreeEmbedding,
    path_choice: Mapping | Callable | None = None,
) -> np.ndarray:
    """Extend the integral operator to every field by averaging over trees.

    In each component tree, every tree edge ``{x, y}`` is replaced by a
    shortest graph path ``P_e`` and the field is integrated along the tree
    path from the root, the results are averaged with the component
    probabilities and normalised to vanish at the base point. On
    conservative fields this reproduces :func:`integral_operator`.

    Parameters
    ----------
    path_choice : mapping or callable, optional
        ``(x, y) -> [x, ..., y]`` shortest paths for tree edges; defaults to
        the lexicographically smallest one.

    Raises
    ------
    EmbeddingNotCanonical
        Components are not bijective trees on the graph vertices with edge
        weights equal to graph distances.
    PathMismatch
        A supplied path is not a walk from ``x`` to ``y`` of length ``d_G(x, y)``.
    """
    base = embedding.base
    if base.n != f.graph.n or not np.allclose(base.dist, f.metric.dist, rtol=1e-12, atol=1e-12):
        raise EmbeddingNotCanonical("embedding base is not the graph metric")
    if not embedding.is_canonical():
        raise EmbeddingNotCanonical("components must be bijective with edge weights d_G(u, v)")
    d = f.metric.dist
    adj = f.graph.adjacency()
    cache: dict = {}

    def integral(x, y):
        key = (x, y)
        if key not in cache:
            path = _path_for(path_choice, x, y)
            if path is None:
                path = lex_shortest_path(f.graph, f.metric, x, y)
            else:
                path = [int(v) for v in path]
                if path[0] != x or path[-1] != y:
                    raise PathMismatch(f"path for ({x}, {y}) has the wrong endpoints")
                if any(b not in adj[a] for a, b in zip(path, path[1:])):
                    raise PathMismatch(f"path for ({x}, {y}) is not a walk in the graph")
                length = sum(d[a, b] for a, b in zip(path, path[1:]))
                if abs(length - d[x, y]) > 1e-9 * max(1.0, d[x, y]):
                    raise PathMismatch(f"path for ({x}, {y}) has length {length}, not {d[x, y]}")
            cache[key] = line_integral(f, path)
        return cache[key]

    out = np.zeros(base.n)
    for p, tree, vm in embedding.components:
        point = np.empty(tree.n, dtype=np.int64)
        point[vm] = np.arange(base.n)
        h = np.zeros(tree.n)
        for v in tree.order[1:]:
            u = tree.parent[v]
            h[v] = h[u] + integral(int(point[u]), int(point[v]))
        h_pts = h[vm]
        out += p * (h_pts - h_pts[base.base_point])
    return out
