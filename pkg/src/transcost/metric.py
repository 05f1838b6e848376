"""Finite metric spaces, weighted graphs and their geodesic metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    AsymmetricMatrix,
    DisconnectedGraph,
    EmptySubset,
    InvalidGraph,
    InvalidSize,
    NegativeDistance,
    TriangleViolation,
    ZeroDistanceDistinctPoints,
)

__all__ = [
    "FiniteMetricSpace",
    "WeightedGraph",
    "validate_metric",
    "geodesic_metric",
    "generate_family",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "torus_graph",
    "diamond_graph",
    "random_tree",
    "ball",
    "diameter",
    "triangle_tolerance",
]


def triangle_tolerance(dist: np.ndarray) -> float:
    """Additive slack used for every triangle-inequality test."""
    return 1e-9 * (1.0 + (float(dist.max()) if dist.size else 0.0))


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A validated distance matrix over ``n`` points with a base point.

    Build instances through :func:`validate_metric` or :func:`geodesic_metric`;
    the constructor itself trusts its input.
    """

    dist: np.ndarray
    points: tuple = ()
    base_point: int = 0

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if not self.points:
            object.__setattr__(self, "points", tuple(range(d.shape[0])))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self):
        return self.n

    def d(self, x: int, y: int) -> float:
        return float(self.dist[x, y])

    def min_distance(self) -> float:
        if self.n < 2:
            return 0.0
        off = self.dist[~np.eye(self.n, dtype=bool)]
        return float(off.min())

    def subspace(self, idx: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(idx)
        return FiniteMetricSpace(
            self.dist[np.ix_(idx, idx)], tuple(self.points[i] for i in idx), 0
        )

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n}, base_point={self.base_point})"


def validate_metric(matrix, base_point: int = 0, points: Sequence | None = None) -> FiniteMetricSpace:
    """Check the metric axioms and wrap ``matrix``.

    Raises
    ------
    AsymmetricMatrix
        Non-square or non-symmetric input.
    NegativeDistance, ZeroDistanceDistinctPoints, TriangleViolation
        The corresponding axiom fails.
    """
    try:
        d = np.array(matrix, dtype=float)
    except (ValueError, TypeError) as exc:
        raise AsymmetricMatrix(f"matrix is not a square numeric array: {exc}") from None
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise AsymmetricMatrix(f"matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    if n == 0:
        raise InvalidSize("metric space needs at least one point")
    if not np.all(np.isfinite(d)):
        raise NegativeDistance("distances must be finite")
    tol = triangle_tolerance(np.abs(d))
    if not np.allclose(d, d.T, rtol=0, atol=tol):
        i, j = np.unravel_index(np.argmax(np.abs(d - d.T)), d.shape)
        raise AsymmetricMatrix(f"d[{i}][{j}] != d[{j}][{i}]")
    d = 0.5 * (d + d.T)
    if np.any(d < 0):
        i, j = np.argwhere(d < 0)[0]
        raise NegativeDistance(f"d[{i}][{j}] = {d[i, j]} < 0")
    if np.any(np.diag(d) != 0):
        i = int(np.flatnonzero(np.diag(d) != 0)[0])
        raise ZeroDistanceDistinctPoints(f"d[{i}][{i}] must be 0")
    off = ~np.eye(n, dtype=bool)
    if np.any(d[off] <= 0):
        i, j = np.argwhere((d <= 0) & off)[0]
        raise ZeroDistanceDistinctPoints(f"distinct points {i} and {j} are at distance 0")
    for k in range(n):
        # excess[i, j] = d(i, j) - d(i, k) - d(k, j)
        excess = d - d[:, k][:, None] - d[k, :][None, :]
        if excess.max() > tol:
            i, j = np.unravel_index(np.argmax(excess), excess.shape)
            raise TriangleViolation(i, j, k, excess[i, j])
    if not 0 <= base_point < n:
        raise InvalidSize(f"base point {base_point} out of range")
    if points is not None and len(points) != n:
        raise InvalidSize("points and matrix disagree in size")
    return FiniteMetricSpace(d, tuple(points) if points is not None else (), int(base_point))


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph with strictly positive edge weights."""

    vertex_count: int
    edges: tuple = field(default_factory=tuple)

    def __post_init__(self):
        n = int(self.vertex_count)
        if n < 1:
            raise InvalidSize("graph needs at least one vertex")
        clean = []
        seen = set()
        for e in self.edges:
            u, v, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge ({u},{v}) references a missing vertex")
            if u == v:
                raise InvalidGraph(f"self-loop at {u}")
            if not w > 0 or not np.isfinite(w):
                raise InvalidGraph(f"edge ({u},{v}) has non-positive weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidGraph(f"duplicate edge {key}")
            seen.add(key)
            clean.append((u, v, w))
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "edges", tuple(clean))

    @property
    def n(self) -> int:
        return self.vertex_count

    def adjacency(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [dict() for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def sparse(self):
        if not self.edges:
            return coo_matrix((self.n, self.n)).tocsr()
        u, v, w = (np.array(c) for c in zip(*self.edges))
        return coo_matrix((w, (u, v)), shape=(self.n, self.n)).tocsr()

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        k, _ = connected_components(self.sparse(), directed=False)
        return k == 1

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def with_weights(self, weights: Iterable[float]) -> "WeightedGraph":
        return WeightedGraph(self.n, tuple((u, v, w) for (u, v, _), w in zip(self.edges, weights)))

    def scaled(self, factor: float) -> "WeightedGraph":
        return self.with_weights(w * factor for _, _, w in self.edges)


def geodesic_metric(graph: WeightedGraph, base_point: int = 0) -> FiniteMetricSpace:
    """All-pairs shortest path metric generated by the edge weights."""
    if not graph.is_connected():
        raise DisconnectedGraph("geodesic metric needs a connected graph")
    if graph.n == 1:
        return FiniteMetricSpace(np.zeros((1, 1)), (), base_point)
    d = shortest_path(graph.sparse(), method="D", directed=False)
    d = 0.5 * (d + d.T)
    return FiniteMetricSpace(d, (), base_point)


# --- example families -------------------------------------------------------


def cycle_graph(n: int) -> WeightedGraph:
    if n < 3:
        raise InvalidSize("cycle needs n >= 3")
    return WeightedGraph(n, tuple((j, (j + 1) % n, 1.0) for j in range(n)))


def path_graph(n: int) -> WeightedGraph:
    if n < 1:
        raise InvalidSize("path needs n >= 1")
    return WeightedGraph(n, tuple((j, j + 1, 1.0) for j in range(n - 1)))


def star_graph(n: int) -> WeightedGraph:
    """Center 0 joined to leaves ``1..n-1``."""
    if n < 1:
        raise InvalidSize("star needs n >= 1")
    return WeightedGraph(n, tuple((0, j, 1.0) for j in range(1, n)))


def torus_graph(n: int) -> WeightedGraph:
    """The discrete torus (Z/nZ)^2 with nearest-neighbour edges.

    Vertex ``(x, y)`` has index ``x * n + y``. For ``n = 2`` the wraparound
    edges coincide with the direct ones and are merged.
    """
    if n < 1:
        raise InvalidSize("torus needs n >= 1")
    seen = set()
    edges = []
    for x in range(n):
        for y in range(n):
            u = x * n + y
            for v in (((x + 1) % n) * n + y, x * n + (y + 1) % n):
                key = (min(u, v), max(u, v))
                if u != v and key not in seen:
                    seen.add(key)
                    edges.append((u, v, 1.0))
    return WeightedGraph(n * n, tuple(edges))


def diamond_graph(level: int) -> WeightedGraph:
    """Diamond graph D_level: D_0 is an edge, D_k replaces every edge of D_{k-1} by a 4-cycle.

    The two poles are vertices 0 and 1.
    """
    if level < 0:
        raise InvalidSize("diamond level must be >= 0")
    edges = [(0, 1)]
    count = 2
    for _ in range(level):
        nxt = []
        for u, v in edges:
            a, b = count, count + 1
            count += 2
            nxt += [(u, a), (a, v), (u, b), (b, v)]
        edges = nxt
    return WeightedGraph(count, tuple((u, v, 1.0) for u, v in edges))


def random_tree(n: int, seed: int = 0, weight_range: tuple[float, float] = (0.1, 10.0)) -> WeightedGraph:
    """Random recursive tree: vertex ``i`` attaches to a uniform earlier vertex."""
    if n < 1:
        raise InvalidSize("tree needs n >= 1")
    lo, hi = weight_range
    if not 0 < lo <= hi:
        raise InvalidSize("weight range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(1, n):
        parent = int(rng.integers(0, i))
        edges.append((parent, i, float(rng.uniform(lo, hi))))
    return WeightedGraph(n, tuple(edges))


_FAMILIES = {
    "cycle": cycle_graph,
    "path": path_graph,
    "star": star_graph,
    "torus": torus_graph,
    "diamond": diamond_graph,
    "random_tree": random_tree,
}


def generate_family(kind: str, *args, **kwargs) -> WeightedGraph:
    """Dispatch by family name, e.g. ``generate_family("torus", 4)``."""
    try:
        make = _FAMILIES[kind]
    except KeyError:
        raise InvalidSize(f"unknown family {kind!r}; choose from {sorted(_FAMILIES)}") from None
    return make(*args, **kwargs)


# --- balls and diameters ----------------------------------------------------


def ball(space: FiniteMetricSpace, x: int, r: float) -> frozenset:
    """Closed ball ``{y : d(x, y) <= r}``."""
    if r < 0:
        raise InvalidSize("radius must be nonnegative")
    return frozenset(int(i) for i in np.flatnonzero(space.dist[x] <= r))


def diameter(space: FiniteMetricSpace, subset: Iterable[int] | None = None) -> float:
    idx = list(range(space.n)) if subset is None else sorted(set(subset))
    if not idx:
        raise EmptySubset("diameter of the empty set is undefined")
    return float(space.dist[np.ix_(idx, idx)].max())
