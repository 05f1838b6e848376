"""Rooted weighted trees and the closed-form transportation-cost norm on them.

An oriented edge is named by its child endpoint ``e+``; its parent is
``tree.parent[e+]``. Edge weights live on the child as well.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import EdgeNotInTree, InvalidTree, SizeMismatch
from .metric import FiniteMetricSpace, WeightedGraph

__all__ = [
    "RootedWeightedTree",
    "subtree_masses",
    "subtree_mass",
    "tree_tc_norm",
    "tree_isometry",
    "vertex_embedding",
    "weighted_l1",
]


@dataclass(frozen=True, eq=False)
class RootedWeightedTree:
    """Tree given by a parent array.

    Parameters
    ----------
    n : int
        Number of vertices.
    root : int
        The root; ``parent[root] == -1``.
    parent : array of int
        Parent of each vertex, ``-1`` at the root.
    weight : array of float
        Weight of the edge from each vertex to its parent (ignored at the root).
    """

    n: int
    root: int
    parent: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        parent = np.array(self.parent, dtype=np.int64).reshape(-1)
        weight = np.array(self.weight, dtype=float).reshape(-1)
        if n < 1 or parent.shape != (n,) or weight.shape != (n,):
            raise InvalidTree("parent and weight arrays must have length n >= 1")
        root = int(self.root)
        if not 0 <= root < n or parent[root] != -1:
            raise InvalidTree("root must be a vertex with parent -1")
        if np.count_nonzero(parent == -1) != 1:
            raise InvalidTree("exactly one vertex may lack a parent")
        if np.any((parent < -1) | (parent >= n)):
            raise InvalidTree("parent index out of range")
        weight[root] = 0.0
        mask = np.arange(n) != root
        if np.any(~(weight[mask] > 0)) or not np.all(np.isfinite(weight)):
            raise InvalidTree("edge weights must be positive and finite")
        children: list[list[int]] = [[] for _ in range(n)]
        for v in range(n):
            if v != root:
                children[parent[v]].append(v)
        order = [root]
        depth = np.zeros(n)
        level = np.zeros(n, dtype=np.int64)
        k = 0
        while k < len(order):
            u = order[k]
            k += 1
            for c in children[u]:
                depth[c] = depth[u] + weight[c]
                level[c] = level[u] + 1
                order.append(c)
        if len(order) != n:
            raise InvalidTree("parent structure has a cycle or does not span the vertices")
        for name, arr in (("parent", parent), ("weight", weight), ("depth", depth), ("level", level)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "order", np.array(order))
        object.__setattr__(self, "children", tuple(tuple(c) for c in children))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_parents(cls, parents, weights, root: int | None = None) -> "RootedWeightedTree":
        parents = list(parents)
        if root is None:
            roots = [i for i, p in enumerate(parents) if p is None or p < 0]
            if len(roots) != 1:
                raise InvalidTree("exactly one vertex may lack a parent")
            root = roots[0]
        parents = [-1 if p is None else int(p) for p in parents]
        weights = [0.0 if w is None else float(w) for w in weights]
        return cls(len(parents), root, parents, weights)

    @classmethod
    def from_edges(cls, n: int, edges, root: int = 0) -> "RootedWeightedTree":
        """Orient an undirected edge list ``(u, v, w)`` away from ``root``."""
        if len(edges) != n - 1:
            raise InvalidTree(f"a tree on {n} vertices has {n - 1} edges, got {len(edges)}")
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InvalidTree(f"bad edge ({u}, {v})")
            adj[u].append((v, float(w)))
            adj[v].append((u, float(w)))
        parent = np.full(n, -2, dtype=np.int64)
        weight = np.zeros(n)
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w in adj[u]:
                if parent[v] == -2:
                    parent[v] = u
                    weight[v] = w
                    queue.append(v)
        if np.any(parent == -2):
            raise InvalidTree("edge list is not connected")
        return cls(n, root, parent, weight)

    @classmethod
    def from_graph(cls, graph: WeightedGraph, root: int = 0) -> "RootedWeightedTree":
        return cls.from_edges(graph.n, graph.edges, root)

    def rerooted(self, root: int) -> "RootedWeightedTree":
        return RootedWeightedTree.from_edges(self.n, self.edge_list(), root)

    # -- views ----------------------------------------------------------------

    def edge_list(self) -> list[tuple[int, int, float]]:
        """Oriented edges ``(parent, child, weight)`` in vertex order."""
        return [(int(self.parent[v]), v, float(self.weight[v])) for v in range(self.n) if v != self.root]

    def to_graph(self) -> WeightedGraph:
        return WeightedGraph(self.n, tuple(self.edge_list()))

    def path_to_root(self, v: int) -> list[int]:
        """Vertices from ``v`` up to the root, inclusive."""
        out = [int(v)]
        while out[-1] != self.root:
            out.append(int(self.parent[out[-1]]))
        return out

    def ancestor_matrix(self) -> np.ndarray:
        """``E[v, c] = 1`` when edge ``c`` lies on the root-to-``v`` path."""
        E = np.zeros((self.n, self.n))
        for v in self.order[1:]:
            E[v] = E[self.parent[v]]
            E[v, v] = 1.0
        return E

    def distance_matrix(self) -> np.ndarray:
        E = self.ancestor_matrix()
        shared = (E * self.weight) @ E.T
        d = self.depth[:, None] + self.depth[None, :] - 2.0 * shared
        np.fill_diagonal(d, 0.0)
        return np.maximum(d, 0.0)

    def metric(self, base_point: int | None = None) -> FiniteMetricSpace:
        return FiniteMetricSpace(self.distance_matrix(), (), self.root if base_point is None else base_point)

    def _edge(self, e) -> int:
        if isinstance(e, (tuple, list)):
            u, v = int(e[0]), int(e[1])
            if 0 <= v < self.n and v != self.root and self.parent[v] == u:
                return v
            raise EdgeNotInTree(f"({u}, {v}) is not an oriented edge of the tree")
        v = int(e)
        if not 0 <= v < self.n or v == self.root:
            raise EdgeNotInTree(f"vertex {v} does not name an edge")
        return v


def _mass_vector(tree: RootedWeightedTree, mu) -> np.ndarray:
    if hasattr(mu, "coeffs"):
        if mu.space.n != tree.n:
            raise SizeMismatch("measure and tree have different vertex counts")
        mu = mu.coeffs
    if isinstance(mu, Mapping):
        out = np.zeros(tree.n)
        for i, v in mu.items():
            out[int(i)] += float(v)
        return out
    out = np.asarray(mu, dtype=float)
    if out.shape != (tree.n,):
        raise SizeMismatch(f"expected {tree.n} masses, got shape {out.shape}")
    return out


def subtree_masses(tree: RootedWeightedTree, mu) -> np.ndarray:
    """``mu(T_e)`` for every edge, indexed by ``e+``; the root entry is the total."""
    m = _mass_vector(tree, mu).copy()
    for v in tree.order[:0:-1]:
        m[tree.parent[v]] += m[v]
    return m


def subtree_mass(tree: RootedWeightedTree, mu, e) -> float:
    """Mass of ``mu`` on the subtree hanging below edge ``e``.

    ``e`` is either the child vertex or a ``(parent, child)`` pair.
    """
    return float(subtree_masses(tree, mu)[tree._edge(e)])


def tree_isometry(tree: RootedWeightedTree, mu) -> np.ndarray:
    """Coordinates ``w_e * mu(T_e)``, indexed by ``e+`` (the root slot is 0)."""
    out = tree.weight * subtree_masses(tree, mu)
    out[tree.root] = 0.0
    return out


def tree_tc_norm(tree: RootedWeightedTree, mu) -> float:
    """``sum_e w_e |mu(T_e)|``.

    Examples
    --------
    >>> t = RootedWeightedTree.from_edges(3, [(0, 1, 2.0), (0, 2, 3.0)])
    >>> tree_tc_norm(t, {1: 1.0, 2: -1.0})
    5.0
    """
    return float(np.abs(tree_isometry(tree, mu)).sum())


def vertex_embedding(tree: RootedWeightedTree, v: int) -> np.ndarray:
    """0/1 indicator of the edges on the root-to-``v`` path, indexed by ``e+``."""
    out = np.zeros(tree.n)
    for u in tree.path_to_root(v)[:-1]:
        out[u] = 1.0
    return out


def weighted_l1(tree: RootedWeightedTree, x: np.ndarray) -> float:
    """``sum_e w_e |x_e|``."""
    return float(np.sum(tree.weight * np.abs(x)))
