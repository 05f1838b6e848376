"""Steiner point removal: restrict a weighted tree to a subset of its vertices.

The result is a tree on the kept vertices only whose path distances are
within a factor ``1/4`` to ``2`` of the original ones.
"""

from __future__ import annotations

import itertools
from collections import deque

from .errors import EmptyKeepSet, InvalidTree
from .trees import RootedWeightedTree

__all__ = ["gupta_restrict", "gupta_edges"]

Adj = dict  # vertex -> {neighbour: weight}


def _prune(adj: Adj, keep: set) -> Adj:
    """Strip non-kept leaves until every leaf is kept."""
    adj = {u: dict(nb) for u, nb in adj.items()}
    queue = deque(sorted(u for u in adj if u not in keep and len(adj[u]) <= 1))
    while queue:
        u = queue.popleft()
        if u not in adj or len(adj) == 1:
            continue
        for v in adj.pop(u):
            del adj[v][u]
            if v not in keep and len(adj[v]) <= 1:
                queue.append(v)
    return adj


def _distances(adj: Adj, src) -> tuple[dict, dict]:
    dist = {src: 0.0}
    parent = {src: None}
    stack = [src]
    while stack:
        u = stack.pop()
        for v, w in adj[u].items():
            if v not in dist:
                dist[v] = dist[u] + w
                parent[v] = u
                stack.append(v)
    return dist, parent


def _component(adj: Adj, start, blocked) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v != blocked and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _induced(adj: Adj, verts: set) -> Adj:
    return {u: {v: w for v, w in adj[u].items() if v in verts} for u in verts}


def _edges(adj: Adj) -> list:
    return [(u, v, w) for u in adj for v, w in adj[u].items() if u < v]


def _general(adj: Adj, keep: set, fresh) -> list:
    S = _prune(adj, keep)
    if len(S) == 1:
        return []
    if all(v in keep for v in S):
        return _edges(S)
    internal = sorted(v for v in S if v in keep and len(S[v]) >= 2)
    if internal:
        # every path between branches passes through a, so solve each branch
        a = internal[0]
        out = []
        for nb in sorted(S[a]):
            comp = _component(S, nb, a) | {a}
            out += _general(_induced(S, comp), keep & comp, fresh)
        return out
    x0 = min(v for v in S if v not in keep)
    return _leaf_case(S, keep, x0, fresh)[0]


def _leaf_case(adj: Adj, keep: set, x0, fresh) -> tuple[list, object]:
    """Tree on ``keep`` (all leaves) plus a vertex ``v0`` with
    ``d'(x, v0) <= 2 d(x, x0) - r0`` where ``r0 = min_keep d(., x0)``."""
    if len(keep) == 1:
        return [], next(iter(keep))
    S = _prune(adj, keep)
    if x0 not in S:
        # a dangling start point only shifts all distances to keep by the
        # same amount, which the bound above absorbs
        _, par = _distances(adj, min(keep))
        while x0 not in S:
            x0 = par[x0]
    if x0 in keep:
        return _general(S, keep, fresh), x0
    d, par = _distances(S, x0)
    r0 = min(d[v] for v in keep)
    half = r0 / 2
    tol = 1e-12 * r0
    v0 = min(v for v in keep if d[v] <= r0 + tol)

    def beyond(v):
        return d[v] >= half - tol

    crossing = sorted((par[b], b) for b in S if b != x0 and not beyond(par[b]) and beyond(b))
    on_path = set()
    v = v0
    while v is not None:
        on_path.add(v)
        v = par[v]
    crossing.sort(key=lambda e: (e[1] not in on_path, e[1]))

    edges = []
    reps = []
    for a, b in crossing:
        sub = _component(S, b, a)
        T = _induced(S, sub)
        if abs(d[b] - half) <= tol:
            xj = b
        else:
            xj = next(fresh)
            T[xj] = {b: d[b] - half}
            T[b][xj] = d[b] - half
        Ej, vj = _leaf_case(T, keep & sub, xj, fresh)
        edges += Ej
        reps.append((vj, d[vj] - half))
    v1 = reps[0][0]
    edges += [(v1, vj, rj) for vj, rj in reps[1:]]
    return edges, v1


def gupta_edges(adj: Adj, keep) -> list[tuple]:
    """Edges ``(u, v, w)`` of the restricted tree for an adjacency dict."""
    keep = set(keep)
    if not keep:
        raise EmptyKeepSet("keep set must be nonempty")
    if not keep <= set(adj):
        raise InvalidTree("keep set contains vertices outside the tree")
    fresh = itertools.count(max(adj) + 1)
    return _general(adj, keep, fresh)


def gupta_restrict(tree: RootedWeightedTree, keep) -> tuple[RootedWeightedTree, tuple]:
    """Tree on ``keep`` with distances within ``[1/4, 2]`` times the originals.

    Returns
    -------
    (RootedWeightedTree, tuple)
        The restricted tree, whose vertex ``i`` is the original vertex
        ``kept[i]``, and ``kept`` (sorted). The root is the original root when
        kept, otherwise the first kept vertex.

    Raises
    ------
    EmptyKeepSet
        ``keep`` is empty.
    """
    kept = tuple(sorted({int(v) for v in keep}))
    if not kept:
        raise EmptyKeepSet("keep set must be nonempty")
    if kept[0] < 0 or kept[-1] >= tree.n:
        raise InvalidTree("keep set contains vertices outside the tree")
    adj: Adj = {v: {} for v in range(tree.n)}
    for u, v, w in tree.edge_list():
        adj[u][v] = w
        adj[v][u] = w
    edges = gupta_edges(adj, kept)
    index = {v: i for i, v in enumerate(kept)}
    root = index.get(tree.root, 0)
    out = RootedWeightedTree.from_edges(len(kept), [(index[u], index[v], w) for u, v, w in edges], root)
    return out, kept
