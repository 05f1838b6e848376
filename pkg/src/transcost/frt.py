"""Random hierarchical ball-carving partitions and the trees they induce."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ExpansivenessViolation, InvalidParameters, InvalidSize
from .metric import FiniteMetricSpace, ball
from .trees import RootedWeightedTree

__all__ = [
    "HierarchicalPartition",
    "component_rng",
    "sample_frt_partition",
    "frt_scale",
    "sample_frt_tree",
    "frt_leaf_distances",
    "estimate_expected_stretch",
    "retention_probability",
    "retention_bound",
]

RESCALE_EPS = 1e-6


def component_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for component ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def sample_frt_partition(space: FiniteMetricSpace, R: float, rng, subset=None) -> list[tuple[int, ...]]:
    """Carve ``subset`` (default: all points) into clusters of diameter < ``R``.

    Centers are visited in a uniformly random order and each grabs the
    not-yet-covered points of its closed ball of radius ``r``, with ``r``
    uniform on ``[R/4, R/2)``. Only points of ``subset`` act as centers.

    Returns
    -------
    list of tuple
        Nonempty clusters in carving order, each sorted.
    """
    if not R > 0:
        raise InvalidParameters("R must be positive")
    pts = np.arange(space.n) if subset is None else np.array(sorted(subset), dtype=np.int64)
    if pts.size == 0:
        return []
    r = rng.uniform(R / 4, R / 2)
    order = rng.permutation(pts.size)
    sub = space.dist[np.ix_(pts, pts)]
    free = np.ones(pts.size, dtype=bool)
    clusters = []
    for c in order:
        grab = free & (sub[c] <= r)
        if grab.any():
            clusters.append(tuple(int(p) for p in pts[grab]))
            free &= ~grab
        if not free.any():
            break
    return clusters


def frt_scale(space: FiniteMetricSpace) -> tuple[float, int]:
    """Scale factor making distinct points more than 1 apart, and the level count ``k``.

    ``k`` is the least nonnegative integer with ``scale * diam < 2**k``.
    Spaces already separated by more than 1 are left unscaled.
    """
    if space.n < 2:
        return 1.0, 0
    scale = max(1.0, (1.0 + RESCALE_EPS) / space.min_distance())
    diam = float(space.dist.max()) * scale
    k = 0
    while not diam < 2.0**k:
        k += 1
    return scale, k


@dataclass(frozen=True, eq=False)
class HierarchicalPartition:
    """Nested partitions ``levels[0] = {M}``, ..., ``levels[k]`` = singletons.

    ``labels[j, x]`` is the index of the cluster of level ``j`` holding ``x``.
    Distances are multiplied by ``scale`` before carving.
    """

    levels: tuple
    k: int
    scale: float
    labels: np.ndarray

    def separation_level(self, x: int, y: int) -> int:
        """Number of levels at which ``x`` and ``y`` share a cluster."""
        return int(np.sum(self.labels[:, x] == self.labels[:, y]))


def _sample_hierarchy(space: FiniteMetricSpace, rng) -> HierarchicalPartition:
    scale, k = frt_scale(space)
    scaled = FiniteMetricSpace(space.dist * scale, (), space.base_point)
    levels = [(tuple(range(space.n)),)]
    for j in range(1, k + 1):
        R = 2.0 ** (k - j)
        nxt = []
        for B in levels[-1]:
            nxt.extend(sample_frt_partition(scaled, R, rng, subset=B))
        levels.append(tuple(nxt))
    labels = np.zeros((k + 1, space.n), dtype=np.int64)
    for j, level in enumerate(levels):
        for c, B in enumerate(level):
            labels[j, list(B)] = c
    return HierarchicalPartition(tuple(levels), k, scale, labels)


def _tree_from_hierarchy(hp: HierarchicalPartition) -> tuple[RootedWeightedTree, np.ndarray]:
    offsets = np.cumsum([0] + [len(level) for level in hp.levels])
    parent = np.full(offsets[-1], -1, dtype=np.int64)
    weight = np.zeros(offsets[-1])
    for j in range(1, hp.k + 1):
        for c, B in enumerate(hp.levels[j]):
            v = offsets[j] + c
            parent[v] = offsets[j - 1] + hp.labels[j - 1, B[0]]
            weight[v] = 2.0 ** (hp.k - j) / hp.scale
    tree = RootedWeightedTree(int(offsets[-1]), 0, parent, weight)
    leaf_map = offsets[hp.k] + hp.labels[hp.k]
    return tree, leaf_map


def sample_frt_tree(space: FiniteMetricSpace, rng) -> tuple[HierarchicalPartition, RootedWeightedTree, np.ndarray]:
    """Sample nested partitions and their level tree.

    Tree vertices are the (level, cluster) pairs numbered level by level; the
    edge entering level ``j`` weighs ``2**(k - j)`` in scaled units, reported
    back in the original units. ``leaf_map[x]`` is the vertex of ``{x}``.

    Examples
    --------
    >>> from transcost.metric import validate_metric
    >>> hp, tree, leaf = sample_frt_tree(validate_metric([[0, 1.5], [1.5, 0]]), np.random.default_rng(0))
    >>> hp.k, tree.distance_matrix()[leaf[0], leaf[1]]
    (1, 2.0)
    """
    hp = _sample_hierarchy(space, rng)
    tree, leaf_map = _tree_from_hierarchy(hp)
    return hp, tree, leaf_map


def frt_leaf_distances(hp: HierarchicalPartition) -> np.ndarray:
    """Tree distances between leaves, ``2 (2**(k + 1 - i) - 1)`` with ``i`` shared levels."""
    shared = (hp.labels[:, :, None] == hp.labels[:, None, :]).sum(0)
    d = 2.0 * (2.0 ** (hp.k + 1 - shared) - 1.0) / hp.scale
    np.fill_diagonal(d, 0.0)
    return d


def _check_expansive(space, dT, index):
    bad = dT < space.dist * (1 - 1e-9) - 1e-12
    if bad.any():
        x, y = np.argwhere(bad)[0]
        raise ExpansivenessViolation(
            f"sample {index}: tree distance {dT[x, y]} < d({x},{y}) = {space.dist[x, y]}"
        )


def _map_ordered(fn, items, threads):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def estimate_expected_stretch(space: FiniteMetricSpace, n_samples: int, seed: int = 0, threads: int = 1) -> dict:
    """Monte Carlo estimate of the expected stretch ``E d_T(x, y) / d(x, y)``.

    Every sample is checked for expansiveness and a contraction raises
    :class:`ExpansivenessViolation`. Results depend only on ``seed``, not on
    ``threads``.

    Returns
    -------
    dict
        ``mean`` and ``stderr`` (pair matrices, zero on the diagonal),
        ``max_mean`` (largest mean stretch), ``max_sample`` (largest single
        stretch) and ``n_samples``.
    """
    if n_samples < 1:
        raise InvalidSize("n_samples must be >= 1")
    off = ~np.eye(space.n, dtype=bool)
    denom = np.where(off, space.dist, 1.0)

    def one(i):
        hp = _sample_hierarchy(space, component_rng(seed, i))
        dT = frt_leaf_distances(hp)
        _check_expansive(space, dT, i)
        return np.where(off, dT / denom, 0.0)

    total = np.zeros((space.n, space.n))
    total_sq = np.zeros_like(total)
    worst = 0.0
    for s in _map_ordered(one, range(n_samples), threads):
        total += s
        total_sq += s * s
        worst = max(worst, float(s.max()))
    mean = total / n_samples
    if n_samples > 1:
        var = np.maximum(total_sq / n_samples - mean**2, 0.0) * n_samples / (n_samples - 1)
        stderr = np.sqrt(var / n_samples)
    else:
        stderr = np.zeros_like(mean)
    return {
        "mean": mean,
        "stderr": stderr,
        "max_mean": float(mean.max()) if space.n > 1 else 0.0,
        "max_sample": worst,
        "n_samples": int(n_samples),
    }


def retention_probability(
    space: FiniteMetricSpace, R: float, t: float, n_samples: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Empirical ``P(B_t(x) inside the cluster of x)`` for each ``x`` under one-level carving.

    Returns the per-point frequencies and their standard errors.
    """
    if n_samples < 1:
        raise InvalidSize("n_samples must be >= 1")
    balls = [np.array(sorted(ball(space, x, t))) for x in range(space.n)]
    hits = np.zeros(space.n)
    for i in range(n_samples):
        clusters = sample_frt_partition(space, R, component_rng(seed, i))
        lab = np.empty(space.n, dtype=np.int64)
        for c, B in enumerate(clusters):
            lab[list(B)] = c
        for x in range(space.n):
            hits[x] += np.all(lab[balls[x]] == lab[x])
    p = hits / n_samples
    return p, np.sqrt(p * (1 - p) / n_samples)


def retention_bound(space: FiniteMetricSpace, R: float, t: float) -> np.ndarray:
    """``(|B_{R/8}(x)| / |B_R(x)|) ** (8 t / R)`` for each point."""
    small = np.array([len(ball(space, x, R / 8)) for x in range(space.n)])
    big = np.array([len(ball(space, x, R)) for x in range(space.n)])
    return (small / big) ** (8 * t / R)
