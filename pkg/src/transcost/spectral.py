"""Isoperimetric constants, Sobolev inequalities and Lipschitz-spectral profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidMeasure, InvalidParameters, InvalidSize, SizeMismatch, TooLargeForExhaustive
from .metric import FiniteMetricSpace, WeightedGraph, geodesic_metric, torus_graph

__all__ = [
    "EdgeMeasure",
    "SpectralProfile",
    "induced_vertex_measure",
    "perimeter",
    "isoperimetric_constant",
    "sobolev_norm",
    "sobolev_check",
    "torus_characters",
    "torus_spectral_profile",
    "profile_constant",
    "lower_bound_estimate",
    "EXHAUSTIVE_LIMIT",
]

EXHAUSTIVE_LIMIT = 24


@dataclass(frozen=True, eq=False)
class EdgeMeasure:
    """Strictly positive probability on the edges of ``graph`` (in edge order)."""

    graph: WeightedGraph
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.graph.edges),):
            raise SizeMismatch(f"expected {len(self.graph.edges)} edge masses")
        if np.any(~(v > 0)) or abs(v.sum() - 1.0) > 1e-12:
            raise InvalidMeasure("edge measure must be positive on every edge and sum to 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, graph: WeightedGraph) -> "EdgeMeasure":
        m = len(graph.edges)
        if m == 0:
            raise InvalidMeasure("graph has no edges")
        return cls(graph, np.full(m, 1.0 / m))

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        u = np.array([a for a, _, _ in self.graph.edges], dtype=np.int64)
        v = np.array([b for _, b, _ in self.graph.edges], dtype=np.int64)
        return u, v


def induced_vertex_measure(nu: EdgeMeasure) -> np.ndarray:
    """``mu(v) = 1/2 sum of nu(e) over edges e at v``; a probability vector."""
    u, v = nu.endpoints()
    mu = np.zeros(nu.graph.n)
    np.add.at(mu, u, nu.values / 2)
    np.add.at(mu, v, nu.values / 2)
    return mu


def _edge_ratio(nu: EdgeMeasure, metric: FiniteMetricSpace) -> np.ndarray:
    u, v = nu.endpoints()
    return nu.values / metric.dist[u, v]


def perimeter(A, nu: EdgeMeasure, metric: FiniteMetricSpace | None = None) -> float:
    """``sum nu(e) / d(e)`` over edges with exactly one endpoint in ``A``."""
    metric = geodesic_metric(nu.graph) if metric is None else metric
    inside = np.zeros(nu.graph.n, dtype=bool)
    inside[list(A)] = True
    u, v = nu.endpoints()
    return float(np.sum(_edge_ratio(nu, metric)[inside[u] != inside[v]]))


def _iso_scores(member: np.ndarray, mu, ratio, u, v, delta) -> np.ndarray:
    mass = member @ mu
    lo = np.minimum(mass, 1.0 - mass)
    per = (member[:, u] != member[:, v]) @ ratio
    lhs = np.ones_like(lo) if delta == 1 else np.maximum(lo, 0.0) ** ((delta - 1) / delta)
    return lhs / per


def isoperimetric_constant(
    graph: WeightedGraph,
    nu: EdgeMeasure | None = None,
    metric: FiniteMetricSpace | None = None,
    delta: float = 1.0,
    mode="exhaustive",
    seed: int = 0,
) -> float:
    """Least ``C`` with ``min(mu(A), mu(A^c))**((delta-1)/delta) <= C Per(A)``.

    Parameters
    ----------
    mode : "exhaustive" or ("sampled", k)
        Exhaustive mode scans every nonempty proper subset and needs at most
        ``EXHAUSTIVE_LIMIT`` vertices. Sampled mode scans ``k`` random subsets
        together with all singletons and balls and returns a lower bound.

    Examples
    --------
    >>> from transcost.metric import cycle_graph
    >>> isoperimetric_constant(cycle_graph(6))
    3.0
    """
    if delta < 1:
        raise InvalidParameters("delta must be >= 1")
    nu = EdgeMeasure.uniform(graph) if nu is None else nu
    metric = geodesic_metric(graph) if metric is None else metric
    n = graph.n
    if n < 2:
        raise InvalidSize("need at least two vertices")
    mu = induced_vertex_measure(nu)
    ratio = _edge_ratio(nu, metric)
    u, v = nu.endpoints()
    bits = np.arange(n, dtype=np.int64)
    best = 0.0
    if mode == "exhaustive":
        if n > EXHAUSTIVE_LIMIT:
            raise TooLargeForExhaustive(f"{n} vertices exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}")
        # subsets avoiding the last vertex meet every complementary pair once
        total = 1 << (n - 1)
        chunk = 1 << 16
        for start in range(1, total, chunk):
            masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
            member = ((masks[:, None] >> bits) & 1).astype(bool)
            best = max(best, float(_iso_scores(member, mu, ratio, u, v, delta).max()))
        return best
    if isinstance(mode, (tuple, list)) and len(mode) == 2 and mode[0] == "sampled":
        k = int(mode[1])
        rng = np.random.default_rng(seed)
        sets = [rng.random((k, n)) < 0.5] if k > 0 else []
        sets.append(np.eye(n, dtype=bool))
        for x in range(n):
            for r in np.unique(metric.dist[x]):
                sets.append((metric.dist[x] <= r)[None, :])
        member = np.vstack(sets)
        sizes = member.sum(1)
        member = member[(sizes > 0) & (sizes < n)]
        return float(_iso_scores(member, mu, ratio, u, v, delta).max())
    raise InvalidParameters(f"unknown mode {mode!r}")


def sobolev_norm(F, nu: EdgeMeasure, metric: FiniteMetricSpace | None = None, p: float = 1.0) -> float:
    """``|| grad F ||_{L_p(nu)}`` with ``grad F(e) = (F(v) - F(u)) / d(u, v)``."""
    if p < 1:
        raise InvalidParameters("p must be >= 1")
    metric = geodesic_metric(nu.graph) if metric is None else metric
    F = np.asarray(F, dtype=float)
    u, v = nu.endpoints()
    g = np.abs(F[v] - F[u]) / metric.dist[u, v]
    if math.isinf(p):
        return float(g.max())
    return float(np.sum(nu.values * g**p) ** (1.0 / p))


def sobolev_check(F, nu: EdgeMeasure, metric: FiniteMetricSpace | None, delta: float, C: float) -> tuple[float, float, bool]:
    """Both sides of ``||F - E F||_{L_delta'(mu)} <= 2 C ||F||_{W^{1,1}}``.

    ``delta' = delta / (delta - 1)``, read as infinity when ``delta = 1``.
    """
    if delta < 1:
        raise InvalidParameters("delta must be >= 1")
    F = np.asarray(F, dtype=float)
    mu = induced_vertex_measure(nu)
    centred = np.abs(F - mu @ F)
    if delta == 1:
        lhs = float(centred[mu > 0].max())
    else:
        q = delta / (delta - 1)
        lhs = float(np.sum(mu * centred**q) ** (1.0 / q))
    rhs = 2.0 * C * sobolev_norm(F, nu, metric, 1.0)
    return lhs, rhs, lhs <= rhs + 1e-9


# --- Lipschitz-spectral profile of the torus --------------------------------


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Orthogonal function family with its Lipschitz constants.

    ``functions[i]`` is a vertex function, ``lip[i]`` its Lipschitz
    constant, ``frequencies[i]`` the generating character ``(k, m)`` (centred
    representatives) and ``kind[i]`` either ``"cos"`` or ``"sin"``.
    ``amplitude`` rescales the family so its smallest Lipschitz constant is 1,
    ``beta`` is then the largest one and ``C`` is the least constant for which
    the L1/Linf bounds and the counting condition with exponent ``delta`` hold.
    """

    n: int
    functions: np.ndarray
    lip: np.ndarray
    frequencies: tuple
    kind: tuple
    mu: np.ndarray
    metric: FiniteMetricSpace
    delta: float
    amplitude: float
    beta: float
    C: float

    def scaled(self) -> np.ndarray:
        return self.amplitude * self.functions

    def scaled_lip(self) -> np.ndarray:
        return self.amplitude * self.lip

    def gram(self) -> np.ndarray:
        """``L2(mu)`` inner products of the family."""
        return (self.functions * self.mu) @ self.functions.T

    def count(self, s: float) -> int:
        """Members of the rescaled family with Lipschitz constant at most ``s``."""
        return int(np.sum(self.scaled_lip() <= s * (1 + 1e-12)))


def _centred(k: int, n: int) -> int:
    return k - n if k > n // 2 else k


def torus_characters(n: int) -> tuple[np.ndarray, tuple, tuple]:
    """Real parts and imaginary parts of the nontrivial characters of ``(Z/n)^2``.

    One representative is kept per conjugate pair; sines of self-conjugate
    characters vanish and are skipped, leaving ``n**2 - 1`` functions.
    Vertex ``(x, y)`` has index ``x * n + y``.
    """
    if n < 2:
        raise InvalidSize("torus profile needs n >= 2")
    x, y = np.divmod(np.arange(n * n), n)
    funcs, freqs, kinds = [], [], []
    seen = set()
    for k in range(n):
        for m in range(n):
            if (k, m) == (0, 0) or (k, m) in seen:
                continue
            conj = ((-k) % n, (-m) % n)
            seen.update({(k, m), conj})
            theta = 2 * np.pi * (x * k + y * m) / n
            freq = (_centred(k, n), _centred(m, n))
            funcs.append(np.cos(theta))
            freqs.append(freq)
            kinds.append("cos")
            if conj != (k, m):
                funcs.append(np.sin(theta))
                freqs.append(freq)
                kinds.append("sin")
    return np.array(funcs), tuple(freqs), tuple(kinds)


def _torus_max_metric(n: int) -> FiniteMetricSpace:
    x, y = np.divmod(np.arange(n * n), n)
    dx = np.abs(x[:, None] - x[None, :])
    dy = np.abs(y[:, None] - y[None, :])
    dx = np.minimum(dx, n - dx)
    dy = np.minimum(dy, n - dy)
    return FiniteMetricSpace(np.maximum(dx, dy) / n)


def profile_constant(lip_scaled: np.ndarray, l1: np.ndarray, linf: np.ndarray, delta: float, beta: float) -> float:
    """Least ``C`` with ``1/C <= ||f||_1``, ``||f||_inf <= C`` and
    ``#{Lip <= s} >= s**delta / C`` on ``[1, beta]``.

    The counting ratio ``s**delta / #{Lip <= s}`` only peaks just before a
    jump of the count or at ``beta``, so those points are checked.
    """
    L = np.sort(lip_scaled)
    C = max(1.0 / float(l1.min()), float(linf.max()))
    if np.sum(L <= 1 + 1e-12) == 0:
        return math.inf
    for t in np.unique(L[(L > 1 + 1e-12) & (L <= beta * (1 + 1e-12))]):
        C = max(C, t**delta / int(np.sum(L < t * (1 - 1e-12))))
    return float(max(C, beta**delta / int(np.sum(L <= beta * (1 + 1e-12)))))


def torus_spectral_profile(n: int, metric: str = "l1", delta: float = 2.0) -> SpectralProfile:
    """Character profile of the discrete torus.

    Parameters
    ----------
    metric : {"l1", "max"}
        ``"l1"`` is the nearest-neighbour path metric of the torus scaled by
        ``1/n``; ``"max"`` is ``(1/n)`` times the cyclic max-coordinate
        distance. Lipschitz constants are exact maxima over all pairs.
    """
    funcs, freqs, kinds = torus_characters(n)
    if metric == "l1":
        space = geodesic_metric(torus_graph(n).scaled(1.0 / n))
    elif metric == "max":
        space = _torus_max_metric(n)
    else:
        raise InvalidParameters(f"unknown torus metric {metric!r}")
    mu = np.full(n * n, 1.0 / (n * n))
    iu = np.triu_indices(n * n, 1)
    dist = space.dist[iu]
    lip = np.array([np.max(np.abs(f[iu[0]] - f[iu[1]]) / dist) for f in funcs])
    amp = 1.0 / float(lip.min())
    beta = float(lip.max()) * amp
    l1 = amp * (np.abs(funcs) @ mu)
    linf = amp * np.abs(funcs).max(1)
    C = profile_constant(amp * lip, l1, linf, delta, beta)
    return SpectralProfile(n, funcs, lip, freqs, kinds, mu, space, delta, amp, beta, C)


def lower_bound_estimate(delta_iso: float, delta_spec: float, beta: float, C: float) -> float:
    """``(int_1^beta s**(delta_spec - delta_iso - 1) ds)**(1/delta_iso) / (2 C**5)``.

    Examples
    --------
    >>> lower_bound_estimate(2, 2, math.e**4, 1)
    1.0
    """
    if delta_iso < 2 or delta_spec < 1 or beta < 1 or C < 1:
        raise InvalidParameters("need delta_iso >= 2, delta_spec >= 1, beta >= 1 and C >= 1")
    e = delta_spec - delta_iso
    integral = math.log(beta) if e == 0 else (beta**e - 1.0) / e
    return integral ** (1.0 / delta_iso) / (2.0 * C**5)
