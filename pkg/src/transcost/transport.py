"""Zero-sum measures, molecular representations and the transportation-cost norm.

The norm is computed exactly by a successive-shortest-path min-cost flow on
the bipartite network ``supp(mu+) x supp(mu-)``. The final node potentials of
that flow give a Kantorovich dual certificate.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    InvalidMeasure,
    InvalidSize,
    NotOneLipschitz,
    NotProbability,
    SizeMismatch,
    ZeroMeasure,
)
from .metric import FiniteMetricSpace, WeightedGraph, geodesic_metric

__all__ = [
    "ZeroSumMeasure",
    "MolecularRepresentation",
    "TransportPlan",
    "LipschitzFunction",
    "random_measure",
    "tc_norm",
    "dual_potential",
    "transport_cost",
    "make_disjoint",
    "verify_optimality",
    "wasserstein",
    "optimal_bijection",
    "extreme_molecules",
    "recognize_tree_metric",
    "lip_norm",
]

SUM_TOL = 1e-12


def _number(v):
    # keep exact rationals exact, everything else becomes a float
    if isinstance(v, (Fraction, int)) and not isinstance(v, bool):
        return v
    if isinstance(v, numbers.Integral):
        return int(v)
    return float(v)


@dataclass(frozen=True, eq=False)
class ZeroSumMeasure:
    """Finitely supported signed measure with total mass zero.

    ``coeffs`` maps point index to mass; zero entries are dropped. Values
    may be floats or :class:`fractions.Fraction`.
    """

    space: FiniteMetricSpace
    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        n = self.space.n
        clean = {}
        for k, v in dict(self.coeffs).items():
            i = int(k)
            if not 0 <= i < n:
                raise InvalidMeasure(f"point {i} is not in the space")
            v = _number(v)
            if isinstance(v, float) and not np.isfinite(v):
                raise InvalidMeasure(f"non-finite mass at {i}")
            if v != 0:
                clean[i] = clean.get(i, 0) + v
        clean = {i: v for i, v in sorted(clean.items()) if v != 0}
        total = sum(clean.values())
        if abs(total) > SUM_TOL:
            raise InvalidMeasure(f"coefficients sum to {float(total):.3g}, not 0")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_array(cls, space: FiniteMetricSpace, values) -> "ZeroSumMeasure":
        values = np.asarray(values, dtype=float)
        if values.shape != (space.n,):
            raise SizeMismatch(f"expected {space.n} values, got shape {values.shape}")
        return cls(space, {i: float(v) for i, v in enumerate(values) if v != 0})

    @classmethod
    def molecule(cls, space: FiniteMetricSpace, x: int, y: int, r=1.0) -> "ZeroSumMeasure":
        """``r * (delta_x - delta_y)``."""
        if x == y:
            return cls(space, {})
        return cls(space, {x: r, y: -r})

    def __getitem__(self, i):
        return self.coeffs.get(int(i), 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def support(self) -> list[int]:
        return list(self.coeffs)

    def positive(self) -> dict:
        return {i: v for i, v in self.coeffs.items() if v > 0}

    def negative(self) -> dict:
        """Negative part as a nonnegative mapping."""
        return {i: -v for i, v in self.coeffs.items() if v < 0}

    def as_array(self) -> np.ndarray:
        out = np.zeros(self.space.n)
        for i, v in self.coeffs.items():
            out[i] = float(v)
        return out

    def inf_norm(self) -> float:
        return max((abs(float(v)) for v in self.coeffs.values()), default=0.0)

    def _check_same(self, other):
        if other.space is not self.space:
            raise SizeMismatch("measures live on different spaces")

    def __add__(self, other):
        self._check_same(other)
        c = dict(self.coeffs)
        for i, v in other.coeffs.items():
            c[i] = c.get(i, 0) + v
        return ZeroSumMeasure(self.space, c)

    def __neg__(self):
        return ZeroSumMeasure(self.space, {i: -v for i, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        return ZeroSumMeasure(self.space, {i: s * v for i, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ZeroSumMeasure) and other.space is self.space and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __repr__(self):
        return f"ZeroSumMeasure({self.coeffs})"


@dataclass(frozen=True, eq=False)
class MolecularRepresentation:
    """A list of terms ``(r, x, y)`` standing for ``sum r (delta_x - delta_y)``."""

    space: FiniteMetricSpace
    terms: tuple = ()

    def __post_init__(self):
        clean = []
        for r, x, y in self.terms:
            r = _number(r)
            x, y = int(x), int(y)
            if not r > 0:
                raise InvalidMeasure(f"term weight {r} must be positive")
            if x == y:
                raise InvalidMeasure(f"term ({r}, {x}, {y}) has x == y")
            if not (0 <= x < self.space.n and 0 <= y < self.space.n):
                raise InvalidMeasure("term references a point outside the space")
            clean.append((r, x, y))
        object.__setattr__(self, "terms", tuple(clean))

    def __len__(self):
        return len(self.terms)

    def sources(self) -> set[int]:
        return {x for _, x, _ in self.terms}

    def targets(self) -> set[int]:
        return {y for _, _, y in self.terms}

    def is_disjoint(self) -> bool:
        return not (self.sources() & self.targets())

    def reconstruct(self) -> ZeroSumMeasure:
        c: dict = {}
        for r, x, y in self.terms:
            c[x] = c.get(x, 0) + r
            c[y] = c.get(y, 0) - r
        return ZeroSumMeasure(self.space, c)


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Coupling between ``mu+`` (rows) and ``mu-`` (columns)."""

    rows: tuple
    cols: tuple
    mass: np.ndarray

    def entries(self) -> list[tuple[int, int, float]]:
        """Nonzero ``(row point, col point, mass)`` triples in row-major order."""
        out = []
        for a, b in zip(*np.nonzero(self.mass)):
            out.append((self.rows[a], self.cols[b], float(self.mass[a, b])))
        return out

    def cost(self, space: FiniteMetricSpace) -> float:
        if not self.rows:
            return 0.0
        return float(np.sum(self.mass * space.dist[np.ix_(self.rows, self.cols)]))

    def as_representation(self, space: FiniteMetricSpace) -> MolecularRepresentation:
        return MolecularRepresentation(space, tuple((m, x, y) for x, y, m in self.entries()))


@dataclass(frozen=True, eq=False)
class LipschitzFunction:
    """Real function on the points, normalised to vanish at the base point."""

    space: FiniteMetricSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.space.n,):
            raise SizeMismatch(f"expected {self.space.n} values, got shape {v.shape}")
        v = v - v[self.space.base_point]
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __call__(self, x: int) -> float:
        return float(self.values[x])

    def lip_norm(self) -> float:
        return lip_norm(self.space, self.values)

    def pair(self, mu: ZeroSumMeasure) -> float:
        """``<f, mu> = sum_x f(x) mu(x)``."""
        return float(sum(self.values[i] * float(v) for i, v in mu.coeffs.items()))


def lip_norm(space: FiniteMetricSpace, values) -> float:
    """``max |f(x) - f(y)| / d(x, y)`` over distinct pairs."""
    f = np.asarray(values, dtype=float)
    if space.n < 2:
        return 0.0
    iu = np.triu_indices(space.n, 1)
    return float(np.max(np.abs(f[:, None] - f[None, :])[iu] / space.dist[iu]))


def random_measure(space: FiniteMetricSpace, rng, support: int | None = None) -> ZeroSumMeasure:
    """Random nonzero zero-sum measure with Gaussian masses."""
    n = space.n
    if n < 2:
        raise InvalidSize("need at least two points for a nonzero measure")
    k = n if support is None else max(2, min(int(support), n))
    idx = np.sort(rng.choice(n, size=k, replace=False))
    vals = rng.normal(size=k)
    vals -= vals.mean()
    # put the rounding residue on the largest entry so the sum is tiny
    vals[np.argmax(np.abs(vals))] -= vals.sum()
    return ZeroSumMeasure(space, dict(zip(idx.tolist(), vals.tolist())))


# --- exact min-cost flow ----------------------------------------------------


def _ssp_transport(supply: np.ndarray, demand: np.ndarray, cost: np.ndarray):
    """Successive shortest paths on a complete bipartite network.

    Returns ``(flow, pot_src, pot_snk)`` where the potentials satisfy
    ``cost[i, j] + pot_src[i] - pot_snk[j] >= 0`` with equality wherever flow
    is positive (up to rounding).
    """
    m, k = cost.shape
    flow = np.zeros((m, k))
    sup = supply.astype(float).copy()
    dem = demand.astype(float).copy()
    pot_s = np.zeros(m)
    pot_t = np.zeros(k)
    eps = 1e-12 * max(float(supply.sum()), 1.0)
    inf = np.inf
    for _ in range(50 * (m + k) + 1000):
        if sup.max() <= eps or dem.max() <= eps:
            break
        # Dijkstra over sources (0..m-1) and sinks (m..m+k-1) on reduced costs,
        # started simultaneously from every source with remaining supply
        ds = np.where(sup > eps, 0.0, inf)
        dt = np.full(k, inf)
        pred_t = np.full(k, -1)  # source feeding sink j
        pred_s = np.full(m, -1)  # sink feeding source i via a reverse arc
        done_s = np.zeros(m, dtype=bool)
        done_t = np.zeros(k, dtype=bool)
        while True:
            cs = np.where(done_s, inf, ds)
            ct = np.where(done_t, inf, dt)
            i = int(np.argmin(cs))
            j = int(np.argmin(ct))
            if cs[i] == inf and ct[j] == inf:
                break
            if cs[i] <= ct[j]:
                done_s[i] = True
                red = np.maximum(cost[i] + pot_s[i] - pot_t, 0.0)
                cand = ds[i] + red
                better = (~done_t) & (cand < dt)
                dt[better] = cand[better]
                pred_t[better] = i
            else:
                done_t[j] = True
                back = flow[:, j] > eps
                red = np.maximum(-cost[:, j] + pot_t[j] - pot_s, 0.0)
                cand = dt[j] + red
                better = (~done_s) & back & (cand < ds)
                ds[better] = cand[better]
                pred_s[better] = j
        open_t = np.where((dem > eps) & np.isfinite(dt), dt, inf)
        j = int(np.argmin(open_t))
        if open_t[j] == inf:
            break
        dj = dt[j]
        # keep reduced costs nonnegative
        pot_s += np.minimum(ds, dj)
        pot_t += np.minimum(dt, dj)
        # walk back: forward arcs (i -> jj) gain flow, reverse arcs
        # (jj' -> i) cancel flow on (i, jj')
        fwd, rev = [], []
        jj = j
        while True:
            i = int(pred_t[jj])
            fwd.append((i, jj))
            if pred_s[i] < 0:
                break
            jj = int(pred_s[i])
            rev.append((i, jj))
        i0 = fwd[-1][0]
        delta = min(sup[i0], dem[j])
        for i, jj in rev:
            delta = min(delta, flow[i, jj])
        for i, jj in fwd:
            flow[i, jj] += delta
        for i, jj in rev:
            flow[i, jj] -= delta
            if flow[i, jj] <= eps:
                flow[i, jj] = 0.0
        sup[i0] -= delta
        dem[j] -= delta
    return flow, pot_s, pot_t


def _solve(mu: ZeroSumMeasure):
    pos, neg = mu.positive(), mu.negative()
    rows, cols = tuple(pos), tuple(neg)
    supply = np.array([float(v) for v in pos.values()])
    demand = np.array([float(v) for v in neg.values()])
    # absorb the (at most 1e-12) imbalance into the largest demand
    demand[np.argmax(demand)] += supply.sum() - demand.sum()
    cost = mu.space.dist[np.ix_(rows, cols)]
    flow, pot_s, pot_t = _ssp_transport(supply, demand, cost)
    return rows, cols, flow, pot_s, pot_t


def tc_norm(mu: ZeroSumMeasure) -> tuple[float, TransportPlan]:
    """Transportation-cost norm of ``mu`` and an optimal plan.

    The zero measure has norm 0 and an empty plan.

    Examples
    --------
    >>> from transcost.metric import geodesic_metric, path_graph
    >>> M = geodesic_metric(path_graph(3))
    >>> tc_norm(ZeroSumMeasure.molecule(M, 0, 2))[0]
    2.0
    """
    if mu.is_zero():
        return 0.0, TransportPlan((), (), np.zeros((0, 0)))
    rows, cols, flow, _, _ = _solve(mu)
    plan = TransportPlan(rows, cols, flow)
    return plan.cost(mu.space), plan


def dual_potential(mu: ZeroSumMeasure) -> LipschitzFunction:
    """1-Lipschitz ``f`` with ``f(base) = 0`` and ``<f, mu> = ||mu||_tc``.

    The flow potentials fix ``f`` on the support; the extension
    ``f(z) = min_y (f(y) + d(z, y))`` over sinks ``y`` keeps it 1-Lipschitz
    and leaves every source value unchanged.
    """
    if mu.is_zero():
        raise ZeroMeasure("the zero measure has no dual certificate")
    rows, cols, _, _, pot_t = _solve(mu)
    d = mu.space.dist
    g = -pot_t
    f = np.min(g[None, :] + d[:, list(cols)], axis=1)
    return LipschitzFunction(mu.space, f)


def transport_cost(rep: MolecularRepresentation) -> float:
    """``sum r d(x, y)`` over the terms."""
    d = rep.space.dist
    return float(sum(float(r) * d[x, y] for r, x, y in rep.terms))


def make_disjoint(rep: MolecularRepresentation) -> MolecularRepresentation:
    """Reroute terms until no point is both a source and a target.

    Whenever ``p`` is the target of a term ``(r_b, x_b, p)`` and the source of
    ``(r_a, p, y_a)``, the common mass ``min(r_a, r_b)`` is sent directly from
    ``x_b`` to ``y_a``. By the triangle inequality the cost never grows and
    the represented measure is unchanged.
    """
    terms = [list(t) for t in rep.terms]
    while True:
        shared = sorted({t[1] for t in terms} & {t[2] for t in terms})
        if not shared:
            break
        p = shared[0]
        ia = next(k for k, t in enumerate(terms) if t[1] == p)
        ib = next(k for k, t in enumerate(terms) if t[2] == p)
        ra, _, ya = terms[ia]
        rb, xb, _ = terms[ib]
        if ra >= rb:
            new = [(ra - rb, p, ya), (rb, xb, ya)]
        else:
            new = [(rb - ra, xb, p), (ra, xb, ya)]
        keep = [t for k, t in enumerate(terms) if k not in (ia, ib)]
        lo = min(ia, ib)
        new = [list(t) for t in new if t[0] > 0 and t[1] != t[2]]
        terms = keep[:lo] + new + keep[lo:]
    return MolecularRepresentation(rep.space, tuple(tuple(t) for t in terms))


def verify_optimality(rep: MolecularRepresentation, f: LipschitzFunction, tol: float = 1e-7) -> bool:
    """True iff ``f(x) - f(y) = d(x, y)`` on every term.

    Raises
    ------
    NotOneLipschitz
        ``Lip(f) > 1 + 1e-9``; such an ``f`` certifies nothing.
    """
    if f.lip_norm() > 1 + 1e-9:
        raise NotOneLipschitz(f"Lip(f) = {f.lip_norm():.12g} > 1")
    d = rep.space.dist
    return all(abs(f.values[x] - f.values[y] - d[x, y]) <= tol for _, x, y in rep.terms)


def _as_probability(space: FiniteMetricSpace, p) -> np.ndarray:
    if isinstance(p, Mapping):
        arr = np.zeros(space.n)
        for i, v in p.items():
            arr[int(i)] = float(v)
    else:
        arr = np.asarray(p, dtype=float)
    if arr.shape != (space.n,):
        raise NotProbability(f"expected a vector of length {space.n}")
    if np.any(arr < 0) or abs(arr.sum() - 1) > 1e-9:
        raise NotProbability("weights must be nonnegative and sum to 1")
    return arr


def wasserstein(space: FiniteMetricSpace, sigma, tau) -> float:
    """Wasserstein-1 distance between two probability vectors on ``space``."""
    s = _as_probability(space, sigma)
    t = _as_probability(space, tau)
    diff = s - t
    diff[np.argmax(np.abs(diff))] -= diff.sum()
    return tc_norm(ZeroSumMeasure.from_array(space, diff))[0]


def optimal_bijection(space: FiniteMetricSpace, A: Iterable[int], B: Iterable[int]) -> tuple[dict, float]:
    """Minimum-cost bijection ``A -> B`` and its total cost.

    Raises
    ------
    SizeMismatch
        ``|A| != |B|`` or either set is empty.
    """
    A, B = list(A), list(B)
    if len(A) != len(B) or not A:
        raise SizeMismatch(f"|A| = {len(A)} and |B| = {len(B)} must be equal and positive")
    cost = space.dist[np.ix_(A, B)]
    r, c = linear_sum_assignment(cost)
    mapping = {A[i]: B[j] for i, j in zip(r, c)}
    return mapping, float(cost[r, c].sum())


def extreme_molecules(space: FiniteMetricSpace) -> list[tuple[int, int]]:
    """Pairs ``x < y`` with no third point ``z`` on a geodesic between them."""
    d = space.dist
    n = space.n
    out = []
    for x in range(n):
        for y in range(x + 1, n):
            via = d[x] + d[:, y]
            via[[x, y]] = np.inf
            if not np.any(via <= d[x, y] * (1 + 1e-9)):
                out.append((x, y))
    return out


def recognize_tree_metric(space: FiniteMetricSpace) -> WeightedGraph | None:
    """Return the tree whose geodesic metric is ``space``, or ``None``."""
    n = space.n
    if n == 1:
        return WeightedGraph(1, ())
    pairs = extreme_molecules(space)
    if len(pairs) != n - 1:
        return None
    g = WeightedGraph(n, tuple((x, y, space.d(x, y)) for x, y in pairs))
    if not g.is_connected():
        return None
    d = geodesic_metric(g).dist
    if not np.allclose(d, space.dist, rtol=0, atol=1e-9 * (1 + space.dist.max())):
        return None
    return g
