"""JSON and CSV formats for spaces, measures, trees, embeddings and fields."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .calculus import VectorField
from .embedding import StochasticTreeEmbedding
from .errors import InvalidMeasure, InvalidTree, TranscostError
from .metric import FiniteMetricSpace, WeightedGraph, geodesic_metric, validate_metric
from .transport import TransportPlan, ZeroSumMeasure
from .trees import RootedWeightedTree

__all__ = [
    "FormatError",
    "metric_to_json",
    "metric_from_json",
    "graph_to_json",
    "graph_from_json",
    "space_from_json",
    "measure_to_json",
    "measure_from_json",
    "tree_to_json",
    "tree_from_json",
    "embedding_to_json",
    "embedding_from_json",
    "field_to_json",
    "field_from_json",
    "sparse_vector",
    "plan_rows",
    "to_csv",
    "dumps",
    "load_json",
]


class FormatError(TranscostError):
    code = "format_error"


def dumps(obj) -> str:
    """Canonical JSON text with sorted keys."""
    return json.dumps(obj, sort_keys=True, allow_nan=False)


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise FormatError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from None


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"missing keys: {', '.join(missing)}")


# -- metric spaces and graphs --------------------------------------------------


def metric_to_json(space: FiniteMetricSpace) -> dict:
    return {"points": list(space.points), "dist": space.dist.tolist(), "base": space.base_point}


def metric_from_json(obj) -> FiniteMetricSpace:
    _require(obj, "dist")
    return validate_metric(obj["dist"], int(obj.get("base", 0)), obj.get("points"))


def graph_to_json(graph: WeightedGraph) -> dict:
    return {"n": graph.n, "edges": [[u, v, w] for u, v, w in graph.edges]}


def graph_from_json(obj) -> WeightedGraph:
    _require(obj, "n", "edges")
    try:
        return WeightedGraph(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))
    except (TypeError, IndexError) as exc:
        raise FormatError(f"bad edge list: {exc}") from None


def space_from_json(obj, base_dir: Path | None = None) -> FiniteMetricSpace:
    """A metric given inline (``dist``), as a graph (``edges``) or as a file path."""
    if isinstance(obj, str):
        path = Path(obj)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return space_from_json(load_json(path), path.parent)
    if isinstance(obj, dict) and "dist" in obj:
        return metric_from_json(obj)
    if isinstance(obj, dict) and "edges" in obj:
        return geodesic_metric(graph_from_json(obj), int(obj.get("base", 0)))
    raise FormatError("space must be a metric, a graph or a file path")


# -- measures ------------------------------------------------------------------


def measure_to_json(mu: ZeroSumMeasure, space_ref=None) -> dict:
    out = {"coeffs": {str(i): float(v) for i, v in mu.coeffs.items()}}
    out["space"] = metric_to_json(mu.space) if space_ref is None else space_ref
    return out


def measure_from_json(obj, space: FiniteMetricSpace | None = None, base_dir: Path | None = None) -> ZeroSumMeasure:
    """Parse ``{"space": ..., "coeffs": {"i": value}}``.

    An explicit ``space`` argument overrides the embedded reference.
    """
    _require(obj, "coeffs")
    if space is None:
        if "space" not in obj:
            raise InvalidMeasure("measure has no space and none was supplied")
        space = space_from_json(obj["space"], base_dir)
    coeffs = obj["coeffs"]
    if isinstance(coeffs, list):
        coeffs = dict(enumerate(coeffs))
    try:
        return ZeroSumMeasure(space, {int(k): float(v) for k, v in coeffs.items()})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, TranscostError):
            raise
        raise FormatError(f"bad coefficients: {exc}") from None


# -- trees and embeddings --------------------------------------------------------


def tree_to_json(tree: RootedWeightedTree) -> dict:
    return {
        "n": tree.n,
        "root": tree.root,
        "parents": tree.parent.tolist(),
        "weights": tree.weight.tolist(),
    }


def tree_from_json(obj) -> RootedWeightedTree:
    _require(obj, "n", "root", "parents", "weights")
    parents = [-1 if p is None else int(p) for p in obj["parents"]]
    weights = [0.0 if w is None else float(w) for w in obj["weights"]]
    if len(parents) != int(obj["n"]):
        raise InvalidTree("parents must have n entries")
    return RootedWeightedTree(int(obj["n"]), int(obj["root"]), parents, weights)


def sparse_vector(vec, skip=None) -> dict:
    """``{"index": value}`` for the nonzero entries of ``vec``."""
    return {str(i): float(v) for i, v in enumerate(vec) if v != 0 and i != skip}


def embedding_to_json(emb: StochasticTreeEmbedding) -> dict:
    return {
        "p": [p for p, _, _ in emb.components],
        "trees": [tree_to_json(t) for _, t, _ in emb.components],
        "maps": [vm.tolist() for _, _, vm in emb.components],
    }


def embedding_from_json(obj, base: FiniteMetricSpace) -> StochasticTreeEmbedding:
    _require(obj, "p", "trees", "maps")
    if not len(obj["p"]) == len(obj["trees"]) == len(obj["maps"]):
        raise FormatError("p, trees and maps must have equal length")
    comps = tuple(
        (float(p), tree_from_json(t), np.array(m, dtype=np.int64))
        for p, t, m in zip(obj["p"], obj["trees"], obj["maps"])
    )
    return StochasticTreeEmbedding(base, comps)


# -- vector fields ---------------------------------------------------------------


def field_to_json(f: VectorField) -> dict:
    """Edges as ``[u, v, f(u, v)]`` with ``u < v``; ``f(v, u)`` is the negative."""
    return {"edges": [[u, v, val] for u, v, val in f.oriented()]}


def field_from_json(obj, graph: WeightedGraph, metric: FiniteMetricSpace | None = None) -> VectorField:
    _require(obj, "edges")
    return VectorField.from_edges(graph, obj["edges"], metric)


# -- CSV -------------------------------------------------------------------------


def plan_rows(plan: TransportPlan) -> list[tuple]:
    return [(x, y, m) for x, y, m in plan.entries()]


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()
