"""Command line front end.

Every subcommand prints one JSON document (or CSV with ``--csv``) and exits
with 0 on success, 1 on a domain error and 2 on a usage error. Domain errors
are reported on stderr as ``{"error": code, "message": text}``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calculus import (
    VectorField,
    edge_stretch_constant,
    extend_integral_operator,
    gradient,
    integral_operator,
    is_conservative,
    vertex_lip,
)
from .embedding import bijective_embedding, build_l1_map, measure_distortion
from .errors import TranscostError
from .frt import component_rng, estimate_expected_stretch
from .gupta import gupta_restrict
from .io import (
    FormatError,
    dumps,
    embedding_to_json,
    field_from_json,
    graph_from_json,
    graph_to_json,
    load_json,
    measure_from_json,
    metric_from_json,
    plan_rows,
    sparse_vector,
    to_csv,
    tree_from_json,
    tree_to_json,
)
from .metric import FiniteMetricSpace, WeightedGraph, generate_family, geodesic_metric
from .spectral import (
    EXHAUSTIVE_LIMIT,
    EdgeMeasure,
    isoperimetric_constant,
    lower_bound_estimate,
    sobolev_check,
    torus_spectral_profile,
)
from .transport import (
    dual_potential,
    random_measure,
    tc_norm,
    verify_optimality,
    wasserstein,
)
from .trees import tree_isometry, tree_tc_norm

__all__ = ["run", "main", "build_parser"]

_INT_FAMILIES = {"cycle", "path", "star", "torus", "diamond"}


class _UsageError(Exception):
    pass


# -- argument helpers ------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _parse_graph(text: str, seed: int) -> tuple[WeightedGraph, str | None, int | None]:
    """``family:params`` or a JSON file; returns the graph and the family."""
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        obj = load_json(path)
        if "edges" in obj:
            return graph_from_json(obj), None, None
        raise FormatError(f"{text}: expected a graph with 'edges'")
    kind, _, params = text.partition(":")
    args = [p for p in params.split(",") if p] if params else []
    try:
        if kind in _INT_FAMILIES:
            if len(args) != 1:
                raise _UsageError(f"{kind} takes exactly one integer parameter")
            n = int(args[0])
            return generate_family(kind, n), kind, n
        if kind == "random_tree":
            if len(args) not in (1, 3):
                raise _UsageError("random_tree takes n or n,lo,hi")
            n = int(args[0])
            wr = (float(args[1]), float(args[2])) if len(args) == 3 else (0.1, 10.0)
            return generate_family(kind, n, seed=seed, weight_range=wr), kind, n
    except ValueError:
        raise _UsageError(f"bad parameters in --graph {text!r}") from None
    raise _UsageError(f"unknown graph family {text!r}")


def _space(args) -> tuple[FiniteMetricSpace, WeightedGraph | None, str | None, int | None]:
    if args.graph is None:
        raise _UsageError("--graph is required")
    path = Path(args.graph)
    if path.suffix == ".json" and path.exists():
        obj = load_json(path)
        if "dist" in obj:
            return metric_from_json(obj), None, None, None
    graph, kind, n = _parse_graph(args.graph, args.seed)
    return geodesic_metric(graph), graph, kind, n


def _need_graph(args):
    space, graph, kind, n = _space(args)
    if graph is None:
        raise _UsageError("this subcommand needs a graph, not a bare metric")
    return space, graph, kind, n


def _measure(args, space):
    if args.measure is None:
        return random_measure(space, np.random.default_rng(args.seed))
    path = Path(args.measure)
    return measure_from_json(load_json(path), space, path.parent)


def _floats(x):
    return [float(v) for v in x]


# -- subcommands -----------------------------------------------------------------


def cmd_gen(args):
    graph, _, _ = _parse_graph(args.graph, args.seed) if args.graph else (None, None, None)
    if graph is None:
        raise _UsageError("--graph is required")
    return graph_to_json(graph), None


def cmd_tcnorm(args):
    if args.graph is None and args.measure is None:
        raise _UsageError("give --measure (with an embedded space) or --graph")
    if args.graph is not None:
        space = _space(args)[0]
        mu = _measure(args, space)
    else:
        path = Path(args.measure)
        mu = measure_from_json(load_json(path), None, path.parent)
    value, plan = tc_norm(mu)
    report = {"value": value, "plan": [list(r) for r in plan_rows(plan)]}
    if not mu.is_zero():
        f = dual_potential(mu)
        report["dual"] = _floats(f.values)
        report["dual_pairing"] = f.pair(mu)
        report["certified"] = bool(verify_optimality(plan.as_representation(mu.space), f, args.tol))
    else:
        report["dual"] = [0.0] * mu.space.n
        report["dual_pairing"] = 0.0
        report["certified"] = True
    csv = to_csv(("row", "col", "mass"), plan_rows(plan))
    return report, csv


def _probability(path, n):
    obj = load_json(path)
    w = obj.get("weights", obj) if isinstance(obj, dict) else obj
    if isinstance(w, dict):
        out = np.zeros(n)
        for k, v in w.items():
            out[int(k)] = float(v)
        return out
    return np.asarray(w, dtype=float)


def cmd_wasserstein(args):
    space = _space(args)[0]
    if args.sigma is None or args.tau is None:
        raise _UsageError("--sigma and --tau are required")
    value = wasserstein(space, _probability(args.sigma, space.n), _probability(args.tau, space.n))
    return {"value": value}, None


def cmd_tree_norm(args):
    if args.tree is None:
        raise _UsageError("--tree is required")
    tree = tree_from_json(load_json(args.tree))
    space = tree.metric()
    mu = _measure(args, space)
    iso = tree_isometry(tree, mu)
    report = {"value": tree_tc_norm(tree, mu), "isometry": sparse_vector(iso, skip=tree.root)}
    csv = to_csv(("edge", "coordinate"), [(int(k), v) for k, v in report["isometry"].items()])
    return report, csv


def cmd_frt(args):
    space = _space(args)[0]
    stats = estimate_expected_stretch(space, args.samples, args.seed, args.threads)
    n = space.n
    iu = np.triu_indices(n, 1)
    bound = 96 * math.log(n) + 96 if n > 1 else None
    report = {
        "points": n,
        "samples": args.samples,
        "max_mean_stretch": stats["max_mean"],
        "mean_mean_stretch": float(stats["mean"][iu].mean()) if n > 1 else 0.0,
        "max_sample_stretch": stats["max_sample"],
        "bound": bound,
        "within_bound": bool(bound is None or stats["max_mean"] <= bound),
        "expansive": True,
    }
    rows = [
        (int(x), int(y), float(space.dist[x, y]), float(stats["mean"][x, y]), float(stats["stderr"][x, y]))
        for x, y in zip(*iu)
    ]
    return report, to_csv(("x", "y", "d", "mean_stretch", "stderr"), rows)


def cmd_gupta(args):
    if args.tree is None or args.keep is None:
        raise _UsageError("--tree and --keep are required")
    tree = tree_from_json(load_json(args.tree))
    try:
        keep = [int(k) for k in args.keep.split(",") if k.strip()]
    except ValueError:
        raise _UsageError("--keep must be a comma separated list of vertices") from None
    out, kept = gupta_restrict(tree, keep)
    D = tree.distance_matrix()[np.ix_(kept, kept)]
    D2 = out.distance_matrix()
    off = ~np.eye(len(kept), dtype=bool)
    ratios = D2[off] / D[off] if off.any() else np.ones(1)
    report = {
        "tree": tree_to_json(out),
        "kept": list(kept),
        "min_ratio": float(ratios.min()),
        "max_ratio": float(ratios.max()),
    }
    return report, None


def cmd_embed(args):
    space = _space(args)[0]
    emb = bijective_embedding(space, args.samples, args.seed, args.threads)
    phi = build_l1_map(emb)
    rng = component_rng(args.seed, 2**32)
    measures = [random_measure(space, rng) for _ in range(args.measures)]
    dist, rows = measure_distortion(phi, measures)
    report = {
        "points": space.n,
        "components": len(emb),
        "D_hat": emb.max_stretch(),
        "distortion": {k: dist[k] for k in ("count", "min", "max", "mean")},
        "lower_bound_holds": bool(dist["min"] >= 1 - 1e-9) if rows else True,
    }
    if args.embedding_out:
        Path(args.embedding_out).write_text(dumps(embedding_to_json(emb)) + "\n")
    return report, to_csv(("measure_id", "tc_norm", "l1_norm", "ratio"), rows)


def cmd_calculus(args):
    space, graph, _, _ = _need_graph(args)
    report = {}
    if args.function is not None:
        F = np.asarray(load_json(args.function), dtype=float)
        g = gradient(F, graph, space)
        report["gradient"] = [[u, v, val] for u, v, val in g.oriented()]
        report["lip"] = g.sup_norm()
    if args.field is not None:
        f = field_from_json(load_json(args.field), graph, space)
    else:
        rng = np.random.default_rng(args.seed)
        f = VectorField(graph, space, rng.uniform(-1, 1, len(graph.edges)))
    conservative = is_conservative(f)
    report["sup_norm"] = f.sup_norm()
    report["conservative"] = conservative
    if conservative:
        report["integral"] = _floats(integral_operator(f, space.base_point))
    emb = bijective_embedding(space, args.samples, args.seed, args.threads)
    ext = extend_integral_operator(f, emb)
    d_hat = edge_stretch_constant(emb, graph)
    report["extension"] = _floats(ext)
    report["extension_lip"] = vertex_lip(ext, graph, space)
    report["D_hat"] = d_hat
    report["lip_bound_holds"] = bool(report["extension_lip"] <= d_hat * f.sup_norm() + 1e-9)
    return report, None


def cmd_bounds(args):
    if args.graph is None:
        raise _UsageError("--graph is required")
    graph, kind, n = _parse_graph(args.graph, args.seed)
    if kind == "torus":
        # the torus is measured in units of its side length
        graph = graph.scaled(1.0 / n)
    space = geodesic_metric(graph)
    nu = EdgeMeasure.uniform(graph)
    exhaustive = graph.n <= EXHAUSTIVE_LIMIT
    mode = "exhaustive" if exhaustive else ("sampled", args.samples)
    c_iso = isoperimetric_constant(graph, nu, space, args.delta, mode, args.seed)
    rng = np.random.default_rng(args.seed)
    sob = all(
        sobolev_check(rng.normal(size=graph.n), nu, space, args.delta, c_iso)[2] for _ in range(args.sobolev_samples)
    )
    report = {
        "delta_iso": args.delta,
        "C_iso": c_iso,
        "C_iso_exact": exhaustive,
        "sobolev_holds": bool(sob),
        "delta_spec": None,
        "beta": None,
        "C_spec": None,
        "lower_bound_D": None,
    }
    if kind == "torus":
        prof = torus_spectral_profile(n)
        C = max(1.0, c_iso, prof.C)
        report.update(
            delta_spec=prof.delta,
            beta=prof.beta,
            C_spec=prof.C,
            lower_bound_D=lower_bound_estimate(args.delta, prof.delta, max(prof.beta, 1.0), C)
            if args.delta >= 2
            else None,
        )
    return report, None


COMMANDS = {
    "gen": cmd_gen,
    "tcnorm": cmd_tcnorm,
    "wasserstein": cmd_wasserstein,
    "tree-norm": cmd_tree_norm,
    "frt": cmd_frt,
    "gupta": cmd_gupta,
    "embed": cmd_embed,
    "calculus": cmd_calculus,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="family:params (cycle:8, torus:4, random_tree:20) or a JSON file")
    common.add_argument("--measure", help="measure JSON file")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--samples", type=_positive_int, default=100)
    common.add_argument("--tol", type=float, default=1e-7)
    common.add_argument("--csv", action="store_true", help="emit the tabular section as CSV")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="transcost", description="Transportation-cost norms and tree embeddings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="generate a graph family as JSON")
    sub.add_parser("tcnorm", parents=[common], help="norm, optimal plan and dual certificate")
    p = sub.add_parser("wasserstein", parents=[common], help="distance between probability vectors")
    p.add_argument("--sigma")
    p.add_argument("--tau")
    p = sub.add_parser("tree-norm", parents=[common], help="closed-form norm on a tree")
    p.add_argument("--tree")
    sub.add_parser("frt", parents=[common], help="sample level trees and report stretch")
    p = sub.add_parser("gupta", parents=[common], help="restrict a tree to a vertex subset")
    p.add_argument("--tree")
    p.add_argument("--keep", help="comma separated vertices")
    p = sub.add_parser("embed", parents=[common], help="bijective embedding and l1 distortion")
    p.add_argument("--measures", type=_positive_int, default=100)
    p.add_argument("--embedding-out")
    p = sub.add_parser("calculus", parents=[common], help="gradient, integral and its extension")
    p.add_argument("--field", help="vector field JSON")
    p.add_argument("--function", help="vertex function JSON list")
    p = sub.add_parser("bounds", parents=[common], help="isoperimetric, Sobolev and profile certificate")
    p.add_argument("--delta", type=float, default=2.0)
    p.add_argument("--sobolev-samples", type=int, default=100)
    return parser


def _config_hash(args) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("threads", "out")}
    return hashlib.sha256(json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    """Run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, csv = COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"transcost: error: {exc}\n")
        return 2
    except TranscostError as exc:
        sys.stderr.write(dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return 1
    if args.csv and csv is not None:
        _emit(csv, args.out)
    else:
        report = dict(report) if isinstance(report, dict) else {"result": report}
        if args.command != "gen":
            report["seed"] = args.seed
            report["config_hash"] = _config_hash(args)
        _emit(dumps(report) + "\n", args.out)
    return 0


def main():
    sys.exit(run())
