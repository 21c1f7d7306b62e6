"""Command-line interface.

Every command prints a JSON report on stdout and a one-line summary on
stderr. Exit status: 0 success, 2 usage or validation error, 3 an exact
solver hit its size limit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Optional

import numpy as np

from . import maxspacing, oracles, reductions
from .data import Dataset, Metric, dump_dataset, load_dataset
from .errors import ExplainClustError, LimitExceeded
from .objectives import Kind, Objective, cost, optimal_representatives
from .tree import deserialize, induced_partition, serialize, to_dict

EXIT_OK, EXIT_USAGE, EXIT_LIMIT = 0, 2, 3


class UsageError(ExplainClustError):
    pass


def _jsonable(value):
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    return value


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _dataset(args) -> Dataset:
    return load_dataset(args.input, has_header=args.header)


def _limits(args) -> oracles.OracleLimits:
    return oracles.OracleLimits(args.max_n, args.max_k, args.max_d)


def _inputs(ds: Dataset, k: Optional[int] = None) -> dict:
    out = {"n": ds.n, "d": ds.d}
    if k is not None:
        out["k"] = k
    return out


def cmd_fit(args) -> dict:
    if args.k < 2:
        raise UsageError(f"--k must be at least 2, got {args.k}")
    ds = _dataset(args)
    tree, trace = maxspacing.fit(ds, args.k, args.metric)
    text = serialize(tree)
    if args.out:
        _write(args.out, text + "\n")
    return {
        "inputs": _inputs(ds, args.k),
        "objective": "spacing",
        "metric": Metric.parse(args.metric).value,
        "cost": trace.spacings[-1],
        "spacings": trace.spacings,
        "trace": trace.to_dict(),
        "tree": to_dict(tree),
    }


def cmd_eval(args) -> dict:
    ds = _dataset(args)
    with open(args.tree) as fh:
        tree = deserialize(fh.read())
    tree.check_dimension(ds.d)
    obj = Objective.parse(args.objective, args.metric)
    part = induced_partition(tree, ds)
    report = {
        "inputs": _inputs(ds, tree.k),
        "objective": obj.kind.value,
        "clusters": [list(c) for c in part.clusters],
        "empty_leaves": part.empty_clusters,
    }
    if obj.kind is Kind.SPACING:
        report["metric"] = obj.metric.value
    elif part.empty_clusters:
        raise UsageError(f"leaves {part.empty_clusters} receive no points; no optimal representative exists")
    else:
        report["representatives"] = optimal_representatives(part, ds, obj)
    report["cost"] = cost(part, ds, obj)
    return report


def cmd_oracle(args) -> dict:
    ds = _dataset(args)
    obj = Objective.parse(args.objective, args.metric)
    res = oracles.optimal_explainable(ds, args.k, obj, _limits(args))
    if args.out:
        _write(args.out, serialize(res.tree) + "\n")
    return {
        "inputs": _inputs(ds, args.k),
        "objective": obj.kind.value,
        "cost": res.cost,
        "examined": res.n_examined,
        "clusters": [list(c) for c in res.partition.clusters],
        "tree": to_dict(res.tree),
    }


def cmd_baseline_spacing(args) -> dict:
    ds = _dataset(args)
    value = oracles.unrestricted_max_spacing(ds, args.k, args.metric)
    part = oracles.single_link_partition(ds, args.k, args.metric)
    return {
        "inputs": _inputs(ds, args.k),
        "objective": "spacing",
        "metric": Metric.parse(args.metric).value,
        "cost": value,
        "clusters": [list(c) for c in part.clusters],
    }


def cmd_vc(args) -> dict:
    g = reductions.load_graph(args.graph)
    cover = oracles.min_vertex_cover(g, args.max_vertices)
    return {
        "inputs": {"vertices": g.n, "edges": g.m},
        "cover": list(cover),
        "size": len(cover),
        "triangle_free": g.is_triangle_free(),
        "max_degree": g.max_degree(),
    }


def cmd_reduce(args) -> dict:
    g = reductions.load_graph(args.graph)
    inst = reductions.edges_to_points(g)
    text = dump_dataset(inst.dataset)
    if not args.with_header:
        text = text.split("\n", 1)[1]
    _write(args.out, text)
    return {
        "inputs": {"vertices": g.n, "edges": g.m},
        "points": inst.dataset.n,
        "dimensions": inst.dataset.d,
        "output": args.out,
    }


def _parse_cover(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"--cover must be a comma-separated list of vertex ids, got {text!r}") from None


def cmd_cover_tree(args) -> dict:
    g = reductions.load_graph(args.graph)
    cover = _parse_cover(args.cover) if args.cover else list(oracles.min_vertex_cover(g, args.max_vertices))
    inst = reductions.edges_to_points(g)
    tree = reductions.cover_to_tree(inst, cover)
    if args.out:
        _write(args.out, serialize(tree) + "\n")
    part = induced_partition(tree, inst.dataset)
    report = {
        "inputs": {"vertices": g.n, "edges": g.m, "k": len(cover)},
        "cover": cover,
        "clusters": [list(c) for c in part.clusters],
        "tree": to_dict(tree),
        "costs": {},
    }
    if not part.empty_clusters:
        report["costs"] = {
            kind.value: cost(part, inst.dataset, Objective(kind))
            for kind in (Kind.KMEANS, Kind.KMEDIANS, Kind.KCENTERS)
        }
        report["predicted_kmeans"] = reductions.predicted_kmeans_cost(g, cover)
    return report


def cmd_price(args) -> dict:
    """Ratio between the explainable and unrestricted optima, oriented to be >= 1."""
    ds = _dataset(args)
    obj = Objective.parse(args.objective, args.metric)
    explainable = oracles.optimal_explainable(ds, args.k, obj, _limits(args)).cost
    if obj.kind is Kind.SPACING:
        unrestricted = oracles.unrestricted_max_spacing(ds, args.k, obj.metric)
        num, den = unrestricted, explainable
    else:
        unrestricted = oracles.unrestricted_optimal(ds, args.k, obj, args.max_n).cost
        num, den = explainable, unrestricted
    if den == 0:
        ratio = 1.0 if num == 0 else math.inf
    else:
        ratio = num / den
    return {
        "inputs": _inputs(ds, args.k),
        "objective": obj.kind.value,
        "explainable": explainable,
        "unrestricted": unrestricted,
        "price": ratio,
    }


def cmd_gen_graph(args) -> dict:
    params = {k: v for k, v in (("n", args.n), ("m", args.m), ("arms", args.arms), ("rows", args.rows),
                                ("cols", args.cols), ("max_degree", args.max_degree)) if v is not None}
    try:
        g = reductions.generate_graph(args.family, seed=args.seed, **params)
    except KeyError as exc:
        raise UsageError(f"family {args.family!r} needs --{exc.args[0].replace('_', '-')}") from None
    if args.out:
        reductions.save_graph(g, args.out)
    return {
        "inputs": {"family": args.family, "seed": args.seed, **params},
        "vertices": g.n,
        "edges": [list(e) for e in g.edges],
        "triangle_free": g.is_triangle_free(),
        "max_degree": g.max_degree(),
    }


def _add_data(p, k=True):
    p.add_argument("--input", required=True, help="CSV file of points")
    p.add_argument("--header", action="store_true", help="first CSV row holds feature names")
    if k:
        p.add_argument("--k", type=int, required=True, help="number of clusters")


def _add_metric(p):
    p.add_argument("--metric", default="l2", choices=[m.value for m in Metric])


def _add_limits(p):
    d = oracles.OracleLimits()
    p.add_argument("--max-n", type=int, default=d.max_n)
    p.add_argument("--max-k", type=int, default=d.max_k)
    p.add_argument("--max-d", type=int, default=d.max_d)


OBJECTIVES = [k.value for k in Kind]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="explainclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="greedy maximum-spacing threshold tree")
    _add_data(p)
    _add_metric(p)
    p.add_argument("--out", help="write the tree JSON here")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a tree's partition under an objective")
    p.add_argument("--tree", required=True)
    _add_data(p, k=False)
    p.add_argument("--objective", required=True, choices=OBJECTIVES)
    _add_metric(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("oracle", help="exhaustive optimal explainable clustering")
    _add_data(p)
    p.add_argument("--objective", required=True, choices=OBJECTIVES)
    _add_metric(p)
    _add_limits(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("baseline-spacing", help="single-link (unrestricted) maximum spacing")
    _add_data(p)
    _add_metric(p)
    p.set_defaults(func=cmd_baseline_spacing)

    p = sub.add_parser("vc", help="exact minimum vertex cover")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-vertices", type=int, default=30)
    p.set_defaults(func=cmd_vc)

    p = sub.add_parser("reduce", help="embed a graph's edges as 0/1 points (CSV)")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--with-header", action="store_true", help="emit v1..vn feature names")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("cover-tree", help="threshold tree induced by a vertex cover")
    p.add_argument("--graph", required=True)
    p.add_argument("--cover", help="increasing vertex ids, e.g. 2,3 (default: exact minimum cover)")
    p.add_argument("--max-vertices", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cover_tree)

    p = sub.add_parser("price", help="price of explainability on one instance")
    _add_data(p)
    p.add_argument("--objective", required=True, choices=OBJECTIVES)
    _add_metric(p)
    _add_limits(p)
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("gen-graph", help="generate a reduction source graph")
    p.add_argument("--family", required=True, choices=reductions.FAMILIES)
    for name in ("n", "m", "arms", "rows", "cols", "max-degree"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_graph)
    return parser


def _summary(command: str, report: dict) -> str:
    bits = [command]
    for key in ("cost", "size", "price", "points"):
        if key in report:
            bits.append(f"{key}={report[key]}")
    return " ".join(bits)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    echo = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    start = time.perf_counter()
    try:
        body = args.func(args)
    except LimitExceeded as exc:
        print(f"explainclust {args.command}: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ExplainClustError, ValueError, OSError, KeyError) as exc:
        print(f"explainclust {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"command": args.command, "args": echo, **body,
              "wall_time": time.perf_counter() - start}
    print(json.dumps(_jsonable(report), indent=2, allow_nan=False))
    print(_summary(args.command, body), file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
