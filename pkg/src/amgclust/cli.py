"""Command-line interface.

Subcommands: cluster, generate, score, sweep. Exit codes: 0 success,
1 usage error, 2 data error, 3 numerical error. All randomness derives
from --seed, and repeated runs produce byte-identical partitions, metrics
JSON, and CSVs (provenance carries wall-clock timings and is exempt).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ._version import __version__
from .augment import read_attribute_table
from .config import build_params
from .errors import DataError, NumericalError, VertexSetMismatch
from .graph import induced_subgraph, read_edge_list, write_edge_list
from .kernels import BACKEND
from .metrics import (
    conditional_entropy,
    entropy,
    information_gain,
    modularity,
    nmi,
    ratio_cut,
)
from .partition import read_partition, write_partition
from .pipeline import run_cluster
from .sbm import NoiseSpec, SbmSpec, generate_sbm, labels_to_attributes
from .seeding import derive_seed
from .sweep import SweepGrid, run_sweep, write_rows, write_summary


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this CLI reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


_PARAM_FLAGS = [
    ("--seed", int, "base seed for every random stream"),
    ("--shift-lambda", float, "SPD shift magnitude (default: average weighted degree)"),
    ("--target-rho", float, "bootstrap convergence target"),
    ("--rho-mode", str, "target semantics: total or per_step"),
    ("--max-components", int, "composite component cap"),
    ("--smooth-iters", int, "smoothing steps per bootstrap vector"),
    ("--smoother", str, "relaxation: gs or jacobi"),
    ("--jacobi-omega", float, "jacobi damping in (0, 1]"),
    ("--max-levels", int, "hierarchy level cap"),
    ("--max-coarse-size", int, "coarsest-grid size cap"),
    ("--attr-weight", float, "weight of structure-attribute edges"),
    ("--trunc-tol", float, "relative singular value cutoff"),
    ("--restarts", int, "k-means restarts"),
    ("--kmeans-max-iters", int, "k-means iteration cap"),
    ("--kmeans-tol", float, "k-means relative objective tolerance"),
]


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    for flag, typ, help_text in _PARAM_FLAGS:
        p.add_argument(flag, type=typ, default=None, help=help_text)
    p.add_argument("--nmi-raw", action="store_const", const=True, default=None,
                   help="report unscaled I/(H+H') instead of 2I/(H+H')")
    p.add_argument("--config", default=None, help="INI file with parameter keys")


def _collect_params(args) -> dict:
    keys = [flag.lstrip("-").replace("-", "_") for flag, _, _ in _PARAM_FLAGS]
    keys.append("nmi_raw")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _parse_int_list(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip() != ""]


def _parse_float_list(text: str) -> list:
    return [float(v) for v in text.split(",") if v.strip() != ""]


def _resolve_ks(args) -> list:
    if args.k is not None and args.k_range is not None:
        raise DataError("give either --k or --k-range, not both")
    if args.k is not None:
        return [args.k]
    if args.k_range is not None:
        try:
            lo, hi = args.k_range.split("..")
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise DataError(f"bad --k-range {args.k_range!r}; expected A..B") from None
        if lo < 1 or hi < lo:
            raise DataError(f"bad --k-range {args.k_range!r}")
        return list(range(lo, hi + 1))
    raise DataError("one of --k or --k-range is required")


def _load_truth(path, n: int) -> np.ndarray:
    ids, part = read_partition(path)
    if len(ids) != n or not np.array_equal(ids, np.arange(n)):
        raise DataError(f"{path}: truth must assign every vertex 0..{n - 1}")
    return part.labels


def _json_dump(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_cluster(args) -> int:
    params = build_params(args.config, _collect_params(args))
    ks = _resolve_ks(args)
    g = read_edge_list(args.edges)
    table = read_attribute_table(args.attributes) if args.attributes else None
    truth = _load_truth(args.truth, g.n) if args.truth else None
    res = run_cluster(g, table, truth, ks, params, mode=args.mode)
    os.makedirs(args.out, exist_ok=True)
    for kr in res.results:
        write_partition(
            os.path.join(args.out, f"partition_k{kr.k}.tsv"), res.kept, kr.partition
        )
        _json_dump(kr.metrics, os.path.join(args.out, f"metrics_k{kr.k}.json"))
    _json_dump(res.provenance, os.path.join(args.out, "provenance.json"))
    if args.dump_coords:
        _write_coords(os.path.join(args.out, "coords.tsv"), res)
    if res.discarded:
        print(f"discarded {res.discarded} vertices outside the largest component")
    for kr in res.results:
        print(
            f"k={kr.k} modularity={kr.partition.modularity!r} "
            f"restart={kr.partition.restart_index}"
            + (f" nmi={kr.metrics['nmi']!r}" if kr.metrics["nmi"] is not None else "")
        )
    return 0


def _write_coords(path, res) -> None:
    coords = res.coords
    header = ["vertex", "r"] + [f"block_{j}" for j in range(coords.values.shape[2])]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for i in range(coords.n):
            vid = res.kept[i]
            for r in range(coords.n_c):
                cells = [str(vid), str(r)] + [
                    repr(float(v)) for v in coords.values[i, r, :]
                ]
                fh.write("\t".join(cells) + "\n")


def _cmd_generate(args) -> int:
    spec = SbmSpec(n=args.n, q=args.q, c=args.c, delta=args.delta,
                   seed=derive_seed(args.seed, "graph"))
    g, truth = generate_sbm(spec)
    table = labels_to_attributes(
        truth, NoiseSpec(level=args.noise, seed=derive_seed(args.seed, "noise"))
    )
    os.makedirs(args.out, exist_ok=True)
    write_edge_list(os.path.join(args.out, "edges.txt"), g)
    write_partition(
        os.path.join(args.out, "truth.tsv"), np.arange(g.n), truth
    )
    with open(os.path.join(args.out, "attributes.tsv"), "w", encoding="utf-8") as fh:
        fh.write("\t".join(table.names) + "\n")
        for row in table.rows:
            fh.write("\t".join(row) + "\n")
    _json_dump(
        {
            "n": args.n, "q": args.q, "c": args.c, "delta": args.delta,
            "noise": args.noise, "seed": args.seed,
            "c_in": spec.c_in, "c_out": spec.c_out,
            "detectability_delta": args.q * (args.c ** 0.5),
            "ne": g.ne,
        },
        os.path.join(args.out, "meta.json"),
    )
    print(f"wrote n={g.n} ne={g.ne} instance to {args.out}")
    return 0


def _cmd_score(args) -> int:
    t_ids, truth = read_partition(args.truth)
    p_ids, pred = read_partition(args.pred)
    if not np.array_equal(t_ids, p_ids):
        raise VertexSetMismatch(
            f"truth covers {len(t_ids)} vertices, prediction {len(p_ids)}; "
            "the id sets must match exactly"
        )
    out = {
        "n": int(len(t_ids)),
        "k_truth": truth.k,
        "k_pred": pred.k,
        "nmi": nmi(truth, pred, raw=bool(args.nmi_raw)),
        "entropy": entropy(truth),
        "conditional_entropy": conditional_entropy(truth, pred),
        "gain": information_gain(truth, pred),
        "modularity": None,
        "ratio_cut": None,
    }
    if args.edges:
        g = read_edge_list(args.edges)
        if t_ids.max() >= g.n:
            raise VertexSetMismatch(
                f"partition mentions vertex {t_ids.max()}, graph has {g.n}"
            )
        sub = induced_subgraph(g, t_ids)
        out["modularity"] = modularity(sub, pred)
        out["ratio_cut"] = ratio_cut(sub, pred)
    _json_dump(out, args.out)
    return 0


def _cmd_sweep(args) -> int:
    params = build_params(args.config, _collect_params(args))
    grid = SweepGrid(
        n=args.n, q=args.q, c=args.c,
        deltas=tuple(_parse_float_list(args.deltas)),
        noises=tuple(_parse_float_list(args.noises)),
        ks=tuple(_parse_int_list(args.ks)),
        samples=args.samples,
        base_seed=params.seed,
        mode=args.mode,
    )
    rows = run_sweep(grid, params, workers=args.workers)
    os.makedirs(args.out, exist_ok=True)
    write_rows(os.path.join(args.out, "sweep.csv"), rows)
    write_summary(os.path.join(args.out, "summary.csv"), rows)
    failed = sum(1 for r in rows if r["status"] != "ok")
    _json_dump(
        {
            "grid": {
                "n": grid.n, "q": grid.q, "c": grid.c,
                "deltas": list(grid.deltas), "noises": list(grid.noises),
                "ks": list(grid.ks), "samples": grid.samples,
                "base_seed": grid.base_seed, "mode": grid.mode,
            },
            "params": params.to_dict(),
            "rows": len(rows),
            "failed": failed,
        },
        os.path.join(args.out, "meta.json"),
    )
    print(f"wrote {len(rows)} rows ({failed} failed) to {args.out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="amgclust",
        description=(
            "Attributed-graph clustering via a bootstrap multilevel "
            "embedding of the augmented graph Laplacian"
        ),
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} (kernels: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="embed and cluster one graph")
    p.add_argument("--edges", required=True, help="edge list file: i j [w]")
    p.add_argument("--attributes", default=None, help="attribute TSV")
    p.add_argument("--truth", default=None, help="ground-truth partition TSV")
    p.add_argument("--k", type=int, default=None, help="cluster count")
    p.add_argument("--k-range", default=None, metavar="A..B",
                   help="inclusive range of cluster counts")
    p.add_argument("--mode", choices=["auto", "attributed", "structure"],
                   default="auto")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dump-coords", action="store_true",
                   help="also write the block coordinates TSV")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("generate", help="sample a planted-partition instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("score", help="compare two partition files")
    p.add_argument("--truth", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--edges", default=None,
                   help="edge list for modularity/ratio cut of the prediction")
    p.add_argument("--nmi-raw", action="store_true")
    p.add_argument("--out", default=None, help="JSON output path (default stdout)")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("sweep", help="metric grids over synthetic instances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--deltas", required=True, help="comma-separated degree gaps")
    p.add_argument("--noises", default="0.0", help="comma-separated noise levels")
    p.add_argument("--ks", required=True, help="comma-separated cluster counts")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--mode", choices=["attributed", "structure"],
                   default="attributed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"amgclust: data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"amgclust: i/o error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"amgclust: numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
