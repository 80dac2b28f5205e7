#!/usr/bin/env python3
"""Hot-kernel benchmark: compiled extension vs pure-Python fallback.

Times Gauss-Seidel sweeps and greedy matching on shifted Laplacians of
planted-partition graphs at a few sizes, then (with --end-to-end) one
full bootstrap per backend in subprocesses, since the backend is fixed
at import time via AMGCLUST_PURE_PYTHON.

Usage: python benchmarks/bench_kernels.py [--sizes 400,2000] [--reps 20]
                                          [--end-to-end]
"""
import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from amgclust import _kernels_py
from amgclust.graph import (
    average_weighted_degree,
    first_edge,
    laplacian,
    largest_component,
    spd_shift,
)
from amgclust.sbm import SbmSpec, generate_sbm

try:
    from amgclust import _kernels
except ImportError:
    _kernels = None


def _system(n, seed=0):
    g, _ = generate_sbm(SbmSpec(n=n, q=2, c=20.0, delta=16.0, seed=seed))
    gc, _ = largest_component(g)
    A = spd_shift(laplacian(gc), first_edge(gc), average_weighted_degree(gc))
    return gc, A


def _median_time(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_gauss_seidel(backend, A, reps):
    n = A.shape[0]
    diag = A.diagonal().copy()
    b = np.zeros(n)
    x0 = np.ones(n)

    def run():
        x = x0.copy()
        backend.gauss_seidel(A.indptr, A.indices, A.data, diag, x, b, 0, n, 1)

    return _median_time(run, reps)


def bench_greedy_match(backend, g, reps):
    ei, ej, w = g.edge_pairs()
    rng = np.random.default_rng(0)
    order = rng.permutation(len(ei)).astype(np.int64)
    ei = ei.astype(np.int64)
    ej = ej.astype(np.int64)

    def run():
        match = np.full(g.n, -1, dtype=np.int64)
        backend.greedy_match(order, ei, ej, match)

    return _median_time(run, reps)


def _pipeline_seconds(n, pure: bool) -> float:
    env = dict(os.environ)
    env.pop("AMGCLUST_PURE_PYTHON", None)
    if pure:
        env["AMGCLUST_PURE_PYTHON"] = "1"
    code = (
        "import time\n"
        "from amgclust.sbm import SbmSpec, generate_sbm\n"
        "from amgclust.config import PipelineParams\n"
        "from amgclust.pipeline import run_cluster\n"
        "from amgclust.kernels import BACKEND\n"
        f"g, truth = generate_sbm(SbmSpec(n={n}, q=2, c=20.0, delta=16.0, seed=0))\n"
        "params = PipelineParams(seed=0, rho_mode='per_step', restarts=20)\n"
        "t0 = time.perf_counter()\n"
        "res = run_cluster(g, None, truth.labels, ks=[2], params=params,\n"
        "                  mode='structure')\n"
        "dt = time.perf_counter() - t0\n"
        "print(BACKEND, repr(dt))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    expected = "python" if pure else "cython"
    if backend != expected:
        raise RuntimeError(f"subprocess picked {backend}, expected {expected}")
    return float(seconds)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="400,2000",
                    help="comma-separated SBM sizes")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--end-to-end", action="store_true",
                    help="also time one full pipeline run per backend")
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not built; timing the fallback only",
              file=sys.stderr)
    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("cython", _kernels))

    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'kernel':<14} {'n':>6} {'ne':>7} "
          + "".join(f"{name + ' (ms)':>14}" for name, _ in backends)
          + ("       speedup" if len(backends) == 2 else ""))
    for n in sizes:
        g, A = _system(n)
        for label, bench in (("gauss_seidel", bench_gauss_seidel),
                             ("greedy_match", bench_greedy_match)):
            arg = A if label == "gauss_seidel" else g
            medians = [bench(mod, arg, args.reps) for _, mod in backends]
            row = f"{label:<14} {g.n:>6} {g.ne:>7} "
            row += "".join(f"{m * 1e3:>14.3f}" for m in medians)
            if len(medians) == 2:
                row += f"{medians[1] / medians[0]:>13.1f}x"
            print(row)

    if args.end_to_end:
        n = sizes[-1]
        print(f"\nend-to-end structure-mode pipeline, n={n} (one run each):")
        for pure in (False, True):
            if pure is False and _kernels is None:
                continue
            name = "python" if pure else "cython"
            print(f"  {name:<8} {_pipeline_seconds(n, pure):.3f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
