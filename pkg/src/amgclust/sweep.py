"""Parameter sweeps over synthetic instances.

A grid is the cross product of delta values, noise levels, and K values;
every cell is sampled `samples` times with a per-cell-and-sample seed
derived from the base seed, so any cell can be reproduced in isolation.
Failed samples are recorded with their error and the sweep continues.
"""
from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import PipelineParams
from .errors import AmgclustError, DataError
from .pipeline import run_cluster
from .sbm import NoiseSpec, SbmSpec, generate_sbm, labels_to_attributes
from .seeding import derive_seed

CSV_COLUMNS = [
    "delta", "noise", "k", "sample", "seed", "status",
    "modularity", "nmi", "entropy", "gain", "wall_time_s",
]

SUMMARY_COLUMNS = [
    "delta", "noise", "k", "samples", "failed",
    "modularity_mean", "modularity_std",
    "nmi_mean", "nmi_std",
    "entropy_mean", "entropy_std",
    "gain_mean", "gain_std",
]


@dataclass(frozen=True)
class SweepGrid:
    """Axes of one sweep over planted-partition instances."""

    n: int
    q: int
    c: float
    deltas: tuple
    noises: tuple
    ks: tuple
    samples: int
    base_seed: int = 0
    mode: str = "attributed"  # or "structure"

    def __post_init__(self):
        if self.samples < 1:
            raise DataError("samples must be >= 1")
        if not self.deltas or not self.ks:
            raise DataError("at least one delta and one K are required")
        if self.mode not in ("attributed", "structure"):
            raise DataError(f"unknown sweep mode {self.mode!r}")
        noises = self.noises if self.noises else (0.0,)
        object.__setattr__(self, "noises", tuple(float(v) for v in noises))
        object.__setattr__(self, "deltas", tuple(float(v) for v in self.deltas))
        object.__setattr__(self, "ks", tuple(int(v) for v in self.ks))

    def cells(self):
        for delta in self.deltas:
            for noise in self.noises:
                for k in self.ks:
                    for s in range(self.samples):
                        yield delta, noise, k, s

    def cell_seed(self, delta: float, noise: float, k: int, sample: int) -> int:
        return derive_seed(
            self.base_seed, "cell", repr(delta), repr(noise), k, sample
        )


def _run_sample(grid: SweepGrid, params: PipelineParams, cell) -> dict:
    delta, noise, k, sample = cell
    seed = grid.cell_seed(delta, noise, k, sample)
    row = {
        "delta": delta, "noise": noise, "k": k, "sample": sample,
        "seed": seed, "status": "ok",
        "modularity": "", "nmi": "", "entropy": "", "gain": "",
        "wall_time_s": "",
    }
    start = time.perf_counter()
    try:
        spec = SbmSpec(n=grid.n, q=grid.q, c=grid.c, delta=delta,
                       seed=derive_seed(seed, "graph"))
        g, truth = generate_sbm(spec)
        table = None
        if grid.mode == "attributed":
            table = labels_to_attributes(
                truth, NoiseSpec(level=noise, seed=derive_seed(seed, "noise"))
            )
        run_params = PipelineParams(**{**params.to_dict(), "seed": seed})
        res = run_cluster(g, table, truth.labels, [k], run_params, mode=grid.mode)
        m = res.results[0].metrics
        row["modularity"] = repr(m["modularity"])
        row["nmi"] = repr(m["nmi"])
        row["entropy"] = repr(m["conditional_entropy"])
        row["gain"] = repr(m["gain"])
    except AmgclustError as exc:
        row["status"] = f"error:{type(exc).__name__}"
    row["wall_time_s"] = repr(time.perf_counter() - start)
    return row


def run_sweep(grid: SweepGrid, params: PipelineParams, workers: int = 1) -> list:
    """Run every (cell, sample); returns rows in deterministic grid order.

    The `entropy` column is the conditional entropy of the truth given the
    estimate (the quantity the heatmaps plot); `gain` is H(truth) minus
    that. Failures become `status=error:<Type>` rows with empty metrics.
    """
    cells = list(grid.cells())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda c: _run_sample(grid, params, c), cells))
    else:
        rows = [_run_sample(grid, params, c) for c in cells]
    return rows


def write_rows(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def summarize(rows) -> list:
    """Per-cell mean/std (population) of each metric over the ok samples."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row["delta"], row["noise"], row["k"]), []).append(row)
    out = []
    for (delta, noise, k), members in groups.items():
        ok = [r for r in members if r["status"] == "ok"]
        summary = {
            "delta": delta, "noise": noise, "k": k,
            "samples": len(members), "failed": len(members) - len(ok),
        }
        for col in ("modularity", "nmi", "entropy", "gain"):
            vals = [float(r[col]) for r in ok if r[col] != "" and r[col] != "None"]
            if vals:
                arr = np.asarray(vals)
                summary[f"{col}_mean"] = repr(float(arr.mean()))
                summary[f"{col}_std"] = repr(float(arr.std()))
            else:
                summary[f"{col}_mean"] = ""
                summary[f"{col}_std"] = ""
        out.append(summary)
    return out


def write_summary(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(summarize(rows))
