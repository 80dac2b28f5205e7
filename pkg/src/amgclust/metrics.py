"""Partition quality and agreement metrics.

All entropies use natural log with the 0 * log 0 := 0 convention.
Modularity and ratio cut run in O(ne + n) per call via per-cluster sums.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCluster, EmptyGraph, ShapeMismatch
from .graph import Graph
from .partition import Partition


@dataclass(frozen=True)
class ContingencyTable:
    """Joint cluster counts of two partitions over the same vertex set."""

    counts: np.ndarray  # shape (k1, k2)
    n: int

    @property
    def row_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def contingency(p1: Partition, p2: Partition) -> ContingencyTable:
    if p1.n != p2.n:
        raise ShapeMismatch(f"partitions cover {p1.n} vs {p2.n} vertices")
    counts = np.zeros((p1.k, p2.k), dtype=np.int64)
    np.add.at(counts, (p1.labels, p2.labels), 1)
    return ContingencyTable(counts=counts, n=p1.n)


def _cluster_sums(g: Graph, labels: np.ndarray, k: int):
    rows = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    same = labels[rows] == labels[g.indices]
    internal = np.bincount(
        labels[rows][same], weights=g.weights[same], minlength=k
    )
    cut = np.bincount(
        labels[rows][~same], weights=g.weights[~same], minlength=k
    )
    degree = np.bincount(labels, weights=g.degrees(), minlength=k)
    return internal, cut, degree


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity, weighted: sum_k [W_k/(2W) - (d_k/(2W))^2].

    W_k counts intra-cluster weight (both edge directions), d_k the
    cluster's total weighted degree, 2W the sum of all degrees.

    Raises EmptyGraph when the graph has no edges.
    """
    if g.ne == 0:
        raise EmptyGraph("modularity undefined on an edgeless graph")
    internal, _, degree = _cluster_sums(g, p.labels, p.k)
    two_w = g.weights.sum()
    return float((internal / two_w - (degree / two_w) ** 2).sum())


def ratio_cut(g: Graph, p: Partition) -> float:
    """(1/2) sum_k W(V_k, complement) / |V_k|.

    Raises EmptyCluster when some cluster has no vertices.
    """
    sizes = p.sizes()
    if (sizes == 0).any():
        raise EmptyCluster("ratio cut undefined with an empty cluster")
    _, cut, _ = _cluster_sums(g, p.labels, p.k)
    return float(0.5 * (cut / sizes).sum())


def _entropy_of(counts: np.ndarray, n: int) -> float:
    probs = counts[counts > 0] / n
    return float(-(probs * np.log(probs)).sum())


def entropy(p: Partition) -> float:
    """Shannon entropy of cluster sizes, natural log."""
    return _entropy_of(p.sizes(), p.n)


def conditional_entropy(truth: Partition, estimate: Partition) -> float:
    """H(truth | estimate): residual truth uncertainty inside each
    estimated cluster, size-weighted."""
    table = contingency(estimate, truth)
    counts = table.counts  # rows: estimate clusters, cols: truth
    row_tot = table.row_marginals
    h = 0.0
    for k in range(counts.shape[0]):
        nk = row_tot[k]
        if nk == 0:
            continue
        inner = counts[k][counts[k] > 0] / nk
        h -= nk / table.n * (inner * np.log(inner)).sum()
    return float(h)


def mutual_information(p1: Partition, p2: Partition) -> float:
    table = contingency(p1, p2)
    n = table.n
    rows = table.row_marginals
    cols = table.col_marginals
    mi = 0.0
    nz = np.nonzero(table.counts)
    for a, b in zip(*nz):
        pab = table.counts[a, b] / n
        mi += pab * np.log(pab * n * n / (rows[a] * cols[b]))
    return float(mi)


def nmi(p1: Partition, p2: Partition, raw: bool = False) -> float:
    """Normalized mutual information.

    Default is 2I/(H1 + H2), which is 1 for identical partitions. With
    raw=True the unscaled I/(H1 + H2) variant is returned. Two
    single-cluster partitions agree perfectly: 1.0.
    """
    h1 = entropy(p1)
    h2 = entropy(p2)
    if h1 + h2 == 0:
        return 1.0
    scale = 1.0 if raw else 2.0
    return float(scale * mutual_information(p1, p2) / (h1 + h2))


def information_gain(truth: Partition, estimate: Partition) -> float:
    """H(truth) - H(truth | estimate): truth uncertainty removed by the estimate."""
    return entropy(truth) - conditional_entropy(truth, estimate)
