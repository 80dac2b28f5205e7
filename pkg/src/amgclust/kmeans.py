"""Modified K-means over block coordinates.

Lloyd iterations on the flattened block tensors, restarted from random
vertex seeds; across restarts the partition with the highest modularity on
the selection graph wins (not the lowest objective), ties going to the
earlier restart. The selection graph is whatever graph the embedding was
built on: the structure graph when clustering plain coordinates, the
augmented graph when attribute vertices were added. Augmented selection
extends each restart's labels to the attribute vertices by plurality vote
of their neighbors before scoring. Empty clusters are repaired by turning
the point farthest from its assigned centroid into a singleton centroid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import VertexCoordinates
from .errors import DegenerateCoordinates, DimensionMismatch, KTooLarge
from .graph import Graph
from .metrics import modularity
from .partition import Partition
from .seeding import generator


@dataclass(frozen=True)
class KmeansConfig:
    k: int
    restarts: int = 100
    max_iters: int = 300
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")


def _squared_distances(X, centers):
    # expanded form: ||x||^2 + ||c||^2 - 2 x.c ; cheap tiny negatives possible
    return (
        (X * X).sum(axis=1)[:, None]
        + (centers * centers).sum(axis=1)[None, :]
        - 2.0 * (X @ centers.T)
    )


def _repair_empty(X, centers, labels, D, k):
    sizes = np.bincount(labels, minlength=k)
    if not (sizes == 0).any():
        return labels
    point_d = D[np.arange(len(labels)), labels].copy()
    for empty in np.flatnonzero(sizes == 0):
        # farthest point whose cluster survives losing it
        eligible = sizes[labels] > 1
        if not eligible.any():
            break
        cand = np.where(eligible, point_d, -np.inf)
        pick = int(np.argmax(cand))
        sizes[labels[pick]] -= 1
        labels[pick] = empty
        sizes[empty] = 1
        point_d[pick] = -np.inf
    return labels


def lloyd_single(X: np.ndarray, k: int, rng: np.random.Generator,
                 max_iters: int = 300, tol: float = 1e-9):
    """One Lloyd run from a random vertex-seeded start.

    Returns (labels, centers, objective_history); the history holds the
    true objective after every center update and is non-increasing up to
    floating round-off.
    """
    n = X.shape[0]
    centers = X[rng.choice(n, size=k, replace=False)].copy()
    labels = np.zeros(n, dtype=np.int64)
    history = []
    prev_obj = np.inf
    for _ in range(max_iters):
        D = _squared_distances(X, centers)
        labels = np.argmin(D, axis=1).astype(np.int64)
        labels = _repair_empty(X, centers, labels, D, k)
        for c in range(k):
            members = X[labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
        diff = X - centers[labels]
        obj = float((diff * diff).sum())
        history.append(obj)
        if prev_obj == 0.0 or (prev_obj - obj) <= tol * prev_obj:
            break
        prev_obj = obj
    return labels, centers, history


def _extend_labels(g: Graph, n: int, labels: np.ndarray, k: int) -> np.ndarray:
    """Give each vertex beyond the first n the plurality label of its
    already-labeled neighbors, ties to the lowest label."""
    full = np.empty(g.n, dtype=np.int64)
    full[:n] = labels
    for v in range(n, g.n):
        nbrs = g.indices[g.indptr[v]:g.indptr[v + 1]]
        nbrs = nbrs[nbrs < n]
        if len(nbrs) == 0:
            full[v] = 0
            continue
        full[v] = int(np.argmax(np.bincount(labels[nbrs], minlength=k)))
    return full


def kmeans_blocks(coords: VertexCoordinates, g: Graph, cfg: KmeansConfig) -> Partition:
    """Cluster the block coordinates; select the max-modularity restart.

    Restart r draws its PRNG substream from (cfg.seed, "restart", r), so a
    fixed seed fixes the result exactly. g may contain extra vertices past
    the coordinate rows (the attribute vertices of an augmented graph);
    selection modularity is then computed on g with each restart's labels
    extended to those vertices by neighbor plurality. The returned labels
    always cover exactly the coordinate rows.

    Raises
    ------
    KTooLarge
        If cfg.k exceeds the vertex count.
    DegenerateCoordinates
        If all coordinate rows are identical while k > 1.
    """
    if g.n < coords.n:
        raise DimensionMismatch(
            f"coordinates cover {coords.n} vertices, graph has {g.n}"
        )
    if cfg.k < 1:
        raise ValueError("k must be >= 1")
    if cfg.k > coords.n:
        raise KTooLarge(f"k = {cfg.k} exceeds vertex count {coords.n}")
    X = coords.flat()
    if cfg.k > 1 and (X == X[0]).all():
        raise DegenerateCoordinates(
            "all vertices share one coordinate row; clusters are arbitrary"
        )
    best = None
    for r in range(cfg.restarts):
        rng = generator(cfg.seed, "restart", r)
        labels, _, history = lloyd_single(X, cfg.k, rng, cfg.max_iters, cfg.tol)
        scored = labels
        if g.n > coords.n:
            scored = _extend_labels(g, coords.n, labels, cfg.k)
        mod = modularity(g, Partition(labels=scored, k=cfg.k))
        if best is None or mod > best[0]:
            best = (mod, r, labels, history[-1])
    mod, r, labels, obj = best
    return Partition(
        labels=labels, k=cfg.k, objective=obj, modularity=mod, restart_index=r
    )


def kmeans_objective(coords: VertexCoordinates, labels: np.ndarray,
                     centroids: np.ndarray) -> float:
    """Sum of squared block distances to the assigned centroid tensors.

    centroids has shape (k, n_c, m + 1).
    """
    labels = np.asarray(labels, dtype=np.int64)
    centroids = np.asarray(centroids, dtype=np.float64)
    if centroids.ndim != 3 or centroids.shape[1:] != coords.values.shape[1:]:
        raise DimensionMismatch(
            f"centroid blocks {centroids.shape[1:]} do not match "
            f"coordinate blocks {coords.values.shape[1:]}"
        )
    if len(labels) != coords.n:
        raise DimensionMismatch("one label per vertex required")
    diff = coords.flat() - centroids.reshape(centroids.shape[0], -1)[labels]
    return float((diff * diff).sum())
