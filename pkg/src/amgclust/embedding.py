"""Spectral-like embedding from the smooth vector set.

The stored vectors span the slow subspace of the shifted Laplacian; a thin
SVD orthonormalizes them (dropping directions below a relative singular
value cutoff) and every structure vertex gets a block coordinate tensor:
its own basis row plus the basis rows of its m attribute vertices.
Vertices sharing an attribute value share that block bitwise, which is
what lets attribute agreement pull vertices together under the block
distance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .augment import AugmentedGraph
from .errors import AllVectorsZero, DimensionMismatch, ShapeMismatch


@dataclass(frozen=True)
class EmbeddingBasis:
    """Orthonormal basis of the smooth subspace.

    vectors has shape (n_new, n_c) with orthonormal columns; all singular
    values of the input set are kept for provenance, in non-increasing
    order.
    """

    vectors: np.ndarray
    singular_values: np.ndarray
    truncation_tol: float

    def __post_init__(self):
        self.vectors.setflags(write=False)
        self.singular_values.setflags(write=False)

    @property
    def n_c(self) -> int:
        return self.vectors.shape[1]


def orthonormal_basis(vectors, trunc_tol: float = 1e-12) -> EmbeddingBasis:
    """Thin SVD of the stacked vectors, truncated at sigma_r > trunc_tol * sigma_max.

    Accepts a SmoothVectorSet or a plain (n, M) array of column vectors.
    Raises AllVectorsZero when every input vector is zero.
    """
    X = np.asarray(getattr(vectors, "vectors", vectors), dtype=np.float64)
    if X.ndim != 2 or X.shape[1] == 0:
        raise DimensionMismatch("expected a nonempty (n, M) matrix of column vectors")
    U, S, _ = np.linalg.svd(X, full_matrices=False)
    if S[0] == 0:
        raise AllVectorsZero("all stored vectors are zero")
    keep = S > trunc_tol * S[0]
    return EmbeddingBasis(
        vectors=np.ascontiguousarray(U[:, keep]),
        singular_values=S,
        truncation_tol=float(trunc_tol),
    )


@dataclass(frozen=True)
class VertexCoordinates:
    """Block coordinates: values[i, r, 0] is vertex i's own basis entry in
    direction r, values[i, r, 1 + j] the entry of its column-j attribute
    vertex. Shape (n, n_c, m + 1)."""

    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def n_c(self) -> int:
        return self.values.shape[1]

    @property
    def m(self) -> int:
        return self.values.shape[2] - 1

    def flat(self) -> np.ndarray:
        """Row-per-vertex flattening, shape (n, n_c * (m + 1))."""
        return self.values.reshape(self.n, -1)


def block_coordinates(basis: EmbeddingBasis, ag: AugmentedGraph) -> VertexCoordinates:
    """Gather each structure vertex's block tensor from the basis rows.

    The basis must span the augmented graph (n_new rows). With m = 0 the
    coordinates are exactly the structure vertices' basis rows.
    """
    if basis.vectors.shape[0] != ag.n_new:
        raise DimensionMismatch(
            f"basis has {basis.vectors.shape[0]} rows, augmented graph has {ag.n_new}"
        )
    ids = np.concatenate(
        [np.arange(ag.n, dtype=np.int64)[:, None], ag.neighbor_table], axis=1
    )
    # (n, m+1, n_c) -> (n, n_c, m+1)
    values = basis.vectors[ids, :].transpose(0, 2, 1)
    return VertexCoordinates(values=np.ascontiguousarray(values))


def block_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance between two block tensors of shape (n_c, m + 1)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"block shapes differ: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sqrt((d * d).sum()))
