"""Undirected weighted graphs in CSR form.

Vertices are 0..n-1. Each undirected edge {i, j} is stored twice (both
directions) with the same positive weight; self loops are rejected. Rows
are column-sorted, so construction from the same edge set is deterministic
regardless of input order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import (
    DisconnectedInput,
    DuplicateEdge,
    EdgeNotPresent,
    EmptyGraph,
    IndexOutOfRange,
    NonPositiveLambda,
    NonPositiveWeight,
    SelfLoop,
)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected weighted graph.

    Attributes
    ----------
    n : int
        Vertex count.
    indptr, indices, weights : ndarray
        CSR adjacency of the symmetric weight matrix (int64/int64/float64).
    ne : int
        Number of undirected edges (half the stored entry count).
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    ne: int

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.weights):
            arr.setflags(write=False)

    def degrees(self) -> np.ndarray:
        """Weighted degree of every vertex."""
        out = np.zeros(self.n)
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        np.add.at(out, rows, self.weights)
        return out

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric weight matrix as scipy CSR (shares the arrays)."""
        return sp.csr_matrix(
            (self.weights, self.indices, self.indptr), shape=(self.n, self.n)
        )

    def edge_pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Canonical edges (i < j) in lexicographic order, with weights."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        keep = rows < self.indices
        return rows[keep], self.indices[keep], self.weights[keep]


def _csr_from_directed(n: int, rows, cols, vals) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # rows/cols cover both directions already; sort by (row, col)
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, cols.astype(np.int64, copy=False), vals.astype(np.float64, copy=False)


def graph_from_pairs(n: int, ei, ej, w=None) -> Graph:
    """Build a Graph from canonical edge arrays assumed already validated.

    ei/ej must be duplicate-free pairs with ei != ej and 0 <= id < n.
    Intended for generators and internal transforms; `build_graph` is the
    validating entry point.
    """
    ei = np.asarray(ei, dtype=np.int64)
    ej = np.asarray(ej, dtype=np.int64)
    if w is None:
        w = np.ones(len(ei))
    w = np.asarray(w, dtype=np.float64)
    rows = np.concatenate([ei, ej])
    cols = np.concatenate([ej, ei])
    vals = np.concatenate([w, w])
    indptr, indices, weights = _csr_from_directed(n, rows, cols, vals)
    return Graph(n=n, indptr=indptr, indices=indices, weights=weights, ne=len(ei))


def build_graph(edges, n: int | None = None) -> Graph:
    """Validate an edge list and build the CSR graph.

    Parameters
    ----------
    edges : iterable of (i, j) or (i, j, w)
        Undirected edges; weight defaults to 1.0.
    n : int, optional
        Vertex count. Inferred as max id + 1 when omitted.

    Raises
    ------
    SelfLoop, IndexOutOfRange, NonPositiveWeight, DuplicateEdge
    """
    ei, ej, ws = [], [], []
    for pos, edge in enumerate(edges):
        if len(edge) == 2:
            i, j = edge
            w = 1.0
        else:
            i, j, w = edge
        i, j, w = int(i), int(j), float(w)
        if i == j:
            raise SelfLoop(f"edge {pos}: self loop at vertex {i}")
        if i < 0 or j < 0:
            raise IndexOutOfRange(f"edge {pos}: negative vertex id ({i}, {j})")
        if w <= 0 or not np.isfinite(w):
            raise NonPositiveWeight(f"edge {pos}: weight {w} for edge ({i}, {j})")
        ei.append(min(i, j))
        ej.append(max(i, j))
        ws.append(w)
    ei = np.asarray(ei, dtype=np.int64)
    ej = np.asarray(ej, dtype=np.int64)
    ws = np.asarray(ws, dtype=np.float64)
    if n is None:
        if len(ei) == 0:
            raise EmptyGraph("empty edge list and no vertex count given")
        n = int(max(ei.max(), ej.max())) + 1
    elif len(ei) and (ei.min() < 0 or max(ei.max(), ej.max()) >= n):
        bad = int(max(ei.max(), ej.max()))
        raise IndexOutOfRange(f"vertex id {bad} outside 0..{n - 1}")
    if len(ei):
        order = np.lexsort((ej, ei))
        si, sj = ei[order], ej[order]
        dup = (si[1:] == si[:-1]) & (sj[1:] == sj[:-1])
        if dup.any():
            k = int(np.flatnonzero(dup)[0])
            raise DuplicateEdge(
                f"edge ({si[k]}, {sj[k]}) appears more than once "
                "(symmetric duplicates count)"
            )
    return graph_from_pairs(n, ei, ej, ws)


@dataclass(frozen=True)
class ComponentLabels:
    """Connected component labeling; component 0 is the largest."""

    labels: np.ndarray
    count: int
    sizes: np.ndarray


def connected_components(g: Graph) -> ComponentLabels:
    """Label components, largest first; ties broken by smallest vertex id."""
    raw = np.full(g.n, -1, dtype=np.int64)
    comp = 0
    for start in range(g.n):
        if raw[start] >= 0:
            continue
        stack = [start]
        raw[start] = comp
        while stack:
            v = stack.pop()
            for u in g.indices[g.indptr[v]:g.indptr[v + 1]]:
                if raw[u] < 0:
                    raw[u] = comp
                    stack.append(int(u))
        comp += 1
    sizes = np.bincount(raw, minlength=comp)
    # raw labels are already ordered by smallest contained vertex; stable
    # sort on -size keeps that order among equal sizes
    order = np.argsort(-sizes, kind="stable")
    remap = np.empty(comp, dtype=np.int64)
    remap[order] = np.arange(comp)
    labels = remap[raw]
    return ComponentLabels(labels=labels, count=comp, sizes=sizes[order])


def induced_subgraph(g: Graph, vertices: np.ndarray) -> Graph:
    """Subgraph on `vertices` (sorted ascending), relabeled to 0..len-1."""
    vertices = np.asarray(vertices, dtype=np.int64)
    keep = np.zeros(g.n, dtype=bool)
    keep[vertices] = True
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[vertices] = np.arange(len(vertices))
    ei, ej, w = g.edge_pairs()
    m = keep[ei] & keep[ej]
    return graph_from_pairs(len(vertices), new_id[ei[m]], new_id[ej[m]], w[m])


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Restrict to the largest connected component.

    Returns the subgraph and the original vertex ids kept (ascending).
    """
    comp = connected_components(g)
    kept = np.flatnonzero(comp.labels == 0).astype(np.int64)
    if len(kept) == g.n:
        return g, kept
    return induced_subgraph(g, kept), kept


def laplacian(g: Graph) -> sp.csr_matrix:
    """Weighted graph Laplacian D - W of a connected graph.

    Raises DisconnectedInput when the graph has more than one component.
    """
    if connected_components(g).count != 1:
        raise DisconnectedInput("laplacian requires a connected graph")
    A = g.adjacency()
    d = np.asarray(A.sum(axis=1)).ravel()
    L = sp.diags(d, format="csr") - A
    L.sort_indices()
    return _csr64(L)


def _csr64(A: sp.csr_matrix) -> sp.csr_matrix:
    """Coerce a CSR matrix to int64 indices and float64 data in place.

    scipy products and sums downcast index arrays to int32; the compiled
    kernels take int64 buffers. Attribute assignment is required because
    the csr_matrix constructor itself re-downcasts.
    """
    A = A.tocsr()
    if A.indptr.dtype != np.int64:
        A.indptr = A.indptr.astype(np.int64)
    if A.indices.dtype != np.int64:
        A.indices = A.indices.astype(np.int64)
    if A.data.dtype != np.float64:
        A.data = A.data.astype(np.float64)
    return A


def first_edge(g: Graph) -> tuple[int, int]:
    """Lexicographically first canonical edge (i, j) with i < j."""
    for i in range(g.n):
        row = g.indices[g.indptr[i]:g.indptr[i + 1]]
        above = row[row > i]
        if len(above):
            return i, int(above[0])
    raise EmptyGraph("graph has no edges")


def average_weighted_degree(g: Graph) -> float:
    """Mean weighted degree, 2W/n. Default shift magnitude."""
    return float(g.weights.sum() / g.n)


def spd_shift(L: sp.csr_matrix, edge: tuple[int, int], lam: float) -> sp.csr_matrix:
    """Rank-one SPD shift L + lam * e e^T with e indicator of an edge's endpoints.

    Adds lam at (i,i), (j,j), (i,j), (j,i). The off-diagonal structural
    entries are kept even if the shifted value is numerically zero.

    Raises
    ------
    NonPositiveLambda
        If lam <= 0.
    EdgeNotPresent
        If (i, j) is not an off-diagonal structural entry of L.
    """
    if lam <= 0 or not np.isfinite(lam):
        raise NonPositiveLambda(f"shift magnitude must be positive, got {lam}")
    i, j = edge
    n = L.shape[0]
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise EdgeNotPresent(f"({i}, {j}) is not a valid edge")
    row = L.indices[L.indptr[i]:L.indptr[i + 1]]
    if j not in row:
        raise EdgeNotPresent(f"edge ({i}, {j}) not present in the matrix")
    bump = sp.coo_matrix(
        (np.full(4, lam), ([i, j, i, j], [i, j, j, i])), shape=L.shape
    ).tocsr()
    out = (L + bump).tocsr()
    out.sort_indices()
    return _csr64(out)


def read_edge_list(path, n: int | None = None) -> Graph:
    """Parse a whitespace-separated edge list file.

    Lines are `i j [w]` with 0-based ids; `#` starts a comment. Parse
    errors carry the 1-based line number.
    """
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise IndexOutOfRange(
                    f"{path}:{lineno}: expected 'i j [w]', got {len(parts)} fields"
                )
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise IndexOutOfRange(f"{path}:{lineno}: {exc}") from None
            edges.append((i, j, w))
    try:
        return build_graph(edges, n=n)
    except EmptyGraph:
        raise EmptyGraph(f"{path}: no edges") from None


def write_edge_list(path, g: Graph) -> None:
    """Write canonical edges, one `i j w` line each."""
    ei, ej, w = g.edge_pairs()
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, c in zip(ei, ej, w):
            fh.write(f"{a} {b} {float(c)!r}\n")
