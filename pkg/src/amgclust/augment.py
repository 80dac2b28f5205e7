"""Attribute tables and graph augmentation.

Each categorical attribute value becomes a fresh attribute vertex appended
after the structure vertices, and every structure vertex is wired to the
vertex of its value in each column. Cardinalities: n_new = n + sum_j |Dom_j|,
ne_new = ne + n * m.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyTable, NonPositiveWeight, RowCountMismatch
from .graph import Graph, graph_from_pairs


@dataclass(frozen=True)
class AttributeTable:
    """Categorical attribute table: one row per vertex, one column per attribute.

    Every cell is a non-empty string; missing input cells are resolved to a
    fresh per-vertex singleton value before construction.
    """

    names: tuple
    rows: tuple  # tuple of per-vertex tuples, each of length m

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.names)


def attribute_table(names, rows) -> AttributeTable:
    """Build a table, resolving missing (empty/None) cells to singletons.

    A missing cell in column j of row i becomes the value ``__missing_<i>``,
    unique to that vertex, so it forms its own attribute vertex.
    """
    names = tuple(str(c) for c in names)
    fixed = []
    for i, row in enumerate(rows):
        row = tuple(row)
        if len(row) != len(names):
            raise RowCountMismatch(
                f"row {i} has {len(row)} cells, expected {len(names)}"
            )
        fixed.append(
            tuple(
                str(v) if v not in (None, "") else f"__missing_{i}"
                for v in row
            )
        )
    return AttributeTable(names=names, rows=tuple(fixed))


@dataclass(frozen=True)
class AttributeDomain:
    """Distinct values per column, in first-appearance order."""

    values: tuple  # tuple of per-column value tuples

    @property
    def sizes(self) -> tuple:
        return tuple(len(v) for v in self.values)


def compute_domains(t: AttributeTable) -> AttributeDomain:
    """First-appearance-ordered distinct values of every column.

    Raises EmptyTable when the table has no rows.
    """
    if t.n == 0:
        raise EmptyTable("attribute table has no rows")
    doms = []
    for j in range(t.m):
        doms.append(tuple(dict.fromkeys(row[j] for row in t.rows)))
    return AttributeDomain(values=tuple(doms))


@dataclass(frozen=True)
class AugmentedGraph:
    """Structure graph plus attribute vertices.

    Attributes
    ----------
    graph : Graph
        The augmented graph over n_new vertices; ids 0..n-1 are the
        structure vertices, the rest are attribute vertices grouped by
        column and ordered by domain first appearance.
    n : int
        Structure vertex count.
    neighbor_table : ndarray, shape (n, m)
        neighbor_table[i, j] = global id of vertex i's attribute vertex in
        column j.
    domain : AttributeDomain
    """

    graph: Graph
    n: int
    neighbor_table: np.ndarray
    domain: AttributeDomain

    def __post_init__(self):
        self.neighbor_table.setflags(write=False)

    @property
    def m(self) -> int:
        return self.neighbor_table.shape[1]

    @property
    def n_new(self) -> int:
        return self.graph.n

    def attribute_ids(self, j: int) -> np.ndarray:
        """Global vertex ids of column j's domain values, in domain order."""
        base = self.n + sum(self.domain.sizes[:j])
        return np.arange(base, base + self.domain.sizes[j], dtype=np.int64)


def augment(g: Graph, t: AttributeTable, attr_weight: float = 1.0) -> AugmentedGraph:
    """Attach one attribute vertex per (column, value) and wire the rows.

    With m = 0 the augmented graph is the input graph unchanged.

    Raises
    ------
    RowCountMismatch
        If the table row count differs from g.n.
    NonPositiveWeight
        If attr_weight <= 0.
    """
    if t.n != g.n:
        raise RowCountMismatch(f"table has {t.n} rows for a {g.n}-vertex graph")
    if attr_weight <= 0 or not np.isfinite(attr_weight):
        raise NonPositiveWeight(f"attribute edge weight must be positive, got {attr_weight}")
    if t.m == 0:
        empty = AttributeDomain(values=())
        return AugmentedGraph(
            graph=g,
            n=g.n,
            neighbor_table=np.zeros((g.n, 0), dtype=np.int64),
            domain=empty,
        )
    domain = compute_domains(t)
    n = g.n
    offsets = np.concatenate([[0], np.cumsum(domain.sizes)]) + n
    n_new = int(offsets[-1])
    value_index = [
        {v: k for k, v in enumerate(domain.values[j])} for j in range(t.m)
    ]
    neighbor = np.empty((n, t.m), dtype=np.int64)
    for j in range(t.m):
        idx = value_index[j]
        col = np.fromiter(
            (idx[row[j]] for row in t.rows), count=n, dtype=np.int64
        )
        neighbor[:, j] = offsets[j] + col
    oi, oj, ow = g.edge_pairs()
    ai = np.tile(np.arange(n, dtype=np.int64), t.m)
    aj = neighbor.T.ravel()
    aw = np.full(n * t.m, float(attr_weight))
    graph = graph_from_pairs(
        n_new,
        np.concatenate([oi, ai]),
        np.concatenate([oj, aj]),
        np.concatenate([ow, aw]),
    )
    return AugmentedGraph(graph=graph, n=n, neighbor_table=neighbor, domain=domain)


def read_attribute_table(path) -> AttributeTable:
    """Read a TSV attribute file: header of column names, one row per vertex.

    Empty fields are missing values. Rows are in vertex-id order.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise EmptyTable(f"{path}: empty attribute file")
    names = lines[0].rstrip("\n").split("\t")
    if names == [""]:
        names = []
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        if ln.strip() == "":
            continue
        cells = ln.split("\t")
        if len(cells) != len(names):
            raise RowCountMismatch(
                f"{path}:{lineno}: {len(cells)} fields, header has {len(names)}"
            )
        rows.append(cells)
    return attribute_table(names, rows)


def write_attribute_table(path, t: AttributeTable) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(t.names) + "\n")
        for row in t.rows:
            fh.write("\t".join(row) + "\n")
