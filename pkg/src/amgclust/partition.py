"""Partition container shared by clustering and metrics, plus TSV IO."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Partition:
    """Cluster assignment: labels in 0..k-1, no empty cluster.

    objective/modularity/restart_index are populated when the partition
    came out of the K-means restart loop.
    """

    labels: np.ndarray
    k: int
    objective: float | None = None
    modularity: float | None = None
    restart_index: int | None = None

    def __post_init__(self):
        self.labels.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def partition_from_labels(raw) -> Partition:
    """Densify arbitrary hashable labels to 0..k-1 by first appearance."""
    raw = list(raw)
    index: dict = {}
    labels = np.empty(len(raw), dtype=np.int64)
    for i, v in enumerate(raw):
        labels[i] = index.setdefault(v, len(index))
    return Partition(labels=labels, k=len(index))


def write_partition(path, vertex_ids, part: Partition) -> None:
    """TSV dump: a `#` summary line, then `vertex<TAB>cluster` rows.

    vertex_ids carries the original ids of the clustered vertices (output
    covers only the surviving component).
    """
    fields = [f"K={part.k}"]
    if part.modularity is not None:
        fields.append(f"modularity={part.modularity!r}")
    if part.objective is not None:
        fields.append(f"objective={part.objective!r}")
    if part.restart_index is not None:
        fields.append(f"restart={part.restart_index}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# " + "\t".join(fields) + "\n")
        for vid, lab in zip(vertex_ids, part.labels):
            fh.write(f"{vid}\t{lab}\n")


def read_partition(path) -> tuple[np.ndarray, Partition]:
    """Read a partition TSV; returns (sorted vertex ids, dense partition).

    Labels may be arbitrary strings; they are densified by first
    appearance in vertex-id order.
    """
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 2:
                raise DataError(
                    f"{path}:{lineno}: expected 'vertex<TAB>cluster', "
                    f"got {len(parts)} fields"
                )
            try:
                vid = int(parts[0])
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad vertex id {parts[0]!r}") from None
            pairs.append((vid, parts[1]))
    if not pairs:
        raise DataError(f"{path}: no assignment rows")
    pairs.sort()
    ids = np.array([p[0] for p in pairs], dtype=np.int64)
    if len(np.unique(ids)) != len(ids):
        raise DataError(f"{path}: duplicate vertex ids")
    return ids, partition_from_labels([p[1] for p in pairs])
