"""Planted-partition benchmark generators.

Equal-sized groups, within-group edge probability p_in = c_in/n and
between-group p_out = c_out/n, parameterized by mean degree c and degree
gap delta = c_in - c_out so that c is held fixed:
c_in = c + (q-1) delta / q, c_out = c - delta / q. The spectral
detectability threshold for this family sits at delta = q sqrt(c).
"""
from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .augment import AttributeTable, attribute_table
from .errors import InfeasibleDegrees, InfeasibleSpec
from .graph import Graph, graph_from_pairs
from .partition import Partition
from .seeding import generator


def split_degrees(q: int, c: float, delta: float) -> tuple[float, float]:
    """(c_in, c_out) with mean c and gap delta over q groups.

    Raises InfeasibleDegrees when the implied c_out would be negative.
    """
    c_in = c + (q - 1) * delta / q
    c_out = c - delta / q
    if c_out < 0:
        raise InfeasibleDegrees(
            f"delta = {delta} with c = {c}, q = {q} gives c_out = {c_out} < 0"
        )
    return c_in, c_out


def detectability_threshold(q: int, c: float) -> float:
    """Degree gap q * sqrt(c) below which no algorithm can beat chance."""
    if q < 2:
        raise ValueError("threshold needs at least two groups")
    if c <= 0:
        raise ValueError("mean degree must be positive")
    return q * math.sqrt(c)


@dataclass(frozen=True)
class SbmSpec:
    """Planted-partition instance parameters."""

    n: int
    q: int
    c: float
    delta: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.q < 2:
            raise InfeasibleSpec("need n >= 2 and q >= 2")
        if self.q > self.n:
            raise InfeasibleSpec(f"q = {self.q} groups for n = {self.n} vertices")
        if self.delta < 0:
            raise InfeasibleSpec("assortative spec requires delta >= 0")
        c_in, _ = split_degrees(self.q, self.c, self.delta)
        if c_in > self.n:
            raise InfeasibleSpec(
                f"c_in = {c_in} exceeds n = {self.n}; p_in would exceed 1"
            )

    @property
    def c_in(self) -> float:
        return split_degrees(self.q, self.c, self.delta)[0]

    @property
    def c_out(self) -> float:
        return split_degrees(self.q, self.c, self.delta)[1]

    @property
    def p_in(self) -> float:
        return self.c_in / self.n

    @property
    def p_out(self) -> float:
        return self.c_out / self.n


def planted_labels(n: int, q: int) -> np.ndarray:
    """Equal split of 0..n-1 into q groups; remainder goes to the first groups."""
    sizes = np.full(q, n // q, dtype=np.int64)
    sizes[: n % q] += 1
    return np.repeat(np.arange(q, dtype=np.int64), sizes)


def generate_sbm(spec: SbmSpec) -> tuple[Graph, Partition]:
    """Sample one instance; returns the graph and the planted truth.

    Every unordered vertex pair gets an independent Bernoulli draw with
    p_in or p_out according to the planted labels. Deterministic in
    spec.seed. The sampled graph may be disconnected; callers are expected
    to restrict to the largest component.
    """
    labels = planted_labels(spec.n, spec.q)
    iu, ju = np.triu_indices(spec.n, k=1)
    prob = np.where(labels[iu] == labels[ju], spec.p_in, spec.p_out)
    rng = generator(spec.seed, "sbm-edges")
    mask = rng.random(len(prob)) < prob
    g = graph_from_pairs(spec.n, iu[mask], ju[mask])
    return g, Partition(labels=labels, k=spec.q)


@dataclass(frozen=True)
class NoiseSpec:
    """Attribute corruption: with probability level, a cell is redrawn
    uniformly over all q classes (the truth included), so the expected
    match rate is 1 - level + level/q."""

    level: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.level <= 1.0:
            raise InfeasibleSpec(f"noise level must lie in [0, 1], got {self.level}")


def labels_to_attributes(truth: Partition, noise: NoiseSpec,
                         column: str = "class") -> AttributeTable:
    """Single-column categorical table carrying the (noised) planted labels."""
    values = truth.labels.astype(np.int64).copy()
    rng = generator(noise.seed, "attr-noise")
    redraw_mask = rng.random(truth.n) < noise.level
    redraws = rng.integers(0, truth.k, size=truth.n)
    values[redraw_mask] = redraws[redraw_mask]
    return attribute_table([column], [(str(v),) for v in values])
