"""Shared fixtures: the 4-vertex worked example and small generators."""
import numpy as np
import pytest

from amgclust.augment import attribute_table
from amgclust.config import PipelineParams
from amgclust.graph import build_graph

# 4 vertices, 5 unit edges; the running example used throughout the tests.
TOY_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]

# One row per vertex, three categorical columns.
TOY_ROWS = [
    ("M", "R", "C"),
    ("F", "D", "P"),
    ("F", "I", "J"),
    ("M", "D", "C"),
]
TOY_NAMES = ["a1", "a2", "a3"]

# Expected augmentation of the toy input: attribute vertices are appended
# per column in first-appearance order, so
#   a1: M=4 F=5   a2: R=6 D=7 I=8   a3: C=9 P=10 J=11
TOY_ATTR_EDGES = {
    (0, 4), (0, 6), (0, 9),
    (1, 5), (1, 7), (1, 10),
    (2, 5), (2, 8), (2, 11),
    (3, 4), (3, 7), (3, 9),
}


@pytest.fixture
def toy_graph():
    return build_graph(TOY_EDGES)


@pytest.fixture
def toy_table():
    return attribute_table(TOY_NAMES, TOY_ROWS)


def toy_params(**overrides) -> PipelineParams:
    """Parameters sized for the 4-vertex example.

    The default coarse cap (40) swallows the whole toy graph, making the
    first component an exact solve; the embedding then degenerates to the
    constant vector. A cap of 2 with a per-step target grows a real
    multi-vector hierarchy instead.
    """
    base = dict(seed=0, max_coarse_size=2, target_rho=1e-8, rho_mode="per_step")
    base.update(overrides)
    return PipelineParams(**base)


def random_weighted_graph(rng: np.random.Generator, n: int, p: float = 0.3):
    """Erdos-Renyi style weighted graph; retries until it has an edge."""
    while True:
        iu, ju = np.triu_indices(n, k=1)
        mask = rng.random(len(iu)) < p
        if mask.any():
            break
    w = rng.uniform(0.5, 2.0, mask.sum())
    return build_graph(list(zip(iu[mask], ju[mask], w)), n=n)
