import json

import numpy as np
import pytest

from amgclust.config import PipelineParams
from amgclust.errors import DataError, DegenerateCoordinates, EmptyGraph
from amgclust.graph import build_graph
from amgclust.pipeline import run_cluster

from conftest import TOY_EDGES, toy_params


def test_toy_attributed_end_to_end(toy_graph, toy_table):
    res = run_cluster(toy_graph, toy_table, [0, 1, 1, 0], ks=[2],
                      params=toy_params(), mode="attributed")
    assert res.discarded == 0
    assert res.kept.tolist() == [0, 1, 2, 3]
    kr = res.results[0]
    assert kr.k == 2
    assert kr.partition.n == 4
    assert set(kr.metrics) == {
        "k", "modularity", "ratio_cut", "objective", "restart_index",
        "nmi", "entropy", "conditional_entropy", "gain",
    }
    # noiseless truth attributes pin the planted split exactly
    assert kr.metrics["nmi"] == pytest.approx(1.0)
    prov = res.provenance
    assert prov["mode"] == "attributed"
    assert prov["augmented"] == {
        "n_new": 12, "ne_new": 17, "m": 3, "domain_sizes": [2, 3, 3]
    }
    assert prov["input"] == {"n": 4, "ne": 5}
    assert prov["solver"]["stop_reason"] == "target"
    assert len(prov["solver"]["rho_history"]) == prov["solver"]["n_components"]
    assert prov["embedding"]["n_c"] >= 1
    assert "2" in prov["kmeans"]
    json.dumps(prov)  # provenance must be JSON-serializable as-is


def test_toy_structure_mode(toy_graph):
    res = run_cluster(toy_graph, None, None, ks=[2],
                      params=toy_params(), mode="structure")
    prov = res.provenance
    assert prov["mode"] == "structure"
    assert prov["augmented"]["n_new"] == 4
    assert prov["augmented"]["ne_new"] == 5
    assert prov["augmented"]["m"] == 0
    assert res.results[0].metrics["nmi"] is None


def test_default_cap_degenerates_tiny_graph(toy_graph):
    # with the production coarse cap the single component solves the toy
    # system exactly, the embedding collapses to the constant vector, and
    # clustering for K > 1 must refuse rather than return arbitrary labels
    with pytest.raises(DegenerateCoordinates):
        run_cluster(toy_graph, None, None, [2], PipelineParams(seed=0),
                    mode="structure")


def test_auto_mode_resolution(toy_graph, toy_table):
    res = run_cluster(toy_graph, toy_table, None, [2], toy_params())
    assert res.provenance["mode"] == "attributed"
    res = run_cluster(toy_graph, None, None, [2], toy_params())
    assert res.provenance["mode"] == "structure"


def test_mode_conflicts(toy_graph, toy_table):
    with pytest.raises(DataError):
        run_cluster(toy_graph, None, None, [2], toy_params(), mode="attributed")
    with pytest.raises(DataError):
        run_cluster(toy_graph, toy_table, None, [2], toy_params(),
                    mode="structure")
    with pytest.raises(DataError):
        run_cluster(toy_graph, None, None, [2], toy_params(), mode="hybrid")


def test_disconnected_input_restricted(toy_table):
    # vertex 4 is isolated: it must be dropped, truth and table restricted
    g = build_graph(TOY_EDGES, n=5)
    from amgclust.augment import attribute_table

    table = attribute_table(
        toy_table.names, list(toy_table.rows) + [("M", "R", "C")]
    )
    res = run_cluster(g, table, [0, 1, 1, 0, 1], ks=[2], params=toy_params())
    assert res.discarded == 1
    assert res.kept.tolist() == [0, 1, 2, 3]
    assert res.results[0].partition.n == 4
    assert res.provenance["component"] == {"n": 4, "ne": 5, "discarded": 1}
    assert res.results[0].metrics["nmi"] is not None


def test_truth_length_checked(toy_graph):
    with pytest.raises(DataError):
        run_cluster(toy_graph, None, [0, 1], ks=[2], params=toy_params())


def test_ks_required_and_deduped(toy_graph):
    with pytest.raises(DataError):
        run_cluster(toy_graph, None, None, [], toy_params())
    res = run_cluster(toy_graph, None, None, [2, 1, 2], toy_params())
    assert [r.k for r in res.results] == [1, 2]


def test_edgeless_component_rejected():
    g = build_graph([], n=3)
    with pytest.raises(EmptyGraph):
        run_cluster(g, None, None, [1], toy_params())


def test_deterministic_runs(toy_graph, toy_table):
    a = run_cluster(toy_graph, toy_table, [0, 1, 1, 0], [2], toy_params(seed=5))
    b = run_cluster(toy_graph, toy_table, [0, 1, 1, 0], [2], toy_params(seed=5))
    assert np.array_equal(a.results[0].partition.labels,
                          b.results[0].partition.labels)
    assert a.results[0].metrics == b.results[0].metrics
    pa = {k: v for k, v in a.provenance.items() if k != "timings_s"}
    pb = {k: v for k, v in b.provenance.items() if k != "timings_s"}
    assert pa == pb


def test_truth_with_string_labels(toy_graph):
    res = run_cluster(toy_graph, None, ["x", "y", "y", "x"], [2], toy_params())
    assert res.results[0].metrics["nmi"] is not None


def test_shift_lambda_override(toy_graph):
    res = run_cluster(toy_graph, None, None, [2], toy_params(shift_lambda=3.25))
    assert res.provenance["shift"]["lambda"] == 3.25
    res = run_cluster(toy_graph, None, None, [2], toy_params())
    assert res.provenance["shift"]["lambda"] == 2.5  # average weighted degree
    assert res.provenance["shift"]["edge"] == [0, 1]
