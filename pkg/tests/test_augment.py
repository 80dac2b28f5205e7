import numpy as np
import pytest

from amgclust.augment import (
    attribute_table,
    augment,
    compute_domains,
    read_attribute_table,
    write_attribute_table,
)
from amgclust.errors import EmptyTable, NonPositiveWeight, RowCountMismatch

from conftest import TOY_ATTR_EDGES, TOY_EDGES, TOY_NAMES, TOY_ROWS


def test_toy_counts(toy_graph, toy_table):
    ag = augment(toy_graph, toy_table)
    assert ag.n == 4
    assert ag.m == 3
    assert ag.n_new == 12
    assert ag.graph.ne == 17


def test_toy_edge_set_exact(toy_graph, toy_table):
    ag = augment(toy_graph, toy_table)
    ei, ej, _ = ag.graph.edge_pairs()
    edges = set(zip(ei.tolist(), ej.tolist()))
    assert edges == set(TOY_EDGES) | TOY_ATTR_EDGES


def test_toy_neighbor_table(toy_graph, toy_table):
    ag = augment(toy_graph, toy_table)
    assert ag.neighbor_table.tolist() == [
        [4, 6, 9],
        [5, 7, 10],
        [5, 8, 11],
        [4, 7, 9],
    ]


def test_toy_attribute_ids(toy_graph, toy_table):
    ag = augment(toy_graph, toy_table)
    assert ag.attribute_ids(0).tolist() == [4, 5]
    assert ag.attribute_ids(1).tolist() == [6, 7, 8]
    assert ag.attribute_ids(2).tolist() == [9, 10, 11]


def test_domains_first_appearance(toy_table):
    dom = compute_domains(toy_table)
    assert dom.values == (("M", "F"), ("R", "D", "I"), ("C", "P", "J"))
    assert dom.sizes == (2, 3, 3)


def test_attr_weight_applied(toy_graph, toy_table):
    ag = augment(toy_graph, toy_table, attr_weight=0.5)
    A = ag.graph.adjacency()
    assert A[0, 4] == 0.5
    assert A[0, 1] == 1.0  # structure edges untouched
    # every structure vertex gains m attribute edges
    assert ag.graph.degrees()[0] == pytest.approx(3.0 + 3 * 0.5)


def test_attribute_vertex_degree(toy_graph, toy_table):
    ag = augment(toy_graph, toy_table)
    deg = ag.graph.degrees()
    # hub degree = how many rows carry that value
    assert deg[4] == 2.0  # M
    assert deg[6] == 1.0  # R
    assert deg[7] == 2.0  # D


def test_empty_table_passthrough(toy_graph):
    t = attribute_table([], [() for _ in range(4)])
    ag = augment(toy_graph, t)
    assert ag.graph is toy_graph
    assert ag.m == 0
    assert ag.neighbor_table.shape == (4, 0)
    assert ag.n_new == 4


def test_missing_cells_become_singletons(toy_graph):
    t = attribute_table(["x"], [("a",), ("",), (None,), ("a",)])
    assert t.rows[1][0] == "__missing_1"
    assert t.rows[2][0] == "__missing_2"
    ag = augment(toy_graph, t)
    # domain: a, __missing_1, __missing_2 -> three attribute vertices
    assert ag.domain.sizes == (3,)
    assert ag.n_new == 7
    deg = ag.graph.degrees()
    assert deg[5] == 1.0 and deg[6] == 1.0  # singleton hubs


def test_row_count_mismatch(toy_graph):
    t = attribute_table(["x"], [("a",), ("b",)])
    with pytest.raises(RowCountMismatch):
        augment(toy_graph, t)


def test_row_width_mismatch():
    with pytest.raises(RowCountMismatch):
        attribute_table(["x", "y"], [("a",)])


@pytest.mark.parametrize("w", [0.0, -1.0, float("inf")])
def test_bad_attr_weight(toy_graph, toy_table, w):
    with pytest.raises(NonPositiveWeight):
        augment(toy_graph, toy_table, attr_weight=w)


def test_compute_domains_empty():
    with pytest.raises(EmptyTable):
        compute_domains(attribute_table(["x"], []))


def test_table_round_trip(tmp_path, toy_table):
    path = tmp_path / "attrs.tsv"
    write_attribute_table(path, toy_table)
    back = read_attribute_table(path)
    assert back == toy_table


def test_read_table_missing_field(tmp_path):
    path = tmp_path / "attrs.tsv"
    path.write_text("x\ty\na\t\n")
    t = read_attribute_table(path)
    assert t.rows[0] == ("a", "__missing_0")


def test_read_table_bad_row(tmp_path):
    path = tmp_path / "attrs.tsv"
    path.write_text("x\ty\na\tb\nc\n")
    with pytest.raises(RowCountMismatch) as exc:
        read_attribute_table(path)
    assert ":3" in str(exc.value)


def test_read_table_empty_file(tmp_path):
    path = tmp_path / "attrs.tsv"
    path.write_text("")
    with pytest.raises(EmptyTable):
        read_attribute_table(path)


def test_table_accessors(toy_table):
    assert toy_table.n == 4
    assert toy_table.m == 3
    assert toy_table.names == tuple(TOY_NAMES)
    assert toy_table.rows == tuple(TOY_ROWS)
