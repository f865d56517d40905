import json

import numpy as np
import pytest

from helpers import random_graph
from ingrex.errors import DuplicateEdge, EmptyGraph, OutOfRange, ParseError
from ingrex.graphs import (
    DatasetBundle,
    Graph,
    column_normalized_adjacency,
    dataset_to_json_dict,
    graph_adjacency,
    load_dataset,
    save_dataset,
    sym_normalized_adjacency,
)


def _graph(n, edges, directed=False):
    return Graph(node_count=n, edges=edges, directed=directed, node_features=np.zeros((n, 2)))


class TestColumnNormalized:
    def test_two_node_path(self):
        adj = column_normalized_adjacency(_graph(2, [(0, 1)]))
        assert adj.mode == "column_normalized"
        assert adj.matrix.to_dense().tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_single_dangling_node(self):
        adj = column_normalized_adjacency(_graph(1, []))
        assert adj.matrix.to_dense().tolist() == [[1.0]]

    def test_directed_star_columns_sum_to_one(self):
        adj = column_normalized_adjacency(_graph(4, [(1, 2), (1, 3)], directed=True))
        sums = adj.matrix.to_dense().sum(axis=0)
        assert np.allclose(sums, 1.0, atol=1e-9)

    def test_columns_sum_to_one_randomized(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            g = random_graph(rng)
            dense = column_normalized_adjacency(g).matrix.to_dense()
            assert np.allclose(dense.sum(axis=0), 1.0, atol=1e-9)

    def test_empty_graph_rejected(self):
        with pytest.raises(EmptyGraph):
            Graph(node_count=0, edges=[], directed=False, node_features=np.zeros((0, 1)))


class TestSymNormalized:
    def test_single_undirected_edge(self):
        adj = sym_normalized_adjacency(_graph(2, [(0, 1)]))
        assert adj.mode == "symmetric"
        assert np.allclose(adj.matrix.to_dense(), [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)

    def test_isolated_node(self):
        adj = sym_normalized_adjacency(_graph(1, []))
        assert adj.matrix.to_dense().tolist() == [[1.0]]

    def test_three_cycle_uniform(self):
        adj = sym_normalized_adjacency(_graph(3, [(0, 1), (1, 2), (0, 2)]))
        assert np.allclose(adj.matrix.values, 1.0 / 3.0, atol=1e-12)

    def test_symmetric_for_undirected_input(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            g = random_graph(rng, directed=False)
            dense = sym_normalized_adjacency(g).matrix.to_dense()
            assert np.max(np.abs(dense - dense.T)) < 1e-12


def test_adjacency_expands_undirected_pairs():
    adj = graph_adjacency(_graph(3, [(0, 1), (1, 2)]))
    assert adj.to_dense().tolist() == [
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 1.0],
        [0.0, 1.0, 0.0],
    ]


def test_duplicate_undirected_pair_rejected():
    with pytest.raises(DuplicateEdge):
        graph_adjacency(_graph(2, [(0, 1), (1, 0)]))


def test_edge_endpoint_out_of_range():
    with pytest.raises(OutOfRange):
        _graph(2, [(0, 5)])


def test_dataset_round_trip(tmp_path):
    g = Graph(
        node_count=3,
        edges=((0, 1), (1, 2)),
        directed=False,
        node_features=np.array([[0.5, 1.5], [2.0, 3.0], [4.0, 5.0]]),
        node_labels=np.array([0, 1, 0]),
        ground_truth_edges=((1, 2),),
    )
    bundle = DatasetBundle(
        id="toy", task="node_classification", graphs=(g,), num_classes=2,
        split={"train": [0, 1], "val": [], "test": [2]},
    )
    path = tmp_path / "toy.json"
    save_dataset(bundle, path)
    loaded = load_dataset(path)
    assert loaded.id == "toy"
    assert loaded.graphs[0].edges == g.edges
    assert np.array_equal(loaded.graphs[0].node_features, g.node_features)
    assert loaded.graphs[0].ground_truth_edges == ((1, 2),)
    assert loaded.split == {"train": [0, 1], "val": [], "test": [2]}
    assert dataset_to_json_dict(loaded) == dataset_to_json_dict(bundle)


def test_load_dataset_parse_error_has_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"task": }')
    with pytest.raises(ParseError, match=r"line 1 column"):
        load_dataset(path)


def test_load_dataset_missing_field(tmp_path):
    path = tmp_path / "missing.json"
    path.write_text(json.dumps({"task": "node_classification", "graphs": []}))
    with pytest.raises(ParseError):
        load_dataset(path)


def test_split_overlap_rejected():
    g = _graph(3, [(0, 1)])
    with pytest.raises(ParseError):
        DatasetBundle(
            id="bad", task="node_classification", graphs=(g,), num_classes=2,
            split={"train": [0, 1], "val": [1], "test": []},
        )


def test_split_index_out_of_range():
    g = _graph(3, [(0, 1)])
    with pytest.raises(OutOfRange):
        DatasetBundle(
            id="bad", task="node_classification", graphs=(g,), num_classes=2,
            split={"train": [99], "val": [], "test": []},
        )
