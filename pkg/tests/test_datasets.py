import numpy as np
import pytest

from ingrex.datasets import generate_ba2motifs, generate_tree_grid
from ingrex.errors import InvalidParams


class TestTreeGrid:
    def test_node_count_by_construction(self):
        ds = generate_tree_grid(3, 1, seed=0)
        assert ds.graphs[0].node_count == 2**3 - 1 + 9 == 16

    def test_zero_grids_rejected(self):
        with pytest.raises(InvalidParams):
            generate_tree_grid(3, 0, seed=0)

    def test_shallow_depth_rejected(self):
        with pytest.raises(InvalidParams):
            generate_tree_grid(1, 1, seed=0)

    def test_deterministic_under_seed(self):
        a = generate_tree_grid(4, 2, seed=9)
        b = generate_tree_grid(4, 2, seed=9)
        assert a.graphs[0].edges == b.graphs[0].edges
        assert a.split == b.split
        assert np.array_equal(a.graphs[0].node_features, b.graphs[0].node_features)

    def test_labels_mark_grid_membership(self):
        ds = generate_tree_grid(3, 2, seed=1)
        labels = ds.graphs[0].node_labels
        assert labels[: 2**3 - 1].sum() == 0
        assert labels[2**3 - 1 :].sum() == 18

    def test_ground_truth_is_grid_lattice(self):
        ds = generate_tree_grid(3, 1, seed=2)
        g = ds.graphs[0]
        assert len(g.ground_truth_edges) == 12
        assert set(g.ground_truth_edges) <= set(g.edges)

    def test_splits_cover_all_nodes(self):
        ds = generate_tree_grid(4, 1, seed=3)
        n = ds.graphs[0].node_count
        combined = sorted(ds.split["train"] + ds.split["val"] + ds.split["test"])
        assert combined == list(range(n))


class TestBa2Motifs:
    def test_balanced_labels(self):
        ds = generate_ba2motifs(10, 12, seed=0)
        labels = [g.graph_label for g in ds.graphs]
        assert labels.count(0) == labels.count(1) == 5

    def test_node_count_per_graph(self):
        ds = generate_ba2motifs(6, 9, seed=1)
        assert all(g.node_count == 9 + 5 for g in ds.graphs)

    def test_motif_edge_counts(self):
        ds = generate_ba2motifs(4, 8, seed=2)
        for g in ds.graphs:
            expected = 6 if g.graph_label == 0 else 5
            assert len(g.ground_truth_edges) == expected
            assert set(g.ground_truth_edges) <= set(g.edges)

    def test_odd_num_graphs_rejected(self):
        with pytest.raises(InvalidParams):
            generate_ba2motifs(7, 10, seed=0)

    def test_tiny_base_rejected(self):
        with pytest.raises(InvalidParams):
            generate_ba2motifs(4, 4, seed=0)

    def test_deterministic_under_seed(self):
        a = generate_ba2motifs(8, 10, seed=5)
        b = generate_ba2motifs(8, 10, seed=5)
        assert all(x.edges == y.edges for x, y in zip(a.graphs, b.graphs))
        assert a.split == b.split

    def test_base_is_connected_tree(self):
        ds = generate_ba2motifs(4, 15, seed=3)
        for g in ds.graphs:
            base_edges = [e for e in g.edges if max(e) < 15]
            assert len(base_edges) == 14  # spanning tree of the base
