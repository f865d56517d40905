"""Synthetic benchmark generators with ground-truth motifs.

``generate_tree_grid`` builds one node-classification graph: a balanced
binary tree with 3x3 grid motifs hung off random tree nodes; grid
membership is the label. ``generate_ba2motifs`` builds a balanced
graph-classification set: preferential-attachment bases carrying either a
5-node house motif (label 0) or a 5-node cycle motif (label 1).

Node features are a one-hot encoding of the node degree (clipped), so
learning stays purely structural while giving the models a usable input
signal. Both generators are pure functions of their arguments; the motif
edges of every graph are recorded as ground truth for scoring explainers.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParams
from .graphs import GRAPH_TASK, NODE_TASK, DatasetBundle, Graph

__all__ = ["generate_tree_grid", "generate_ba2motifs"]

FEATURE_DIM = 10

HOUSE_MOTIF = ((0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4))
CYCLE_MOTIF = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))
MOTIF_SIZE = 5


def _degree_features(n: int, edges) -> np.ndarray:
    """One-hot of the undirected degree, clipped to FEATURE_DIM-1."""
    deg = np.zeros(n, dtype=np.int64)
    for s, d in edges:
        deg[s] += 1
        if s != d:
            deg[d] += 1
    feats = np.zeros((n, FEATURE_DIM), dtype=np.float64)
    feats[np.arange(n), np.minimum(deg, FEATURE_DIM - 1)] = 1.0
    return feats


def _split_indices(n: int, rng: np.random.Generator) -> dict:
    idx = rng.permutation(n)
    n_train = max(1, int(round(0.7 * n)))
    n_val = int(round(0.15 * n))
    n_train = min(n_train, n)
    n_val = min(n_val, n - n_train)
    return {
        "train": sorted(int(i) for i in idx[:n_train]),
        "val": sorted(int(i) for i in idx[n_train : n_train + n_val]),
        "test": sorted(int(i) for i in idx[n_train + n_val :]),
    }


def generate_tree_grid(depth: int, num_grids: int, seed: int) -> DatasetBundle:
    """Balanced binary tree of ``depth`` levels plus ``num_grids`` 3x3 grids.

    Each grid is attached by a single edge from its corner node to a
    uniformly chosen tree node. Labels: 0 for tree nodes, 1 for grid
    nodes. Ground truth: the 12 lattice edges of every grid.
    """
    if depth < 2 or num_grids < 1:
        raise InvalidParams("depth must be >= 2 and num_grids >= 1")
    rng = np.random.default_rng(seed)
    n_tree = 2**depth - 1
    edges = []
    for child in range(1, n_tree):
        edges.append(((child - 1) // 2, child))

    ground_truth = []
    next_node = n_tree
    for _ in range(num_grids):
        base = next_node
        for r in range(3):
            for c in range(3):
                u = base + 3 * r + c
                if c < 2:
                    ground_truth.append((u, u + 1))
                if r < 2:
                    ground_truth.append((u, u + 3))
        anchor = int(rng.integers(0, n_tree))
        edges.append((anchor, base))
        next_node += 9
    edges.extend(ground_truth)

    n = next_node
    labels = np.zeros(n, dtype=np.int64)
    labels[n_tree:] = 1
    graph = Graph(
        node_count=n,
        edges=tuple(edges),
        directed=False,
        node_features=_degree_features(n, edges),
        node_labels=labels,
        ground_truth_edges=tuple(ground_truth),
    )
    return DatasetBundle(
        id="tree_grid",
        task=NODE_TASK,
        graphs=(graph,),
        num_classes=2,
        split=_split_indices(n, rng),
    )


def _preferential_attachment_tree(n: int, rng: np.random.Generator) -> list:
    """Connected base: each new node links to one existing node chosen
    proportionally to degree (Barabasi-Albert with one edge per arrival)."""
    edges = [(0, 1)]
    targets = [0, 1]  # node repeated once per incident edge
    for new in range(2, n):
        anchor = int(targets[rng.integers(0, len(targets))])
        edges.append((anchor, new))
        targets.extend((anchor, new))
    return edges


def generate_ba2motifs(num_graphs: int, base_size: int, seed: int) -> DatasetBundle:
    """Balanced two-class graph set: house motif vs 5-cycle motif.

    Graph ``i`` carries a house when ``i`` is even and a cycle otherwise,
    welded to a preferential-attachment base of ``base_size`` nodes by one
    attachment edge.
    """
    if num_graphs < 2 or num_graphs % 2 != 0:
        raise InvalidParams("num_graphs must be even and >= 2")
    if base_size < 5:
        raise InvalidParams("base_size must be >= 5")
    rng = np.random.default_rng(seed)
    graphs = []
    for i in range(num_graphs):
        label = i % 2
        motif = HOUSE_MOTIF if label == 0 else CYCLE_MOTIF
        edges = _preferential_attachment_tree(base_size, rng)
        motif_edges = [(base_size + s, base_size + d) for s, d in motif]
        edges.extend(motif_edges)
        anchor = int(rng.integers(0, base_size))
        edges.append((anchor, base_size))
        n = base_size + MOTIF_SIZE
        graphs.append(
            Graph(
                node_count=n,
                edges=tuple(edges),
                directed=False,
                node_features=_degree_features(n, edges),
                graph_label=label,
                ground_truth_edges=tuple(motif_edges),
            )
        )
    return DatasetBundle(
        id="ba2motifs",
        task=GRAPH_TASK,
        graphs=tuple(graphs),
        num_classes=2,
        split=_split_indices(num_graphs, rng),
    )
