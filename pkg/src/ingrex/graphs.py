"""Graph and dataset containers, adjacency normalizations, and the JSON
dataset file format.

A :class:`Graph` stores its edge list once; undirected graphs list each
edge a single time and the adjacency builder materializes both directions.
Dangling nodes (out-degree 0) receive a self-loop before row normalization
so random-walk probability mass is conserved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DuplicateEdge, EmptyGraph, OutOfRange, ParseError
from .sparse import SparseMatrix, build_csr

__all__ = [
    "Graph",
    "DatasetBundle",
    "NormalizedAdjacency",
    "graph_adjacency",
    "column_normalized_adjacency",
    "sym_normalized_adjacency",
    "load_dataset",
    "save_dataset",
    "dataset_to_json_dict",
]

NODE_TASK = "node_classification"
GRAPH_TASK = "graph_classification"


@dataclass(frozen=True)
class Graph:
    """A single attributed graph.

    ``edges`` lists each edge once; for undirected graphs an edge (u, v)
    stands for both directions. ``node_features`` is (node_count, dim).
    ``ground_truth_edges``, when present, marks motif edges used to score
    explanations against a known generator.
    """

    node_count: int
    edges: tuple
    directed: bool
    node_features: np.ndarray = field(repr=False)
    node_labels: np.ndarray | None = None
    graph_label: int | None = None
    ground_truth_edges: tuple = ()

    def __post_init__(self):
        feats = np.asarray(self.node_features, dtype=np.float64)
        object.__setattr__(self, "node_features", feats)
        object.__setattr__(self, "edges", tuple((int(s), int(d)) for s, d in self.edges))
        object.__setattr__(
            self, "ground_truth_edges", tuple((int(s), int(d)) for s, d in self.ground_truth_edges)
        )
        if self.node_count <= 0:
            raise EmptyGraph("graph must have at least one node")
        for s, d in self.edges:
            if not (0 <= s < self.node_count and 0 <= d < self.node_count):
                raise OutOfRange(f"edge ({s}, {d}) outside [0, {self.node_count})")
        if feats.ndim != 2 or feats.shape[0] != self.node_count:
            raise OutOfRange("feature matrix must have one row per node")
        if self.node_labels is not None:
            labels = np.asarray(self.node_labels, dtype=np.int64)
            object.__setattr__(self, "node_labels", labels)
            if labels.shape != (self.node_count,):
                raise OutOfRange("one label per node required")

    @property
    def feature_dim(self) -> int:
        return self.node_features.shape[1]

    def undirected_edge_set(self) -> set:
        return {(min(s, d), max(s, d)) for s, d in self.edges}


@dataclass(frozen=True)
class DatasetBundle:
    """A dataset: one graph (node tasks) or many (graph tasks), plus splits."""

    id: str
    task: str
    graphs: tuple
    num_classes: int
    split: dict

    def __post_init__(self):
        if self.task not in (NODE_TASK, GRAPH_TASK):
            raise ParseError(f"unknown task {self.task!r}")
        if self.task == NODE_TASK and len(self.graphs) != 1:
            raise ParseError("node classification bundles contain exactly one graph")
        limit = self.graphs[0].node_count if self.task == NODE_TASK else len(self.graphs)
        seen = set()
        for name in ("train", "val", "test"):
            idx = list(self.split.get(name, []))
            for i in idx:
                if not (0 <= i < limit):
                    raise OutOfRange(f"split index {i} outside [0, {limit})")
                if i in seen:
                    raise ParseError(f"split index {i} appears in more than one split")
                seen.add(i)

    @property
    def num_graphs(self) -> int:
        return len(self.graphs)


@dataclass(frozen=True)
class NormalizedAdjacency:
    """A normalized adjacency matrix plus the normalization it carries."""

    matrix: SparseMatrix
    mode: str  # "column_normalized" | "symmetric"


def _directed_pairs(graph: Graph) -> list:
    """Stored directed entries for the adjacency: both directions for
    undirected graphs, self-loops kept single."""
    if graph.directed:
        return list(graph.edges)
    pairs = []
    for s, d in graph.edges:
        pairs.append((s, d))
        if s != d:
            pairs.append((d, s))
    return pairs


def graph_adjacency(graph: Graph) -> SparseMatrix:
    """Unweighted adjacency A of the graph (no self-loop augmentation)."""
    n = graph.node_count
    try:
        return build_csr(_directed_pairs(graph), n, n)
    except DuplicateEdge as exc:
        raise DuplicateEdge(f"graph edge list expands to duplicates: {exc}") from exc


def column_normalized_adjacency(graph: Graph) -> NormalizedAdjacency:
    """Transpose of the row-normalized adjacency; every column sums to 1.

    Out-degree-0 nodes get a self-loop before normalization so the result
    is column-stochastic on every column.
    """
    if graph.node_count <= 0:
        raise EmptyGraph("graph must have at least one node")
    n = graph.node_count
    pairs = _directed_pairs(graph)
    out_deg = np.zeros(n, dtype=np.int64)
    for s, _ in pairs:
        out_deg[s] += 1
    pairs.extend((i, i) for i in np.flatnonzero(out_deg == 0))
    adj = build_csr(pairs, n, n)
    out_deg = np.diff(adj.row_offsets).astype(np.float64)
    row_norm = adj.with_values(adj.values / out_deg[adj.row_of_entry])
    return NormalizedAdjacency(matrix=row_norm.transpose(), mode="column_normalized")


def sym_normalized_adjacency(graph: Graph) -> NormalizedAdjacency:
    """D^{-1/2} (A + I) D^{-1/2} with degrees taken after self-loops."""
    if graph.node_count <= 0:
        raise EmptyGraph("graph must have at least one node")
    n = graph.node_count
    pairs = _directed_pairs(graph)
    loops = set(p for p in pairs if p[0] == p[1])
    pairs.extend((i, i) for i in range(n) if (i, i) not in loops)
    adj = build_csr(pairs, n, n)
    deg = np.diff(adj.row_offsets).astype(np.float64)
    inv_sqrt = 1.0 / np.sqrt(deg)
    scaled = adj.values * inv_sqrt[adj.row_of_entry] * inv_sqrt[adj.col_indices]
    return NormalizedAdjacency(matrix=adj.with_values(scaled), mode="symmetric")


# ---------------------------------------------------------------------------
# Dataset file format (JSON)
# ---------------------------------------------------------------------------

def _graph_to_dict(graph: Graph) -> dict:
    out = {
        "num_nodes": graph.node_count,
        "edges": [[s, d] for s, d in graph.edges],
        "directed": graph.directed,
        "features": graph.node_features.tolist(),
    }
    if graph.node_labels is not None:
        out["node_labels"] = graph.node_labels.tolist()
    if graph.graph_label is not None:
        out["graph_label"] = int(graph.graph_label)
    if graph.ground_truth_edges:
        out["ground_truth_edges"] = [[s, d] for s, d in graph.ground_truth_edges]
    return out


def _graph_from_dict(obj: dict) -> Graph:
    try:
        return Graph(
            node_count=int(obj["num_nodes"]),
            edges=tuple((int(s), int(d)) for s, d in obj["edges"]),
            directed=bool(obj["directed"]),
            node_features=np.asarray(obj["features"], dtype=np.float64),
            node_labels=obj.get("node_labels"),
            graph_label=obj.get("graph_label"),
            ground_truth_edges=tuple((int(s), int(d)) for s, d in obj.get("ground_truth_edges", [])),
        )
    except KeyError as exc:
        raise ParseError(f"graph object missing field {exc}") from exc


def dataset_to_json_dict(bundle: DatasetBundle) -> dict:
    return {
        "task": bundle.task,
        "num_classes": bundle.num_classes,
        "graphs": [_graph_to_dict(g) for g in bundle.graphs],
        "split": {k: list(map(int, bundle.split.get(k, []))) for k in ("train", "val", "test")},
    }


def save_dataset(bundle: DatasetBundle, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(dataset_to_json_dict(bundle)), encoding="utf-8")


def load_dataset(path, dataset_id: str | None = None) -> DatasetBundle:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path.name}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    try:
        return DatasetBundle(
            id=dataset_id or path.stem,
            task=obj["task"],
            graphs=tuple(_graph_from_dict(g) for g in obj["graphs"]),
            num_classes=int(obj["num_classes"]),
            split={k: list(map(int, obj.get("split", {}).get(k, []))) for k in ("train", "val", "test")},
        )
    except KeyError as exc:
        raise ParseError(f"{path.name}: missing field {exc}") from exc
