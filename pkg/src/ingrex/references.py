"""Example-based explanations: exact nearest-neighbor retrieval of one
same-class and one different-class reference graph.

Search is an exhaustive L2 scan (desk-scale datasets; bit-reproducible).
Retrieval returns ids and distances; the caller attaches each reference's
own structural explanation (``attach_reference_explanations``) so pure
retrieval stays testable without trained models.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    IncompatibleModel,
    InvalidParams,
    NoDiffClassItem,
    NoSameClassItem,
    OutOfRange,
)
from .gcn import GcnModel, SelfExplainableGcn, gcn_forward
from .graphs import GRAPH_TASK, DatasetBundle, sym_normalized_adjacency
from .structural import GraphExplanation, SelectionStrategy, explain_graph

__all__ = [
    "EmbeddingIndex",
    "Reference",
    "ReferenceSet",
    "build_index",
    "find_references",
    "attach_reference_explanations",
]


@dataclass(frozen=True)
class EmbeddingIndex:
    """One embedding row, predicted label, and id per indexed item."""

    vectors: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    item_ids: tuple = ()

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "labels", labels)
        if not (vectors.shape[0] == labels.shape[0] == len(self.item_ids)):
            raise OutOfRange("vectors, labels, and ids must align")
        if not np.all(np.isfinite(vectors)):
            raise OutOfRange("embeddings must be finite")

    def __len__(self) -> int:
        return len(self.item_ids)


@dataclass(frozen=True)
class Reference:
    item_id: int
    distance: float
    explanation: GraphExplanation | None = None


@dataclass(frozen=True)
class ReferenceSet:
    query_id: int
    same_class_ref: Reference
    diff_class_ref: Reference


def build_index(model: GcnModel, dataset: DatasetBundle) -> EmbeddingIndex:
    """Embed every graph by mean-pooling its final-layer node embeddings;
    labels are the model's predicted classes."""
    if dataset.task != GRAPH_TASK or model.task != GRAPH_TASK:
        raise IncompatibleModel("reference retrieval indexes graph-classification datasets")
    if model.input_dim != dataset.graphs[0].feature_dim:
        raise IncompatibleModel("model feature dim does not match dataset")
    vectors, labels = [], []
    for g in dataset.graphs:
        result = gcn_forward(model, sym_normalized_adjacency(g), g.node_features)
        vectors.append(result.final.mean(axis=0))
        labels.append(int(np.argmax(result.logits)))
    return EmbeddingIndex(
        vectors=np.stack(vectors),
        labels=np.asarray(labels),
        item_ids=tuple(range(len(dataset.graphs))),
    )


def _nearest(index: EmbeddingIndex, query_pos: int, candidates: np.ndarray) -> Reference:
    diffs = index.vectors[candidates] - index.vectors[query_pos]
    dists = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
    ids = np.asarray([index.item_ids[c] for c in candidates])
    best = np.lexsort((ids, dists))[0]
    return Reference(item_id=int(ids[best]), distance=float(dists[best]))


def find_references(index: EmbeddingIndex, query_id: int, metric: str = "l2") -> ReferenceSet:
    """Nearest same-class and different-class items to the query, by exact
    Euclidean scan; ties break toward the smaller item id."""
    if metric != "l2":
        raise InvalidParams(f"unsupported metric {metric!r}")
    id_to_pos = {item: pos for pos, item in enumerate(index.item_ids)}
    if query_id not in id_to_pos:
        raise OutOfRange(f"unknown item id {query_id}")
    pos = id_to_pos[query_id]
    label = index.labels[pos]
    others = np.asarray([p for p in range(len(index)) if p != pos], dtype=np.int64)
    same = others[index.labels[others] == label]
    diff = others[index.labels[others] != label]
    if len(same) == 0:
        raise NoSameClassItem(f"no other item shares class {int(label)}")
    if len(diff) == 0:
        raise NoDiffClassItem("every other item shares the query's class")
    return ReferenceSet(
        query_id=query_id,
        same_class_ref=_nearest(index, pos, same),
        diff_class_ref=_nearest(index, pos, diff),
    )


def attach_reference_explanations(
    refs: ReferenceSet,
    model: SelfExplainableGcn,
    dataset: DatasetBundle,
    strategy: SelectionStrategy,
) -> ReferenceSet:
    """Fill each reference with its own edge-mask explanation."""

    def explain(ref: Reference) -> Reference:
        graph = dataset.graphs[ref.item_id]
        return replace(ref, explanation=explain_graph(model, graph, strategy, graph_id=ref.item_id))

    return ReferenceSet(
        query_id=refs.query_id,
        same_class_ref=explain(refs.same_class_ref),
        diff_class_ref=explain(refs.diff_class_ref),
    )
