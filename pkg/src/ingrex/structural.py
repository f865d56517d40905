"""Structural explanations.

Node-level: random walk with restart over the column-normalized adjacency
scores how much probability mass each node feeds toward the query node;
the top-k nodes induce the explanation subgraph and each stored edge
(j -> i) carries the inflow contribution A_hat[i, j] * r_j, normalized so
the contributions entering the target sum to 1.

Graph-level: the self-explainable model's edge mask is averaged over the
two directions of every undirected edge and thresholded or top-k selected.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDistribution, IncompatibleModel, InvalidParams, TargetOutOfRange
from .gcn import SelfExplainableGcn, self_explainable_forward
from .graphs import GRAPH_TASK, Graph, NormalizedAdjacency, sym_normalized_adjacency
from .nn import softmax

__all__ = [
    "RwrConfig",
    "RwrResult",
    "NodeExplanation",
    "GraphExplanation",
    "SelectionStrategy",
    "rwr",
    "explain_node",
    "explain_graph",
]


@dataclass(frozen=True)
class RwrConfig:
    """Walk parameters. ``d`` is the keep-going probability: the chance of
    following an edge instead of restarting at the query node."""

    d: float = 0.85
    max_iters: int = 1000
    tolerance: float = 1e-9
    top_k: int = 10

    def __post_init__(self):
        if not (0.0 <= self.d < 1.0):
            raise InvalidParams("d must lie in [0, 1)")
        if self.tolerance <= 0:
            raise InvalidParams("tolerance must be positive")
        if self.max_iters < 1 or self.top_k < 1:
            raise InvalidParams("max_iters and top_k must be >= 1")


@dataclass(frozen=True)
class RwrResult:
    scores: np.ndarray = field(repr=False)
    iterations_used: int = 0
    residual: float = 0.0
    converged: bool = True
    trace: tuple | None = None  # per-iteration distributions when recorded


def rwr(adj: NormalizedAdjacency, r0: np.ndarray, config: RwrConfig, record_trace: bool = False) -> RwrResult:
    """Iterate r <- (1-d) r0 + d A_hat r until the L1 step falls below the
    tolerance. Hitting max_iters is a soft failure: the result is returned
    with ``converged`` false."""
    if adj.mode != "column_normalized":
        raise BadDistribution("random walk needs the column-normalized adjacency")
    r0 = np.asarray(r0, dtype=np.float64)
    matrix = adj.matrix
    if r0.shape != (matrix.n_cols,):
        raise BadDistribution("r0 length must match node count")
    if np.any(r0 < 0) or abs(r0.sum() - 1.0) > 1e-9:
        raise BadDistribution("r0 must be a probability distribution")

    r = r0.copy()
    trace = [r.copy()] if record_trace else None
    residual = float("inf")
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        r_next = (1.0 - config.d) * r0 + config.d * matrix.matvec(r)
        residual = float(np.abs(r_next - r).sum())
        r = r_next
        if record_trace:
            trace.append(r.copy())
        if residual <= config.tolerance:
            return RwrResult(r, iterations, residual, True, tuple(trace) if record_trace else None)
    return RwrResult(r, iterations, residual, False, tuple(trace) if record_trace else None)


@dataclass(frozen=True)
class NodeExplanation:
    """Explanation subgraph for one node prediction."""

    target: int
    subgraph_nodes: tuple  # score-descending, target always present
    subgraph_edges: tuple  # (src, dst, contribution)
    node_scores: dict
    hop_levels: dict  # hop distance from target; -1 if unreachable
    converged: bool
    iterations_used: int


def _hop_levels(matrix, nodes: set, target: int) -> dict:
    """Undirected BFS distance from the target over the stored pattern."""
    neighbors = {v: set() for v in nodes}
    pairs = matrix.entry_pairs()
    for i, j in pairs:
        if i != j and int(i) in nodes and int(j) in nodes:
            neighbors[int(i)].add(int(j))
            neighbors[int(j)].add(int(i))
    hops = {v: -1 for v in nodes}
    hops[target] = 0
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in neighbors[u]:
            if hops[v] < 0:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops


def explain_node(model_adjacency: NormalizedAdjacency, target: int, config: RwrConfig) -> NodeExplanation:
    """Run RWR from ``target`` and induce the top-k subgraph.

    Ties in the top-k ranking break toward the smaller node id; ``top_k``
    beyond the node count returns the whole graph. Self-loop entries are
    kept out of the edge list (they include the dangling-node artifacts of
    the normalization, which are not input edges).
    """
    matrix = model_adjacency.matrix
    n = matrix.n_rows
    if not (0 <= target < n):
        raise TargetOutOfRange(f"target {target} outside [0, {n})")
    r0 = np.zeros(n)
    r0[target] = 1.0
    result = rwr(model_adjacency, r0, config)
    scores = result.scores

    order = np.lexsort((np.arange(n), -scores))
    k = min(config.top_k, n)
    selected = list(order[:k])
    if target not in selected:
        selected[-1] = target
        selected.sort(key=lambda v: (-scores[v], v))
    chosen = set(int(v) for v in selected)

    pairs = matrix.entry_pairs()
    edges = []
    target_inflow = 0.0
    for e, (i, j) in enumerate(pairs):
        i, j = int(i), int(j)
        if i == j or i not in chosen or j not in chosen:
            continue
        contribution = matrix.values[e] * scores[j]
        edges.append([j, i, contribution])  # stored (i, j) is the edge j -> i
        if i == target:
            target_inflow += contribution
    if target_inflow > 0.0:
        for edge in edges:
            edge[2] /= target_inflow
    edges.sort(key=lambda t: (t[0], t[1]))

    return NodeExplanation(
        target=target,
        subgraph_nodes=tuple(int(v) for v in selected),
        subgraph_edges=tuple((s, d, float(c)) for s, d, c in edges),
        node_scores={int(v): float(scores[v]) for v in selected},
        hop_levels=_hop_levels(matrix, chosen, target),
        converged=result.converged,
        iterations_used=result.iterations_used,
    )


@dataclass(frozen=True)
class SelectionStrategy:
    """Edge selection rule: the k best-scored edges, or everything whose
    score strictly exceeds a threshold."""

    kind: str  # "top_k" | "threshold"
    value: float

    def __post_init__(self):
        if self.kind not in ("top_k", "threshold"):
            raise InvalidParams(f"unknown selection strategy {self.kind!r}")
        if self.kind == "top_k" and (self.value < 1 or self.value != int(self.value)):
            raise InvalidParams("top_k must be a positive integer")


@dataclass(frozen=True)
class GraphExplanation:
    """Edge-mask explanation of one graph-level prediction."""

    graph_id: int
    edges: tuple  # undirected (src, dst), src < dst, ascending
    edge_scores: tuple  # aligned with edges
    selected_edges: tuple
    strategy: SelectionStrategy
    predicted_class: int
    class_probs: tuple


def explain_graph(
    model: SelfExplainableGcn,
    graph: Graph,
    strategy: SelectionStrategy,
    graph_id: int = 0,
) -> GraphExplanation:
    """Score every undirected edge by its averaged directed mask values and
    select per the strategy; the prediction comes from the masked pass."""
    if model.base.task != GRAPH_TASK:
        raise IncompatibleModel("graph explanations need a graph-level model")
    if model.base.input_dim != graph.feature_dim:
        raise IncompatibleModel(
            f"model expects {model.base.input_dim} features, graph has {graph.feature_dim}"
        )
    norm_adj = sym_normalized_adjacency(graph)
    mask, result = self_explainable_forward(model, norm_adj, graph.node_features)

    value_at = {}
    for (i, j), v in zip(map(tuple, norm_adj.matrix.entry_pairs()), mask.values):
        value_at[(int(i), int(j))] = float(v)
    edges = sorted(graph.undirected_edge_set())
    scores = tuple(
        value_at[(a, b)] if a == b else (value_at[(a, b)] + value_at[(b, a)]) / 2.0
        for a, b in edges
    )

    if strategy.kind == "top_k":
        k = min(int(strategy.value), len(edges))
        ranked = sorted(range(len(edges)), key=lambda e: (-scores[e], edges[e]))
        selected = tuple(sorted(edges[e] for e in ranked[:k]))
    else:
        selected = tuple(e for e, s in zip(edges, scores) if s > strategy.value)

    probs = softmax(result.logits)
    return GraphExplanation(
        graph_id=graph_id,
        edges=tuple(edges),
        edge_scores=scores,
        selected_edges=selected,
        strategy=strategy,
        predicted_class=int(np.argmax(result.logits)),
        class_probs=tuple(float(p) for p in probs),
    )
