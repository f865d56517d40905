"""GCN forward/training, the per-edge mask MLP, and the self-explainable
model trained jointly against a frozen teacher.

Propagation is ``H^{l+1} = act(A_hat @ H^l @ W^l)`` with relu on hidden
layers and identity on the last; graph-level models add mean pooling plus
a linear readout. The masked variant multiplies every stored entry of the
normalized adjacency (self-loops included) by a gate in (0, 1) produced by
an MLP over the concatenated endpoint embeddings of that entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    IncompatibleModel,
    InvalidConfig,
    MisalignedMask,
)
from .graphs import GRAPH_TASK, NODE_TASK, DatasetBundle, NormalizedAdjacency, sym_normalized_adjacency
from .nn import (
    MlpParams,
    TrainConfig,
    cross_entropy,
    glorot_uniform,
    grad_step,
    init_mlp,
    init_optimizer_state,
    kl_divergence,
    log_softmax_rows,
    mlp_backward,
    mlp_forward_cache,
    softmax_rows,
)
from .sparse import SparseMatrix

__all__ = [
    "GcnModel",
    "EdgeMask",
    "SelfExplainableGcn",
    "GcnForwardResult",
    "gcn_forward",
    "compute_edge_mask",
    "masked_gcn_forward",
    "self_explainable_forward",
    "train_gcn",
    "train_self_explainable",
]

DEFAULT_HIDDEN_DIM = 16
MASK_MLP_HIDDEN = 16


@dataclass(frozen=True)
class GcnModel:
    """Trained GCN. ``layer_weights`` holds W^0..W^{L-1}; hidden layers use
    relu, the final propagation layer is linear. Graph-level models carry a
    mean-pool readout (weight, bias) mapping embeddings to class logits."""

    layer_weights: tuple
    task: str
    readout_weight: np.ndarray | None = None
    readout_bias: np.ndarray | None = None
    norm_mode: str = "symmetric"

    def __post_init__(self):
        if len(self.layer_weights) < 1:
            raise DimensionMismatch("at least one propagation layer required")
        for i in range(1, len(self.layer_weights)):
            if self.layer_weights[i].shape[0] != self.layer_weights[i - 1].shape[1]:
                raise DimensionMismatch(f"layer {i} input dim breaks the chain")
        if self.task == GRAPH_TASK:
            if self.readout_weight is None or self.readout_bias is None:
                raise DimensionMismatch("graph-level models need a readout")
            if self.readout_weight.shape[0] != self.layer_weights[-1].shape[1]:
                raise DimensionMismatch("readout input dim must match final embeddings")
        elif self.task != NODE_TASK:
            raise InvalidConfig(f"unknown task {self.task!r}")

    @property
    def num_layers(self) -> int:
        return len(self.layer_weights)

    @property
    def input_dim(self) -> int:
        return self.layer_weights[0].shape[0]

    @property
    def num_classes(self) -> int:
        if self.task == GRAPH_TASK:
            return self.readout_weight.shape[1]
        return self.layer_weights[-1].shape[1]

    @property
    def embedding_dim(self) -> int:
        """Dimension of H^{L-1}, the layer feeding the edge-mask MLP."""
        return self.layer_weights[-1].shape[0]

    def parameters(self) -> list:
        out = list(self.layer_weights)
        if self.task == GRAPH_TASK:
            out.extend([self.readout_weight, self.readout_bias])
        return out


@dataclass(frozen=True)
class EdgeMask:
    """Per-entry gates aligned with the CSR order of the matrix they gate."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SelfExplainableGcn:
    """Student GCN plus the mask MLP that gates its propagation."""

    base: GcnModel
    mask_mlp: MlpParams

    def __post_init__(self):
        if self.mask_mlp.input_dim != 2 * self.base.embedding_dim:
            raise DimensionMismatch(
                f"mask MLP expects {self.mask_mlp.input_dim} inputs, "
                f"base embeddings give {2 * self.base.embedding_dim}"
            )
        if self.mask_mlp.output_dim != 1:
            raise DimensionMismatch("mask MLP must emit one logit per edge")


@dataclass(frozen=True)
class GcnForwardResult:
    """All layer outputs H^0..H^L plus logits (per node, or pooled)."""

    layers: tuple
    logits: np.ndarray

    @property
    def embeddings(self) -> np.ndarray:
        """H^{L-1}: input to the last propagation layer."""
        return self.layers[-2]

    @property
    def final(self) -> np.ndarray:
        return self.layers[-1]


def _propagate(model: GcnModel, matrix: SparseMatrix, features: np.ndarray) -> tuple:
    h = np.asarray(features, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] != model.input_dim:
        raise DimensionMismatch(f"features must be (n, {model.input_dim})")
    if matrix.n_cols != h.shape[0]:
        raise DimensionMismatch("adjacency size must match node count")
    layers = [h]
    last = model.num_layers - 1
    for l, w in enumerate(model.layer_weights):
        z = matrix.matmat(layers[-1] @ w)
        layers.append(np.maximum(z, 0.0) if l < last else z)
    return tuple(layers)


def _readout(model: GcnModel, final: np.ndarray) -> np.ndarray:
    if model.task == NODE_TASK:
        return final
    pooled = final.mean(axis=0)
    return pooled @ model.readout_weight + model.readout_bias


def gcn_forward(model: GcnModel, norm_adj: NormalizedAdjacency, features: np.ndarray) -> GcnForwardResult:
    """Full forward pass; keeps every H^l for downstream explainers."""
    layers = _propagate(model, norm_adj.matrix, features)
    return GcnForwardResult(layers=layers, logits=_readout(model, layers[-1]))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    """Sigmoid kept strictly inside (0, 1): input clipping stops exp
    overflow at the low end, and the high end saturates to the largest
    double below 1 instead of rounding to exactly 1.0."""
    out = 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))
    return np.minimum(out, np.nextafter(1.0, 0.0))


def compute_edge_mask(mask_mlp: MlpParams, embeddings: np.ndarray, adjacency: SparseMatrix) -> EdgeMask:
    """Gate every stored entry (i, j): sigmoid(MLP([h_i, h_j])), CSR order."""
    embeddings = np.asarray(embeddings, dtype=np.float64)
    if embeddings.shape[0] != adjacency.n_rows:
        raise DimensionMismatch("one embedding row per node required")
    pairs = adjacency.entry_pairs()
    inputs = np.concatenate([embeddings[pairs[:, 0]], embeddings[pairs[:, 1]]], axis=1)
    logits = mlp_forward_cache(mask_mlp, inputs)[0][:, 0]
    return EdgeMask(values=_sigmoid(logits))


def _gated(matrix: SparseMatrix, gates: np.ndarray) -> SparseMatrix:
    """Copy of ``matrix`` with values scaled entry-wise. Skips validation:
    the pattern is already canonical and gates of exactly 0 are legal here."""
    out = object.__new__(SparseMatrix)
    object.__setattr__(out, "n_rows", matrix.n_rows)
    object.__setattr__(out, "n_cols", matrix.n_cols)
    object.__setattr__(out, "row_offsets", matrix.row_offsets)
    object.__setattr__(out, "col_indices", matrix.col_indices)
    object.__setattr__(out, "values", matrix.values * gates)
    return out


def masked_gcn_forward(
    model: SelfExplainableGcn,
    norm_adj: NormalizedAdjacency,
    features: np.ndarray,
    mask: EdgeMask,
) -> GcnForwardResult:
    """Forward pass with every stored adjacency value gated by the mask."""
    matrix = norm_adj.matrix
    if len(mask) != matrix.nnz:
        raise MisalignedMask(f"mask has {len(mask)} entries, adjacency stores {matrix.nnz}")
    masked = _gated(matrix, mask.values)
    layers = _propagate(model.base, masked, features)
    return GcnForwardResult(layers=layers, logits=_readout(model.base, layers[-1]))


def self_explainable_forward(
    model: SelfExplainableGcn, norm_adj: NormalizedAdjacency, features: np.ndarray
) -> tuple:
    """Inference-time pass: derive the mask from the model's own unmasked
    embeddings, then run the gated forward. Returns (mask, result)."""
    unmasked = gcn_forward(model.base, norm_adj, features)
    mask = compute_edge_mask(model.mask_mlp, unmasked.embeddings, norm_adj.matrix)
    return mask, masked_gcn_forward(model, norm_adj, features, mask)


# ---------------------------------------------------------------------------
# Teacher training
# ---------------------------------------------------------------------------

def _accuracy(logits: np.ndarray, labels: np.ndarray, idx) -> float:
    if len(idx) == 0:
        return float("nan")
    return float(np.mean(np.argmax(logits[idx], axis=1) == labels[idx]))


def _init_gcn(dataset: DatasetBundle, hidden_dim: int, num_layers: int, seed: int) -> GcnModel:
    rng = np.random.default_rng(seed)
    feature_dim = dataset.graphs[0].feature_dim
    if dataset.task == NODE_TASK:
        dims = [feature_dim] + [hidden_dim] * (num_layers - 1) + [dataset.num_classes]
        weights = tuple(glorot_uniform(rng, dims[i], dims[i + 1]) for i in range(num_layers))
        return GcnModel(layer_weights=weights, task=NODE_TASK)
    dims = [feature_dim] + [hidden_dim] * num_layers
    weights = tuple(glorot_uniform(rng, dims[i], dims[i + 1]) for i in range(num_layers))
    return GcnModel(
        layer_weights=weights,
        task=GRAPH_TASK,
        readout_weight=glorot_uniform(rng, hidden_dim, dataset.num_classes),
        readout_bias=np.zeros(dataset.num_classes),
    )


def _rebuild(model: GcnModel, params: list) -> GcnModel:
    n = model.num_layers
    return GcnModel(
        layer_weights=tuple(params[:n]),
        task=model.task,
        readout_weight=params[n] if model.task == GRAPH_TASK else None,
        readout_bias=params[n + 1] if model.task == GRAPH_TASK else None,
        norm_mode=model.norm_mode,
    )


def _node_loss_and_grads(model: GcnModel, matrix: SparseMatrix, features, labels, train_idx):
    """Mean cross-entropy over train nodes; returns (loss, grads, logits)."""
    layers = _propagate(model, matrix, features)
    logits = layers[-1]
    log_p = log_softmax_rows(logits[train_idx])
    loss = float(-log_p[np.arange(len(train_idx)), labels[train_idx]].mean())

    d_logits = np.zeros_like(logits)
    p = np.exp(log_p)
    p[np.arange(len(train_idx)), labels[train_idx]] -= 1.0
    d_logits[train_idx] = p / len(train_idx)

    w_grads = [None] * model.num_layers
    delta = d_logits
    for l in range(model.num_layers - 1, -1, -1):
        if l < model.num_layers - 1:
            delta = delta * (layers[l + 1] > 0.0)
        d_y = matrix.rmatmat(delta)  # gradient w.r.t. H^l @ W^l
        w_grads[l] = layers[l].T @ d_y
        delta = d_y @ model.layer_weights[l].T
    return loss, w_grads, logits


def _graph_forward(model: GcnModel, matrix: SparseMatrix, features):
    layers = _propagate(model, matrix, features)
    pooled = layers[-1].mean(axis=0)
    return pooled @ model.readout_weight + model.readout_bias, layers, pooled


def _graph_backward(model: GcnModel, matrix: SparseMatrix, layers, pooled, d_logits):
    """Backprop a graph-level logit gradient.

    Returns (param_grads ordered like ``model.parameters()``, d_values)
    where d_values is the gradient w.r.t. the stored matrix entries.
    """
    n = layers[0].shape[0]
    d_readout_w = np.outer(pooled, d_logits)
    d_readout_b = np.asarray(d_logits, dtype=np.float64).copy()
    delta = np.repeat((d_logits @ model.readout_weight.T)[None, :] / n, n, axis=0)
    w_grads = [None] * model.num_layers
    d_values = np.zeros(matrix.nnz)
    rows, cols = matrix.row_of_entry, matrix.col_indices
    for l in range(model.num_layers - 1, -1, -1):
        if l < model.num_layers - 1:
            delta = delta * (layers[l + 1] > 0.0)
        y = layers[l] @ model.layer_weights[l]  # pre-propagation activations
        d_values += (delta[rows] * y[cols]).sum(axis=1)
        d_y = matrix.rmatmat(delta)
        w_grads[l] = layers[l].T @ d_y
        delta = d_y @ model.layer_weights[l].T
    return w_grads + [d_readout_w, d_readout_b], d_values


def train_gcn(
    dataset: DatasetBundle,
    config: TrainConfig,
    hidden_dim: int = DEFAULT_HIDDEN_DIM,
    num_layers: int = 2,
) -> tuple:
    """Full-batch cross-entropy training on the train split.

    Returns (model, history) where history maps 'train_acc' / 'val_acc' to
    per-epoch series. Deterministic given config.seed.
    """
    if num_layers < 1:
        raise InvalidConfig("num_layers must be >= 1")
    model = _init_gcn(dataset, hidden_dim, num_layers, config.seed)
    params = model.parameters()
    state = init_optimizer_state(params)
    history = {"train_acc": [], "val_acc": []}
    train_idx = np.asarray(dataset.split["train"], dtype=np.int64)
    val_idx = np.asarray(dataset.split["val"], dtype=np.int64)

    if dataset.task == NODE_TASK:
        graph = dataset.graphs[0]
        matrix = sym_normalized_adjacency(graph).matrix
        labels = graph.node_labels
        if labels is None:
            raise InvalidConfig("node classification requires node labels")
        for _ in range(config.epochs):
            _, grads, logits = _node_loss_and_grads(model, matrix, graph.node_features, labels, train_idx)
            params, state = grad_step(params, grads, config, state)
            model = _rebuild(model, params)
            history["train_acc"].append(_accuracy(logits, labels, train_idx))
            history["val_acc"].append(_accuracy(logits, labels, val_idx))
        return model, history

    cached = [(sym_normalized_adjacency(g).matrix, g.node_features) for g in dataset.graphs]
    labels = np.asarray([g.graph_label for g in dataset.graphs], dtype=np.int64)
    train_set = set(int(i) for i in train_idx)
    for _ in range(config.epochs):
        grads = [np.zeros_like(p) for p in params]
        all_logits = np.zeros((len(cached), dataset.num_classes))
        for gi, (matrix, feats) in enumerate(cached):
            logits, layers, pooled = _graph_forward(model, matrix, feats)
            all_logits[gi] = logits
            if gi in train_set:
                p = softmax_rows(logits)
                p[labels[gi]] -= 1.0
                g_grads, _ = _graph_backward(model, matrix, layers, pooled, p / len(train_idx))
                for acc, g in zip(grads, g_grads):
                    acc += g
        params, state = grad_step(params, grads, config, state)
        model = _rebuild(model, params)
        history["train_acc"].append(_accuracy(all_logits, labels, train_idx))
        history["val_acc"].append(_accuracy(all_logits, labels, val_idx))
    return model, history


# ---------------------------------------------------------------------------
# Joint training of the self-explainable student
# ---------------------------------------------------------------------------

def joint_loss(
    model: SelfExplainableGcn,
    norm_adj: NormalizedAdjacency,
    features: np.ndarray,
    mask_inputs: np.ndarray,
    p_teacher: np.ndarray,
    label: int,
    sparsity_weight: float,
) -> float:
    """Distillation + supervision + sparsity objective for one graph.

    KL(teacher || masked student) + CE(masked student, label) +
    sparsity_weight * mean(mask). ``mask_inputs`` are the concatenated
    endpoint embeddings per stored adjacency entry (held fixed: the
    teacher supplies them during training).
    """
    logits_mask = mlp_forward_cache(model.mask_mlp, mask_inputs)[0][:, 0]
    gates = _sigmoid(logits_mask)
    result = masked_gcn_forward(model, norm_adj, features, EdgeMask(values=gates))
    p_s = softmax_rows(result.logits)
    return (
        kl_divergence(p_teacher, p_s)
        + cross_entropy(np.maximum(p_s, 1e-300), label)
        + sparsity_weight * float(gates.mean())
    )


def _joint_grads_one_graph(model, norm_adj, features, mask_inputs, p_teacher, label, sparsity_weight, scale):
    """Gradients of ``joint_loss * scale`` for one graph.

    Returns (student_param_grads, mask_w_grads, mask_b_grads, gates, logits).
    """
    matrix = norm_adj.matrix
    mask_out, mask_layers = mlp_forward_cache(model.mask_mlp, mask_inputs)
    gates = _sigmoid(mask_out[:, 0])
    masked = _gated(matrix, gates)
    logits, layers, pooled = _graph_forward(model.base, masked, features)

    p_s = softmax_rows(logits)
    d_logits = (p_s - p_teacher) + (p_s - _one_hot(label, len(p_s)))
    student_grads, d_values = _graph_backward(model.base, masked, layers, pooled, d_logits * scale)

    # d(loss)/d(gate) via the stored entry values, plus the sparsity term
    d_gates = d_values * matrix.values + scale * sparsity_weight / len(gates)
    d_mask_logit = d_gates * gates * (1.0 - gates)
    mask_w_grads, mask_b_grads, _ = mlp_backward(model.mask_mlp, mask_layers, d_mask_logit[:, None])
    return student_grads, mask_w_grads, mask_b_grads, gates, logits


def _one_hot(label: int, n: int) -> np.ndarray:
    out = np.zeros(n)
    out[label] = 1.0
    return out


def train_self_explainable(
    teacher: GcnModel,
    dataset: DatasetBundle,
    config: TrainConfig,
    sparsity_weight: float,
    mask_hidden_dim: int = MASK_MLP_HIDDEN,
) -> tuple:
    """Jointly train the student GCN and its mask MLP against a frozen
    teacher, minimizing KL + CE + sparsity over the train split.

    The student starts as a copy of the teacher; the mask MLP reads the
    teacher's H^{L-1} embeddings, which stay fixed throughout. Graph-level
    datasets only. Returns (SelfExplainableGcn, history).
    """
    if dataset.task != GRAPH_TASK:
        raise IncompatibleModel("self-explainable training targets graph-level datasets")
    if teacher.task != GRAPH_TASK:
        raise IncompatibleModel("teacher must be a graph-level model")
    if teacher.input_dim != dataset.graphs[0].feature_dim:
        raise DimensionMismatch("teacher feature dim does not match dataset")

    mask_mlp = init_mlp(
        [2 * teacher.embedding_dim, mask_hidden_dim, 1], ["relu", "identity"], seed=config.seed + 1
    )
    model = SelfExplainableGcn(base=teacher, mask_mlp=mask_mlp)

    # per-graph caches: adjacency, teacher distribution, fixed mask inputs
    cached = []
    for g in dataset.graphs:
        norm_adj = sym_normalized_adjacency(g)
        t_result = gcn_forward(teacher, norm_adj, g.node_features)
        pairs = norm_adj.matrix.entry_pairs()
        emb = t_result.embeddings
        mask_inputs = np.concatenate([emb[pairs[:, 0]], emb[pairs[:, 1]]], axis=1)
        p_teacher = softmax_rows(t_result.logits)
        cached.append((norm_adj, g.node_features, mask_inputs, p_teacher, g.graph_label))

    train_idx = [int(i) for i in dataset.split["train"]]
    train_set = set(train_idx)
    labels = np.asarray([g.graph_label for g in dataset.graphs], dtype=np.int64)
    params = list(model.base.parameters()) + list(mask_mlp.weights) + list(mask_mlp.biases)
    n_student = len(model.base.parameters())
    n_mask_w = len(mask_mlp.weights)
    state = init_optimizer_state(params)
    history = {"train_acc": [], "mask_mean": []}
    scale = 1.0 / len(train_idx)

    for _ in range(config.epochs):
        grads = [np.zeros_like(p) for p in params]
        mask_means = []
        all_logits = np.zeros((len(cached), dataset.num_classes))
        for gi in range(len(cached)):
            norm_adj, feats, mask_inputs, p_teacher, label = cached[gi]
            if gi in train_set:
                s_grads, mw_grads, mb_grads, gates, logits = _joint_grads_one_graph(
                    model, norm_adj, feats, mask_inputs, p_teacher, label,
                    sparsity_weight, scale,
                )
                for acc, g in zip(grads[:n_student], s_grads):
                    acc += g
                for acc, g in zip(grads[n_student : n_student + n_mask_w], mw_grads):
                    acc += g
                for acc, g in zip(grads[n_student + n_mask_w :], mb_grads):
                    acc += g
                mask_means.append(float(gates.mean()))
            else:
                gates, result = _mask_and_forward(model, norm_adj, feats, mask_inputs)
                logits = result.logits
            all_logits[gi] = logits
        params, state = grad_step(params, grads, config, state)
        base = _rebuild(model.base, params[:n_student])
        mask_mlp = MlpParams(
            weights=tuple(params[n_student : n_student + n_mask_w]),
            biases=tuple(params[n_student + n_mask_w :]),
            activations=mask_mlp.activations,
        )
        model = SelfExplainableGcn(base=base, mask_mlp=mask_mlp)
        history["train_acc"].append(_accuracy(all_logits, labels, train_idx))
        history["mask_mean"].append(float(np.mean(mask_means)) if mask_means else float("nan"))
    return model, history


def _mask_and_forward(model, norm_adj, features, mask_inputs):
    gates = _sigmoid(mlp_forward_cache(model.mask_mlp, mask_inputs)[0][:, 0])
    return gates, masked_gcn_forward(model, norm_adj, features, EdgeMask(values=gates))
