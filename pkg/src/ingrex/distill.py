"""Distill the teacher GCN into a feature-only MLP surrogate.

The student sees node features alone (never the graph), trained to match
the teacher's tempered output distribution; feature attribution then runs
against this cheap model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DatasetMismatch, IncompatibleModel, InvalidConfig
from .gcn import GcnModel, gcn_forward
from .graphs import NODE_TASK, DatasetBundle, sym_normalized_adjacency
from .nn import (
    MlpParams,
    TrainConfig,
    grad_step,
    init_mlp,
    init_optimizer_state,
    mlp_backward,
    mlp_forward_batch,
    mlp_forward_cache,
    softmax_rows,
)

__all__ = ["SurrogateBundle", "distill_mlp", "fidelity_report", "kd_loss_and_grads"]

STUDENT_HIDDEN = 32
DEFAULT_TEMPERATURE = 2.0


@dataclass(frozen=True)
class SurrogateBundle:
    """Distilled student plus the agreement rate recorded at train time."""

    student: MlpParams
    fidelity: float
    dataset_id: str
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self):
        if not (0.0 <= self.fidelity <= 1.0):
            raise InvalidConfig("fidelity must lie in [0, 1]")


def _teacher_logits(teacher: GcnModel, dataset: DatasetBundle) -> np.ndarray:
    graph = dataset.graphs[0]
    if teacher.input_dim != graph.feature_dim:
        raise IncompatibleModel("teacher feature dim does not match dataset")
    norm_adj = sym_normalized_adjacency(graph)
    return gcn_forward(teacher, norm_adj, graph.node_features).logits


def kd_loss_and_grads(student: MlpParams, x: np.ndarray, p_targets: np.ndarray, temperature: float):
    """Mean tempered KL(targets || student) over a batch, with gradients.

    Returns (loss, weight_grads, bias_grads); the training loop and the
    gradient checks share this path.
    """
    logits, outs = mlp_forward_cache(student, x)
    p_s = softmax_rows(logits / temperature)
    safe = np.maximum(p_s, 1e-12)
    mask = p_targets > 0
    loss = float(np.sum(p_targets[mask] * np.log(p_targets[mask] / safe[mask])) / len(x))
    d_logits = (p_s - p_targets) / temperature / len(x)
    w_grads, b_grads, _ = mlp_backward(student, outs, d_logits)
    return loss, w_grads, b_grads


def distill_mlp(
    teacher: GcnModel,
    dataset: DatasetBundle,
    config: TrainConfig,
    temperature: float = DEFAULT_TEMPERATURE,
) -> SurrogateBundle:
    """Train the surrogate to minimize the mean tempered KL against the
    teacher over the train split; fidelity is the argmax agreement on the
    held-out split (validation, falling back to test, then train)."""
    if temperature <= 0:
        raise InvalidConfig("temperature must be positive")
    if dataset.task != NODE_TASK or teacher.task != NODE_TASK:
        raise IncompatibleModel("distillation targets node-classification models")

    graph = dataset.graphs[0]
    t_logits = _teacher_logits(teacher, dataset)
    p_teacher = softmax_rows(t_logits / temperature)
    features = graph.node_features
    train_idx = np.asarray(dataset.split["train"], dtype=np.int64)

    student = init_mlp(
        [graph.feature_dim, STUDENT_HIDDEN, dataset.num_classes], ["relu", "identity"], seed=config.seed
    )
    params = list(student.weights) + list(student.biases)
    state = init_optimizer_state(params)
    n_w = len(student.weights)
    x_train, p_train = features[train_idx], p_teacher[train_idx]

    for _ in range(config.epochs):
        _, w_grads, b_grads = kd_loss_and_grads(student, x_train, p_train, temperature)
        params, state = grad_step(params, w_grads + b_grads, config, state)
        student = MlpParams(
            weights=tuple(params[:n_w]), biases=tuple(params[n_w:]), activations=student.activations
        )

    held_out = next(
        (np.asarray(dataset.split[name], dtype=np.int64) for name in ("val", "test", "train") if dataset.split[name]),
    )
    s_pred = np.argmax(mlp_forward_batch(student, features[held_out]), axis=1)
    t_pred = np.argmax(t_logits[held_out], axis=1)
    return SurrogateBundle(
        student=student,
        fidelity=float(np.mean(s_pred == t_pred)),
        dataset_id=dataset.id,
        temperature=temperature,
    )


def fidelity_report(bundle: SurrogateBundle, teacher: GcnModel, dataset: DatasetBundle) -> dict:
    """Per-split argmax agreement between surrogate and teacher."""
    if bundle.dataset_id != dataset.id:
        raise DatasetMismatch(f"surrogate was distilled on {bundle.dataset_id!r}, not {dataset.id!r}")
    if bundle.student.input_dim != dataset.graphs[0].feature_dim:
        raise DatasetMismatch("surrogate feature dim does not match dataset")
    t_pred = np.argmax(_teacher_logits(teacher, dataset), axis=1)
    s_pred = np.argmax(mlp_forward_batch(bundle.student, dataset.graphs[0].node_features), axis=1)
    report = {}
    for name in ("train", "val", "test"):
        idx = np.asarray(dataset.split[name], dtype=np.int64)
        report[name] = float(np.mean(s_pred[idx] == t_pred[idx])) if len(idx) else float("nan")
    return report
