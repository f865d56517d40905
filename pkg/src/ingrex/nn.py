"""Dense neural-net primitives: MLPs with hand-written reverse-mode
gradients, stabilized softmax, classification losses, and SGD/Adam steps.

Models here are tiny and fixed-shape, so gradients are coded per layer
instead of through a general autodiff engine. Parameters are plain float64
arrays; optimizer steps are functional (new arrays, no mutation) so
trained models can be shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatch, InvalidConfig, ShapeMismatch

__all__ = [
    "MlpParams",
    "TrainConfig",
    "OptimizerState",
    "init_mlp",
    "mlp_forward",
    "mlp_forward_batch",
    "softmax",
    "softmax_rows",
    "log_softmax_rows",
    "cross_entropy",
    "kl_divergence",
    "init_optimizer_state",
    "grad_step",
]

KL_FLOOR = 1e-12
ACTIVATIONS = ("relu", "sigmoid", "identity")


@dataclass(frozen=True)
class MlpParams:
    """Stacked affine layers. ``weights[i]`` is (fan_in, fan_out); layer i
    applies ``act(x @ W + b)`` with ``activations[i]``."""

    weights: tuple
    biases: tuple
    activations: tuple

    def __post_init__(self):
        if not (len(self.weights) == len(self.biases) == len(self.activations)):
            raise DimensionMismatch("weights, biases, activations must align")
        for act in self.activations:
            if act not in ACTIVATIONS:
                raise InvalidConfig(f"unknown activation {act!r}")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise DimensionMismatch(f"layer {i}: bias must match weight columns")
            if i and w.shape[0] != self.weights[i - 1].shape[1]:
                raise DimensionMismatch(f"layer {i}: input dim breaks the chain")

    @property
    def layer_dims(self) -> list:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def output_dim(self) -> int:
        return self.weights[-1].shape[1]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    seed: int = 0
    optimizer: str = "adam"
    weight_decay: float = 0.0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise InvalidConfig("learning_rate must be positive")
        if self.epochs < 1:
            raise InvalidConfig("epochs must be >= 1")
        if self.optimizer not in ("sgd", "adam"):
            raise InvalidConfig(f"unknown optimizer {self.optimizer!r}")


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    s = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-s, s, size=(fan_in, fan_out))


def init_mlp(dims, activations, seed: int) -> MlpParams:
    """Glorot-uniform weights, zero biases, seeded."""
    if len(activations) != len(dims) - 1:
        raise DimensionMismatch("one activation per layer required")
    rng = np.random.default_rng(seed)
    weights = tuple(glorot_uniform(rng, dims[i], dims[i + 1]) for i in range(len(dims) - 1))
    biases = tuple(np.zeros(dims[i + 1]) for i in range(len(dims) - 1))
    return MlpParams(weights=weights, biases=biases, activations=tuple(activations))


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    return z


def _activate_grad(out: np.ndarray, kind: str) -> np.ndarray:
    """Derivative expressed through the activation output."""
    if kind == "relu":
        return (out > 0.0).astype(np.float64)
    if kind == "sigmoid":
        return out * (1.0 - out)
    return np.ones_like(out)


def mlp_forward_batch(params: MlpParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != params.input_dim:
        raise DimensionMismatch(f"expected {params.input_dim} inputs, got {x.shape[-1]}")
    h = x
    for w, b, act in zip(params.weights, params.biases, params.activations):
        h = _activate(h @ w + b, act)
    return h


def mlp_forward(params: MlpParams, x: np.ndarray) -> np.ndarray:
    """Evaluate the MLP on a single input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("mlp_forward takes a single vector; use mlp_forward_batch")
    return mlp_forward_batch(params, x[None, :])[0]


def mlp_forward_cache(params: MlpParams, x: np.ndarray):
    """Batched forward keeping per-layer outputs for backprop."""
    outs = [np.asarray(x, dtype=np.float64)]
    for w, b, act in zip(params.weights, params.biases, params.activations):
        outs.append(_activate(outs[-1] @ w + b, act))
    return outs[-1], outs


def mlp_backward(params: MlpParams, outs, d_out: np.ndarray):
    """Gradients of a scalar loss given d(loss)/d(output).

    Returns (weight_grads, bias_grads, d_input), all matching shapes.
    """
    w_grads = [None] * len(params.weights)
    b_grads = [None] * len(params.biases)
    delta = np.asarray(d_out, dtype=np.float64)
    for i in range(len(params.weights) - 1, -1, -1):
        delta = delta * _activate_grad(outs[i + 1], params.activations[i])
        w_grads[i] = outs[i].T @ delta
        b_grads[i] = delta.sum(axis=0)
        delta = delta @ params.weights[i].T
    return w_grads, b_grads, delta


def softmax(z: np.ndarray) -> np.ndarray:
    """Stable softmax of a vector (max-subtraction)."""
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(z - z.max())
    return e / e.sum()


def softmax_rows(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax_rows(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    shifted = z - z.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def cross_entropy(probs: np.ndarray, label: int) -> float:
    """-ln p[label] for one probability vector."""
    probs = np.asarray(probs, dtype=np.float64)
    if not (0 <= label < probs.shape[-1]):
        raise DimensionMismatch(f"label {label} outside distribution of size {probs.shape[-1]}")
    return float(-np.log(probs[label]))


def kl_divergence(p_teacher: np.ndarray, p_student: np.ndarray) -> float:
    """KL(p_teacher || p_student) with the student floored at 1e-12."""
    p_t = np.asarray(p_teacher, dtype=np.float64)
    p_s = np.asarray(p_student, dtype=np.float64)
    if p_t.shape != p_s.shape:
        raise DimensionMismatch("distributions must have equal length")
    p_s = np.maximum(p_s, KL_FLOOR)
    mask = p_t > 0
    return float(np.sum(p_t[mask] * np.log(p_t[mask] / p_s[mask])))


@dataclass(frozen=True)
class OptimizerState:
    """Adam moment estimates; carried (but unused) by SGD for a uniform API."""

    m: tuple
    v: tuple
    t: int = 0


def init_optimizer_state(params) -> OptimizerState:
    return OptimizerState(
        m=tuple(np.zeros_like(p) for p in params),
        v=tuple(np.zeros_like(p) for p in params),
        t=0,
    )


ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def grad_step(params, grads, config: TrainConfig, state: OptimizerState):
    """One optimizer step over a flat list of parameter arrays.

    Returns (new_params, new_state); inputs are left untouched.
    """
    if len(params) != len(grads):
        raise ShapeMismatch("one gradient per parameter required")
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ShapeMismatch(f"gradient shape {g.shape} != parameter shape {p.shape}")
    lr = config.learning_rate
    if config.weight_decay:
        grads = [g + config.weight_decay * p for p, g in zip(params, grads)]
    if config.optimizer == "sgd":
        return [p - lr * g for p, g in zip(params, grads)], state

    t = state.t + 1
    new_m, new_v, new_p = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m = ADAM_BETA1 * m + (1 - ADAM_BETA1) * g
        v = ADAM_BETA2 * v + (1 - ADAM_BETA2) * g * g
        m_hat = m / (1 - ADAM_BETA1**t)
        v_hat = v / (1 - ADAM_BETA2**t)
        new_p.append(p - lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS))
        new_m.append(m)
        new_v.append(v)
    return new_p, replace(state, m=tuple(new_m), v=tuple(new_v), t=t)
