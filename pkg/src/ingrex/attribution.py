"""Shapley feature attributions on the distilled surrogate.

Missing features are simulated by substituting the background vector
(single reference). ``exact_shapley`` enumerates all coalitions and is the
oracle; ``kernel_shap`` solves the constrained weighted regression over
kernel-weighted coalitions, enumerating them exhaustively whenever the
sample budget covers every subset, so both satisfy the efficiency axiom:
base_value + sum(phi) = f(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySample,
    InvalidParams,
    TooFewSamples,
    TooManyFeatures,
)
from .graphs import NODE_TASK, DatasetBundle
from .nn import MlpParams, mlp_forward_batch, softmax_rows

__all__ = [
    "FeatureAttribution",
    "AttributionSummary",
    "exact_shapley",
    "kernel_shap",
    "summarize_attributions",
]

EXACT_FEATURE_LIMIT = 16


@dataclass(frozen=True)
class FeatureAttribution:
    node_id: int
    explained_class: int
    phi: np.ndarray = field(repr=False)
    base_value: float = 0.0
    method: str = "kernel"


@dataclass(frozen=True)
class AttributionSummary:
    mean_abs_phi: np.ndarray = field(repr=False)
    feature_ranking: tuple = ()
    sample_ids: tuple = ()


def _student(surrogate) -> MlpParams:
    return surrogate.student if hasattr(surrogate, "student") else surrogate


def _value_function(surrogate, explained_class: int, link: str):
    student = _student(surrogate)
    if not (0 <= explained_class < student.output_dim):
        raise DimensionMismatch(f"class {explained_class} outside {student.output_dim} outputs")
    if link == "probability":
        return lambda xs: softmax_rows(mlp_forward_batch(student, xs))[:, explained_class]
    if link == "logit":
        return lambda xs: mlp_forward_batch(student, xs)[:, explained_class]
    raise InvalidParams(f"unknown link {link!r}")


def _masked_inputs(masks: np.ndarray, x: np.ndarray, background: np.ndarray) -> np.ndarray:
    """Row per coalition: x where the mask bit is set, background elsewhere."""
    return np.where(masks, x, background)


def _popcounts(values: np.ndarray, bits: int) -> np.ndarray:
    out = np.zeros_like(values)
    for b in range(bits):
        out += (values >> b) & 1
    return out


def exact_shapley(surrogate, x, background, explained_class: int, link: str = "probability") -> FeatureAttribution:
    """Brute-force Shapley values by full coalition enumeration (<= 16
    features): phi_i = sum over S not containing i of
    |S|! (d-|S|-1)! / d! * (f(S+i) - f(S))."""
    x = np.asarray(x, dtype=np.float64)
    background = np.asarray(background, dtype=np.float64)
    if x.shape != background.shape or x.ndim != 1:
        raise DimensionMismatch("x and background must be equal-length vectors")
    d = len(x)
    if d > EXACT_FEATURE_LIMIT:
        raise TooManyFeatures(f"{d} features exceed the 2^{EXACT_FEATURE_LIMIT} enumeration budget")
    f = _value_function(surrogate, explained_class, link)

    codes = np.arange(2**d, dtype=np.int64)
    masks = (codes[:, None] >> np.arange(d)) & 1
    values = f(_masked_inputs(masks.astype(bool), x, background))
    sizes = _popcounts(codes, d)

    # weight of a coalition of size s when adding one feature
    weights = np.array([_shapley_weight(s, d) for s in range(d)], dtype=np.float64)
    phi = np.zeros(d)
    for i in range(d):
        without = (codes >> i) & 1 == 0
        s_codes = codes[without]
        gains = values[s_codes | (1 << i)] - values[s_codes]
        phi[i] = float(np.sum(weights[sizes[s_codes]] * gains))
    return FeatureAttribution(
        node_id=-1,
        explained_class=explained_class,
        phi=phi,
        base_value=float(values[0]),
        method="exact",
    )


def _shapley_weight(s: int, d: int) -> float:
    """|S|! (d-|S|-1)! / d! for |S| = s."""
    out = 1.0 / d
    for k in range(1, s + 1):
        out *= k / (d - k)
    return out


def _kernel_weight(s: int, d: int) -> float:
    """Shapley kernel weight of one coalition of size s (0 < s < d)."""
    return (d - 1) / (comb(d, s) * s * (d - s))


def _sample_coalitions(d: int, n_samples: int, rng: np.random.Generator) -> dict:
    """Coalition bitmask -> accumulated kernel weight.

    Complete subset sizes are enumerated (small and large sizes paired)
    while the budget allows; any leftover budget is filled by weighted
    random draws, so a budget of 2^d or more yields the full enumeration.
    """
    weights: dict = {}
    budget = n_samples
    sizes = list(range(1, d))
    remaining = []
    for s in sorted(set(min(s, d - s) for s in sizes)):
        pair = [s] if s == d - s else [s, d - s]
        count = sum(comb(d, t) for t in pair)
        if count <= budget:
            for t in pair:
                for code in _all_masks_of_size(d, t):
                    weights[code] = weights.get(code, 0.0) + _kernel_weight(t, d)
            budget -= count
        else:
            remaining.extend(pair)
    if remaining and budget > 0:
        size_w = np.array([_kernel_weight(t, d) * comb(d, t) for t in remaining])
        size_w = size_w / size_w.sum()
        draws = rng.choice(len(remaining), size=budget, p=size_w)
        for k in draws:
            t = remaining[k]
            members = rng.choice(d, size=t, replace=False)
            code = int(np.sum(1 << members.astype(np.int64)))
            weights[code] = weights.get(code, 0.0) + _kernel_weight(t, d)
    return weights


def _all_masks_of_size(d: int, s: int):
    from itertools import combinations

    for members in combinations(range(d), s):
        yield sum(1 << m for m in members)


def kernel_shap(
    surrogate,
    x,
    background,
    explained_class: int,
    n_samples: int,
    seed: int,
    link: str = "probability",
) -> FeatureAttribution:
    """Kernel-weighted least squares over sampled coalitions, constrained
    so the attributions sum to f(x) - f(background); the empty and full
    coalitions enter as hard constraints, not regression rows."""
    x = np.asarray(x, dtype=np.float64)
    background = np.asarray(background, dtype=np.float64)
    if x.shape != background.shape or x.ndim != 1:
        raise DimensionMismatch("x and background must be equal-length vectors")
    d = len(x)
    if n_samples < 2 * d:
        raise TooFewSamples(f"need at least {2 * d} samples for {d} features")
    f = _value_function(surrogate, explained_class, link)
    fx = float(f(x[None, :])[0])
    base = float(f(background[None, :])[0])

    if d == 1:
        return FeatureAttribution(-1, explained_class, np.array([fx - base]), base, "kernel")

    rng = np.random.default_rng(seed)
    coalitions = _sample_coalitions(d, n_samples, rng)
    codes = np.array(sorted(coalitions), dtype=np.int64)
    w = np.array([coalitions[c] for c in codes], dtype=np.float64)
    z = ((codes[:, None] >> np.arange(d)) & 1).astype(np.float64)
    y = f(_masked_inputs(z.astype(bool), x, background)) - base

    # eliminate the last coefficient through the efficiency constraint
    z_head = z[:, :-1] - z[:, -1:]
    y_adj = y - z[:, -1] * (fx - base)
    sw = np.sqrt(w)
    phi_head, *_ = np.linalg.lstsq(z_head * sw[:, None], y_adj * sw, rcond=None)
    phi = np.append(phi_head, (fx - base) - phi_head.sum())
    return FeatureAttribution(-1, explained_class, phi, base, "kernel")


def summarize_attributions(
    surrogate,
    dataset: DatasetBundle,
    sample_ids,
    n_samples: int,
    seed: int,
) -> AttributionSummary:
    """Kernel SHAP per sample against the train-split feature mean, then
    mean |phi| per feature; sample at position j uses seed + j."""
    sample_ids = [int(i) for i in sample_ids]
    if not sample_ids:
        raise EmptySample("at least one sample id required")
    if dataset.task != NODE_TASK:
        raise InvalidParams("feature attribution summaries target node datasets")
    features = dataset.graphs[0].node_features
    n = features.shape[0]
    for i in sample_ids:
        if not (0 <= i < n):
            raise InvalidParams(f"sample id {i} outside [0, {n})")
    train_idx = np.asarray(dataset.split["train"], dtype=np.int64)
    background = features[train_idx].mean(axis=0) if len(train_idx) else features.mean(axis=0)

    student = _student(surrogate)
    abs_sum = np.zeros(features.shape[1])
    for j, node_id in enumerate(sample_ids):
        x = features[node_id]
        explained = int(np.argmax(mlp_forward_batch(student, x[None, :])[0]))
        att = kernel_shap(surrogate, x, background, explained, n_samples, seed + j)
        abs_sum += np.abs(att.phi)
    mean_abs = abs_sum / len(sample_ids)
    ranking = np.lexsort((np.arange(len(mean_abs)), -mean_abs))
    return AttributionSummary(
        mean_abs_phi=mean_abs,
        feature_ranking=tuple(int(r) for r in ranking),
        sample_ids=tuple(sample_ids),
    )
