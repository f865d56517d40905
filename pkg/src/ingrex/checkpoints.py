"""JSON model checkpoints.

One format for every model kind:
``{"kind", "layer_dims", "activations", "weights", "biases", "meta"}``
with nested row-major arrays. Kind-specific conventions:

- ``gcn``: weights are W^0..W^{L-1} (graph-level models append the readout
  weight, and its bias is the single entry of ``biases``); ``layer_dims``
  is the propagation chain.
- ``self_explainable_gcn``: the base model's arrays as for ``gcn``,
  followed by the mask MLP's weights/biases; the mask architecture lives
  in ``meta["mask_layer_dims"]`` / ``meta["mask_activations"]``.
- ``mlp_surrogate``: plain MLP arrays plus ``meta["fidelity"]`` and
  ``meta["temperature"]``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .gcn import GcnModel, SelfExplainableGcn
from .graphs import GRAPH_TASK
from .distill import SurrogateBundle
from .nn import MlpParams

__all__ = [
    "save_gcn",
    "save_self_explainable",
    "save_surrogate",
    "load_checkpoint",
    "checkpoint_dict",
]

KIND_GCN = "gcn"
KIND_SELF_EXPLAINABLE = "self_explainable_gcn"
KIND_SURROGATE = "mlp_surrogate"


def _gcn_arrays(model: GcnModel):
    weights = [w.tolist() for w in model.layer_weights]
    biases = []
    if model.task == GRAPH_TASK:
        weights.append(model.readout_weight.tolist())
        biases.append(model.readout_bias.tolist())
    dims = [model.input_dim] + [w.shape[1] for w in model.layer_weights]
    activations = ["relu"] * (model.num_layers - 1) + ["identity"]
    return weights, biases, dims, activations


def checkpoint_dict(obj, meta: dict) -> dict:
    """Serializable checkpoint for a GcnModel, SelfExplainableGcn, or
    SurrogateBundle."""
    meta = dict(meta)
    if isinstance(obj, GcnModel):
        weights, biases, dims, acts = _gcn_arrays(obj)
        meta.setdefault("task", obj.task)
        return {"kind": KIND_GCN, "layer_dims": dims, "activations": acts,
                "weights": weights, "biases": biases, "meta": meta}
    if isinstance(obj, SelfExplainableGcn):
        weights, biases, dims, acts = _gcn_arrays(obj.base)
        weights.extend(w.tolist() for w in obj.mask_mlp.weights)
        biases.extend(b.tolist() for b in obj.mask_mlp.biases)
        meta.setdefault("task", obj.base.task)
        meta["mask_layer_dims"] = obj.mask_mlp.layer_dims
        meta["mask_activations"] = list(obj.mask_mlp.activations)
        return {"kind": KIND_SELF_EXPLAINABLE, "layer_dims": dims, "activations": acts,
                "weights": weights, "biases": biases, "meta": meta}
    if isinstance(obj, SurrogateBundle):
        mlp = obj.student
        meta["fidelity"] = obj.fidelity
        meta["temperature"] = obj.temperature
        meta["dataset_id"] = obj.dataset_id
        return {"kind": KIND_SURROGATE, "layer_dims": mlp.layer_dims,
                "activations": list(mlp.activations),
                "weights": [w.tolist() for w in mlp.weights],
                "biases": [b.tolist() for b in mlp.biases], "meta": meta}
    raise ParseError(f"cannot checkpoint object of type {type(obj).__name__}")


def _write(path, payload: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload), encoding="utf-8")


def save_gcn(model: GcnModel, path, meta: dict) -> None:
    _write(path, checkpoint_dict(model, meta))


def save_self_explainable(model: SelfExplainableGcn, path, meta: dict) -> None:
    _write(path, checkpoint_dict(model, meta))


def save_surrogate(bundle: SurrogateBundle, path, meta: dict) -> None:
    _write(path, checkpoint_dict(bundle, meta))


def _gcn_from_arrays(obj: dict) -> GcnModel:
    task = obj["meta"].get("task")
    n_layers = len(obj["layer_dims"]) - 1
    weights = [np.asarray(w, dtype=np.float64) for w in obj["weights"]]
    if task == GRAPH_TASK:
        return GcnModel(
            layer_weights=tuple(weights[:n_layers]),
            task=task,
            readout_weight=weights[n_layers],
            readout_bias=np.asarray(obj["biases"][0], dtype=np.float64),
        )
    return GcnModel(layer_weights=tuple(weights[:n_layers]), task=task)


def load_checkpoint(path):
    """Load any checkpoint; returns the reconstructed model object."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path.name}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    try:
        kind = obj["kind"]
        if kind == KIND_GCN:
            return _gcn_from_arrays(obj)
        if kind == KIND_SELF_EXPLAINABLE:
            base = _gcn_from_arrays(obj)
            n_base = len(obj["layer_dims"]) - 1 + (1 if base.task == GRAPH_TASK else 0)
            n_base_b = 1 if base.task == GRAPH_TASK else 0
            mask_mlp = MlpParams(
                weights=tuple(np.asarray(w, dtype=np.float64) for w in obj["weights"][n_base:]),
                biases=tuple(np.asarray(b, dtype=np.float64) for b in obj["biases"][n_base_b:]),
                activations=tuple(obj["meta"]["mask_activations"]),
            )
            return SelfExplainableGcn(base=base, mask_mlp=mask_mlp)
        if kind == KIND_SURROGATE:
            student = MlpParams(
                weights=tuple(np.asarray(w, dtype=np.float64) for w in obj["weights"]),
                biases=tuple(np.asarray(b, dtype=np.float64) for b in obj["biases"]),
                activations=tuple(obj["activations"]),
            )
            return SurrogateBundle(
                student=student,
                fidelity=float(obj["meta"]["fidelity"]),
                dataset_id=str(obj["meta"].get("dataset_id", "")),
                temperature=float(obj["meta"].get("temperature", 1.0)),
            )
        raise ParseError(f"{path.name}: unknown checkpoint kind {kind!r}")
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ParseError(f"{path.name}: malformed checkpoint ({exc})") from exc
