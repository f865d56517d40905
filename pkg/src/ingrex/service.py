"""REST backend: request parsing, orchestration of the explainers over the
registry, and the 2-D embedding layout for the global view.

Every handler builds its payload through the functions below and
serializes with ``wire.dumps``, so responses are deterministic and
byte-identical to the CLI for the same inputs and seeds. Errors map to
400 (malformed body), 404 (unknown id), 422 (domain precondition), or a
detail-free 500.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

import numpy as np
from fastapi import Depends, FastAPI, Request, Response

from . import wire
from .attribution import kernel_shap, summarize_attributions
from .errors import IncompatibleModel, IngrexError, NotFound, OutOfRange, ParseError
from .gcn import GcnModel, gcn_forward
from .graphs import (
    GRAPH_TASK,
    NODE_TASK,
    DatasetBundle,
    Graph,
    column_normalized_adjacency,
    sym_normalized_adjacency,
)
from .nn import mlp_forward_batch
from .references import attach_reference_explanations, build_index, find_references
from .registry import DATASET, MODEL, Registry
from .structural import RwrConfig, SelectionStrategy, explain_graph, explain_node

__all__ = [
    "LayoutResult",
    "layout_embeddings",
    "Registry",
    "create_app",
    "create_default_app",
    "serve",
    "model_id",
    "dataset_list_payload",
    "graph_view_payload",
    "explain_node_payload",
    "explain_graph_payload",
    "explain_features_payload",
    "features_summary_payload",
    "examples_payload",
    "DEFAULT_N_SAMPLES",
    "DEFAULT_SEED",
    "DEFAULT_EXAMPLE_TOP_K",
]

DEFAULT_N_SAMPLES = 2048
DEFAULT_SEED = 0
DEFAULT_EXAMPLE_TOP_K = 6

ENV_STORAGE_ROOT = "INGREX_STORAGE_ROOT"
ENV_PORT = "INGREX_PORT"
DEFAULT_PORT = 8080


@dataclass(frozen=True)
class LayoutResult:
    """2-D node positions from a principal-component projection."""

    positions: np.ndarray = field(repr=False)
    method: str = "pca_embeddings"


def layout_embeddings(model: GcnModel, graph: Graph) -> LayoutResult:
    """Project final-layer embeddings onto their top-2 principal axes.

    Deterministic sign convention: the first nonzero loading of each
    component is positive. Degenerate (zero-variance) data maps to the
    origin.
    """
    if model.input_dim != graph.feature_dim:
        raise IncompatibleModel("model feature dim does not match graph")
    emb = gcn_forward(model, sym_normalized_adjacency(graph), graph.node_features).final
    centered = emb - emb.mean(axis=0)
    cov = centered.T @ centered / max(len(centered), 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    components = np.zeros((emb.shape[1], 2))
    for c, col in enumerate(order[:2]):
        vec = eigvecs[:, col]
        nonzero = np.flatnonzero(np.abs(vec) > 1e-12)
        if len(nonzero) and vec[nonzero[0]] < 0:
            vec = -vec
        components[:, c] = vec
    return LayoutResult(positions=centered @ components)


def model_id(dataset_id: str, kind: str) -> str:
    return f"{dataset_id}__{kind}"


def _dataset(registry: Registry, dataset_id: str) -> DatasetBundle:
    return registry.load_or_get(DATASET, dataset_id)


def _graph(dataset: DatasetBundle, graph_id: int) -> Graph:
    if not (0 <= graph_id < len(dataset.graphs)):
        raise NotFound(f"graph {graph_id} not found in dataset {dataset.id!r}")
    return dataset.graphs[graph_id]


# ---------------------------------------------------------------------------
# Payload builders (shared by HTTP handlers and the CLI)
# ---------------------------------------------------------------------------

def dataset_list_payload(registry: Registry) -> list:
    out = []
    for ds_id in registry.list_dataset_ids():
        ds = _dataset(registry, ds_id)
        out.append(
            {"id": ds.id, "task": ds.task, "num_classes": ds.num_classes, "num_graphs": ds.num_graphs}
        )
    return out


def graph_view_payload(registry: Registry, dataset_id: str, graph_id: int, layout: str | None) -> dict:
    ds = _dataset(registry, dataset_id)
    graph = _graph(ds, graph_id)
    payload = {
        "dataset_id": ds.id,
        "graph_id": graph_id,
        "task": ds.task,
        "num_classes": ds.num_classes,
        "num_nodes": graph.node_count,
        "directed": graph.directed,
        "edges": [[s, d] for s, d in graph.edges],
        "node_labels": graph.node_labels.tolist() if graph.node_labels is not None else None,
        "graph_label": graph.graph_label,
        "positions": None,
        "predicted_classes": None,
    }
    if layout is not None:
        if layout != "pca":
            raise OutOfRange(f"unknown layout {layout!r}")
        model = registry.load_or_get(MODEL, model_id(dataset_id, "gcn"))
        result = layout_embeddings(model, graph)
        payload["positions"] = [[float(x), float(y)] for x, y in result.positions]
        if model.task == NODE_TASK:
            logits = gcn_forward(model, sym_normalized_adjacency(graph), graph.node_features).logits
            payload["predicted_classes"] = [int(c) for c in np.argmax(logits, axis=1)]
    return payload


def explain_node_payload(
    registry: Registry, dataset_id: str, node_id: int, top_k: int | None, d: float | None
) -> dict:
    ds = _dataset(registry, dataset_id)
    if ds.task != NODE_TASK:
        raise IncompatibleModel("node explanations target node-classification datasets")
    defaults = RwrConfig()
    config = RwrConfig(
        d=defaults.d if d is None else d,
        top_k=defaults.top_k if top_k is None else top_k,
    )
    adjacency = column_normalized_adjacency(ds.graphs[0])
    return wire.node_explanation_payload(explain_node(adjacency, node_id, config))


def explain_graph_payload(
    registry: Registry, dataset_id: str, graph_id: int, strategy_kind: str, value: float
) -> dict:
    ds = _dataset(registry, dataset_id)
    graph = _graph(ds, graph_id)
    model = registry.load_or_get(MODEL, model_id(dataset_id, "self_explainable_gcn"))
    strategy = SelectionStrategy(kind=strategy_kind, value=value)
    return wire.graph_explanation_payload(explain_graph(model, graph, strategy, graph_id=graph_id))


def _surrogate_inputs(registry: Registry, dataset_id: str):
    ds = _dataset(registry, dataset_id)
    if ds.task != NODE_TASK:
        raise IncompatibleModel("feature attribution targets node-classification datasets")
    bundle = registry.load_or_get(MODEL, model_id(dataset_id, "mlp_surrogate"))
    features = ds.graphs[0].node_features
    train_idx = np.asarray(ds.split["train"], dtype=np.int64)
    background = features[train_idx].mean(axis=0) if len(train_idx) else features.mean(axis=0)
    return ds, bundle, features, background


def explain_features_payload(
    registry: Registry, dataset_id: str, node_id: int, n_samples: int, seed: int
) -> dict:
    ds, bundle, features, background = _surrogate_inputs(registry, dataset_id)
    if not (0 <= node_id < features.shape[0]):
        raise OutOfRange(f"node {node_id} outside [0, {features.shape[0]})")
    x = features[node_id]
    explained = int(np.argmax(mlp_forward_batch(bundle.student, x[None, :])[0]))
    att = kernel_shap(bundle, x, background, explained, n_samples, seed)
    return wire.attribution_payload(replace(att, node_id=node_id))


def features_summary_payload(
    registry: Registry, dataset_id: str, sample_ids, n_samples: int, seed: int
) -> dict:
    ds, bundle, _, _ = _surrogate_inputs(registry, dataset_id)
    if sample_ids is None:
        sample_ids = ds.split["test"] or ds.split["train"]
    summary = summarize_attributions(bundle, ds, sample_ids, n_samples, seed)
    return wire.summary_payload(summary)


def examples_payload(
    registry: Registry, dataset_id: str, graph_id: int, strategy_kind: str, value: float
) -> dict:
    ds = _dataset(registry, dataset_id)
    _graph(ds, graph_id)
    teacher = registry.load_or_get(MODEL, model_id(dataset_id, "gcn"))
    explainer = registry.load_or_get(MODEL, model_id(dataset_id, "self_explainable_gcn"))
    index = build_index(teacher, ds)
    refs = find_references(index, graph_id)
    refs = attach_reference_explanations(refs, explainer, ds, SelectionStrategy(strategy_kind, value))
    return wire.reference_set_payload(refs)


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------

class _HttpError(Exception):
    def __init__(self, status: int, error: str, detail: str | None = None):
        self.status = status
        self.error = error
        self.detail = detail


def _error_response(status: int, error: str, detail: str | None = None) -> Response:
    body = {"error": error}
    if detail:
        body["detail"] = detail
    return Response(content=wire.dumps(body), status_code=status, media_type="application/json")


def _ok(payload) -> Response:
    return Response(content=wire.dumps(payload), media_type="application/json")


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise _HttpError(400, "bad_request", "request body is not valid JSON")
    if not isinstance(body, dict):
        raise _HttpError(400, "bad_request", "request body must be a JSON object")
    return body


def _require(body: dict, name: str, kind):
    if name not in body:
        raise _HttpError(400, "bad_request", f"missing required field: {name}")
    return _convert(body, name, kind)


def _optional(body: dict, name: str, kind, default):
    if name not in body or body[name] is None:
        return default
    return _convert(body, name, kind)


def _convert(body: dict, name: str, kind):
    value = body[name]
    if kind in (int, float) and isinstance(value, bool):
        raise _HttpError(400, "bad_request", f"field {name} must be a number")
    if kind is int:
        if not isinstance(value, int):
            raise _HttpError(400, "bad_request", f"field {name} must be an integer")
    elif kind is float:
        if not isinstance(value, (int, float)):
            raise _HttpError(400, "bad_request", f"field {name} must be a number")
        value = float(value)
    elif kind is str:
        if not isinstance(value, str):
            raise _HttpError(400, "bad_request", f"field {name} must be a string")
    elif kind is list:
        if not isinstance(value, list):
            raise _HttpError(400, "bad_request", f"field {name} must be an array")
    return value


def create_app(registry: Registry) -> FastAPI:
    app = FastAPI(title="ingrex", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(_HttpError)
    async def _handle_http_error(_, exc: _HttpError):
        return _error_response(exc.status, exc.error, exc.detail)

    @app.exception_handler(NotFound)
    async def _handle_not_found(_, exc: NotFound):
        return _error_response(404, "not_found")

    @app.exception_handler(ParseError)
    async def _handle_parse_error(_, exc: ParseError):
        # a stored file is corrupt; do not leak paths or parser details
        return _error_response(500, "internal")

    @app.exception_handler(IngrexError)
    async def _handle_domain_error(_, exc: IngrexError):
        return _error_response(422, "unprocessable", str(exc))

    @app.exception_handler(Exception)
    async def _handle_unexpected(_, exc: Exception):
        return _error_response(500, "internal")

    @app.get("/api/health")
    def health():
        return _ok({"status": "ok"})

    @app.get("/api/datasets")
    def datasets():
        return _ok(dataset_list_payload(registry))

    @app.get("/api/datasets/{dataset_id}/graph/{graph_id}")
    def graph_view(dataset_id: str, graph_id: int, layout: str | None = None):
        return _ok(graph_view_payload(registry, dataset_id, graph_id, layout))

    @app.post("/api/explain/node")
    def explain_node_route(body: dict = Depends(_json_body)):
        return _ok(
            explain_node_payload(
                registry,
                _require(body, "dataset_id", str),
                _require(body, "node_id", int),
                _optional(body, "top_k", int, None),
                _optional(body, "d", float, None),
            )
        )

    @app.post("/api/explain/graph")
    def explain_graph_route(body: dict = Depends(_json_body)):
        return _ok(
            explain_graph_payload(
                registry,
                _require(body, "dataset_id", str),
                _require(body, "graph_id", int),
                _require(body, "strategy", str),
                _require(body, "value", float),
            )
        )

    @app.post("/api/explain/features")
    def explain_features_route(body: dict = Depends(_json_body)):
        return _ok(
            explain_features_payload(
                registry,
                _require(body, "dataset_id", str),
                _require(body, "node_id", int),
                _optional(body, "n_samples", int, DEFAULT_N_SAMPLES),
                _optional(body, "seed", int, DEFAULT_SEED),
            )
        )

    @app.post("/api/explain/features/summary")
    def features_summary_route(body: dict = Depends(_json_body)):
        return _ok(
            features_summary_payload(
                registry,
                _require(body, "dataset_id", str),
                _optional(body, "sample_ids", list, None),
                _optional(body, "n_samples", int, DEFAULT_N_SAMPLES),
                _optional(body, "seed", int, DEFAULT_SEED),
            )
        )

    @app.get("/api/examples/{dataset_id}/{graph_id}")
    def examples_route(dataset_id: str, graph_id: int, strategy: str = "top_k", value: float = DEFAULT_EXAMPLE_TOP_K):
        return _ok(examples_payload(registry, dataset_id, graph_id, strategy, value))

    return app


def create_default_app() -> FastAPI:
    root = os.environ.get(ENV_STORAGE_ROOT, "ingrex_data")
    return create_app(Registry(root))


def serve(storage_root, port: int | None = None) -> None:
    import uvicorn

    if port is None:
        port = int(os.environ.get(ENV_PORT, DEFAULT_PORT))
    uvicorn.run(create_app(Registry(storage_root)), host="0.0.0.0", port=port)
