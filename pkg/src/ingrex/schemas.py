"""Published JSON schemas for every wire format the service emits.

Responses are validated against these in the test suite; clients may rely
on them.
"""

from __future__ import annotations

__all__ = [
    "NODE_EXPLANATION_SCHEMA",
    "GRAPH_EXPLANATION_SCHEMA",
    "FEATURE_ATTRIBUTION_SCHEMA",
    "ATTRIBUTION_SUMMARY_SCHEMA",
    "REFERENCE_SET_SCHEMA",
    "DATASET_LIST_SCHEMA",
    "GRAPH_VIEW_SCHEMA",
    "HEALTH_SCHEMA",
    "ERROR_SCHEMA",
]

_NONNEG_INT = {"type": "integer", "minimum": 0}

NODE_EXPLANATION_SCHEMA = {
    "type": "object",
    "required": ["target", "nodes", "edges", "converged"],
    "additionalProperties": False,
    "properties": {
        "target": _NONNEG_INT,
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "score", "hop"],
                "additionalProperties": False,
                "properties": {
                    "id": _NONNEG_INT,
                    "score": {"type": "number", "minimum": 0},
                    "hop": {"type": "integer", "minimum": -1},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst", "contribution"],
                "additionalProperties": False,
                "properties": {
                    "src": _NONNEG_INT,
                    "dst": _NONNEG_INT,
                    "contribution": {"type": "number", "minimum": 0},
                },
            },
        },
        "converged": {"type": "boolean"},
    },
}

GRAPH_EXPLANATION_SCHEMA = {
    "type": "object",
    "required": ["graph_id", "predicted_class", "class_probs", "edges"],
    "additionalProperties": False,
    "properties": {
        "graph_id": _NONNEG_INT,
        "predicted_class": _NONNEG_INT,
        "class_probs": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst", "score", "selected"],
                "additionalProperties": False,
                "properties": {
                    "src": _NONNEG_INT,
                    "dst": _NONNEG_INT,
                    "score": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                    "selected": {"type": "boolean"},
                },
            },
        },
    },
}

FEATURE_ATTRIBUTION_SCHEMA = {
    "type": "object",
    "required": ["node_id", "explained_class", "base_value", "phi", "method"],
    "additionalProperties": False,
    "properties": {
        "node_id": {"type": "integer"},
        "explained_class": _NONNEG_INT,
        "base_value": {"type": "number"},
        "phi": {"type": "array", "items": {"type": "number"}},
        "method": {"enum": ["kernel", "exact"]},
    },
}

ATTRIBUTION_SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["mean_abs_phi", "ranking"],
    "additionalProperties": False,
    "properties": {
        "mean_abs_phi": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "ranking": {"type": "array", "items": _NONNEG_INT},
    },
}

_REFERENCE_SCHEMA = {
    "type": "object",
    "required": ["graph_id", "distance"],
    "properties": {
        "graph_id": _NONNEG_INT,
        "distance": {"type": "number", "minimum": 0},
        "predicted_class": _NONNEG_INT,
        "class_probs": GRAPH_EXPLANATION_SCHEMA["properties"]["class_probs"],
        "edges": GRAPH_EXPLANATION_SCHEMA["properties"]["edges"],
    },
    "additionalProperties": False,
}

REFERENCE_SET_SCHEMA = {
    "type": "object",
    "required": ["query_id", "same_class", "diff_class"],
    "additionalProperties": False,
    "properties": {
        "query_id": _NONNEG_INT,
        "same_class": _REFERENCE_SCHEMA,
        "diff_class": _REFERENCE_SCHEMA,
    },
}

DATASET_LIST_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["id", "task", "num_classes", "num_graphs"],
        "additionalProperties": False,
        "properties": {
            "id": {"type": "string"},
            "task": {"enum": ["node_classification", "graph_classification"]},
            "num_classes": {"type": "integer", "minimum": 1},
            "num_graphs": {"type": "integer", "minimum": 1},
        },
    },
}

GRAPH_VIEW_SCHEMA = {
    "type": "object",
    "required": ["dataset_id", "graph_id", "task", "num_classes", "num_nodes", "directed", "edges"],
    "additionalProperties": False,
    "properties": {
        "dataset_id": {"type": "string"},
        "graph_id": _NONNEG_INT,
        "task": {"enum": ["node_classification", "graph_classification"]},
        "num_classes": {"type": "integer", "minimum": 1},
        "num_nodes": {"type": "integer", "minimum": 1},
        "directed": {"type": "boolean"},
        "edges": {
            "type": "array",
            "items": {"type": "array", "items": _NONNEG_INT, "minItems": 2, "maxItems": 2},
        },
        "node_labels": {"type": ["array", "null"], "items": _NONNEG_INT},
        "graph_label": {"type": ["integer", "null"]},
        "positions": {
            "type": ["array", "null"],
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        },
        "predicted_classes": {"type": ["array", "null"], "items": _NONNEG_INT},
    },
}

HEALTH_SCHEMA = {
    "type": "object",
    "required": ["status"],
    "additionalProperties": False,
    "properties": {"status": {"enum": ["ok"]}},
}

ERROR_SCHEMA = {
    "type": "object",
    "required": ["error"],
    "additionalProperties": False,
    "properties": {
        "error": {"enum": ["bad_request", "not_found", "unprocessable", "internal"]},
        "detail": {"type": "string"},
    },
}
