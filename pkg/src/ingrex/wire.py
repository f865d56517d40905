"""Wire-format payload builders and the one canonical JSON serializer.

The CLI prints and the HTTP service returns exactly these bytes, so the
two surfaces stay byte-identical for identical inputs and seeds. Keys are
emitted in fixed order; NaN/Infinity are rejected.
"""

from __future__ import annotations

import json

from .attribution import AttributionSummary, FeatureAttribution
from .references import ReferenceSet
from .structural import GraphExplanation, NodeExplanation

__all__ = [
    "dumps",
    "node_explanation_payload",
    "graph_explanation_payload",
    "attribution_payload",
    "summary_payload",
    "reference_set_payload",
]


def dumps(payload) -> str:
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def node_explanation_payload(exp: NodeExplanation) -> dict:
    return {
        "target": exp.target,
        "nodes": [
            {"id": v, "score": exp.node_scores[v], "hop": exp.hop_levels[v]}
            for v in exp.subgraph_nodes
        ],
        "edges": [
            {"src": s, "dst": d, "contribution": c} for s, d, c in exp.subgraph_edges
        ],
        "converged": exp.converged,
    }


def graph_explanation_payload(exp: GraphExplanation) -> dict:
    selected = set(exp.selected_edges)
    return {
        "graph_id": exp.graph_id,
        "predicted_class": exp.predicted_class,
        "class_probs": list(exp.class_probs),
        "edges": [
            {"src": a, "dst": b, "score": s, "selected": (a, b) in selected}
            for (a, b), s in zip(exp.edges, exp.edge_scores)
        ],
    }


def attribution_payload(att: FeatureAttribution) -> dict:
    return {
        "node_id": att.node_id,
        "explained_class": att.explained_class,
        "base_value": att.base_value,
        "phi": [float(p) for p in att.phi],
        "method": att.method,
    }


def summary_payload(summary: AttributionSummary) -> dict:
    return {
        "mean_abs_phi": [float(v) for v in summary.mean_abs_phi],
        "ranking": list(summary.feature_ranking),
    }


def reference_set_payload(refs: ReferenceSet) -> dict:
    def ref_payload(ref) -> dict:
        out = graph_explanation_payload(ref.explanation) if ref.explanation else {"graph_id": ref.item_id}
        out["distance"] = ref.distance
        return out

    return {
        "query_id": refs.query_id,
        "same_class": ref_payload(refs.same_class_ref),
        "diff_class": ref_payload(refs.diff_class_ref),
    }
