import shutil
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from fastapi.testclient import TestClient
from jsonschema import validate

from ingrex import schemas
from ingrex.gcn import GcnModel
from ingrex.graphs import Graph
from ingrex.registry import DATASET, MODEL, Registry
from ingrex.service import create_app, layout_embeddings


@pytest.fixture()
def service(store_root):
    registry = Registry(store_root)
    return TestClient(create_app(registry)), registry


class TestLayout:
    def _passthrough_model(self, dim):
        # isolated nodes normalize to identity, so embeddings equal features
        return GcnModel(layer_weights=(np.eye(dim),), task="node_classification")

    def _graph(self, feats):
        feats = np.asarray(feats, dtype=float)
        return Graph(node_count=len(feats), edges=(), directed=False, node_features=feats)

    def test_full_rank_2d_preserves_distances(self):
        rng = np.random.default_rng(50)
        feats = rng.normal(size=(6, 2))
        feats -= feats.mean(axis=0)
        result = layout_embeddings(self._passthrough_model(2), self._graph(feats))
        for i in range(6):
            for j in range(6):
                original = np.linalg.norm(feats[i] - feats[j])
                projected = np.linalg.norm(result.positions[i] - result.positions[j])
                assert abs(original - projected) < 1e-9

    def test_identical_embeddings_collapse_to_origin(self):
        result = layout_embeddings(self._passthrough_model(3), self._graph(np.ones((4, 3))))
        assert np.allclose(result.positions, 0.0)

    def test_matches_eigendecomposition_oracle(self):
        feats = np.array([
            [1.0, 0.0, 2.0],
            [-1.0, 1.0, 0.5],
            [0.5, -2.0, 1.0],
            [2.0, 1.5, -0.5],
        ])
        result = layout_embeddings(self._passthrough_model(3), self._graph(feats))
        centered = feats - feats.mean(axis=0)
        eigvals, eigvecs = np.linalg.eigh(centered.T @ centered / 4)
        order = np.argsort(eigvals)[::-1][:2]
        expected = np.zeros((3, 2))
        for c, col in enumerate(order):
            v = eigvecs[:, col]
            nz = np.flatnonzero(np.abs(v) > 1e-12)
            expected[:, c] = v if v[nz[0]] > 0 else -v
        assert np.allclose(result.positions, centered @ expected, atol=1e-12)

    def test_method_label(self):
        result = layout_embeddings(self._passthrough_model(2), self._graph(np.zeros((2, 2))))
        assert result.method == "pca_embeddings"


class TestEndpoints:
    def test_health(self, service):
        client, _ = service
        r = client.get("/api/health")
        assert r.status_code == 200
        validate(r.json(), schemas.HEALTH_SCHEMA)

    def test_dataset_list(self, service):
        client, _ = service
        r = client.get("/api/datasets")
        assert r.status_code == 200
        body = r.json()
        validate(body, schemas.DATASET_LIST_SCHEMA)
        assert [d["id"] for d in body] == ["ba2motifs", "feat_sep", "tree_grid"]

    def test_graph_view_with_layout(self, service):
        client, _ = service
        r = client.get("/api/datasets/tree_grid/graph/0?layout=pca")
        assert r.status_code == 200
        body = r.json()
        validate(body, schemas.GRAPH_VIEW_SCHEMA)
        assert len(body["positions"]) == body["num_nodes"]
        assert len(body["predicted_classes"]) == body["num_nodes"]

    def test_graph_view_without_layout(self, service):
        client, _ = service
        body = client.get("/api/datasets/ba2motifs/graph/2").json()
        validate(body, schemas.GRAPH_VIEW_SCHEMA)
        assert body["positions"] is None
        assert body["graph_label"] in (0, 1)

    def test_unknown_layout_rejected(self, service):
        client, _ = service
        r = client.get("/api/datasets/tree_grid/graph/0?layout=umap")
        assert r.status_code == 422
        validate(r.json(), schemas.ERROR_SCHEMA)

    def test_explain_node(self, service):
        client, _ = service
        r = client.post("/api/explain/node", json={"dataset_id": "tree_grid", "node_id": 4, "top_k": 6})
        assert r.status_code == 200
        body = r.json()
        validate(body, schemas.NODE_EXPLANATION_SCHEMA)
        assert body["target"] == 4
        assert any(n["id"] == 4 and n["hop"] == 0 for n in body["nodes"])

    def test_explain_graph(self, service):
        client, _ = service
        r = client.post(
            "/api/explain/graph",
            json={"dataset_id": "ba2motifs", "graph_id": 1, "strategy": "top_k", "value": 5},
        )
        assert r.status_code == 200
        body = r.json()
        validate(body, schemas.GRAPH_EXPLANATION_SCHEMA)
        assert sum(e["selected"] for e in body["edges"]) == 5

    def test_explain_graph_threshold(self, service):
        client, _ = service
        r = client.post(
            "/api/explain/graph",
            json={"dataset_id": "ba2motifs", "graph_id": 1, "strategy": "threshold", "value": 0.5},
        )
        body = r.json()
        validate(body, schemas.GRAPH_EXPLANATION_SCHEMA)
        for e in body["edges"]:
            assert e["selected"] == (e["score"] > 0.5)

    def test_explain_features(self, service):
        client, _ = service
        r = client.post(
            "/api/explain/features",
            json={"dataset_id": "feat_sep", "node_id": 3, "n_samples": 64, "seed": 1},
        )
        assert r.status_code == 200
        body = r.json()
        validate(body, schemas.FEATURE_ATTRIBUTION_SCHEMA)
        assert body["node_id"] == 3
        assert len(body["phi"]) == 4

    def test_features_summary(self, service):
        client, _ = service
        r = client.post(
            "/api/explain/features/summary",
            json={"dataset_id": "feat_sep", "sample_ids": [0, 5, 9], "n_samples": 64},
        )
        assert r.status_code == 200
        validate(r.json(), schemas.ATTRIBUTION_SUMMARY_SCHEMA)

    def test_features_summary_defaults_to_test_split(self, service):
        client, _ = service
        r = client.post(
            "/api/explain/features/summary", json={"dataset_id": "feat_sep", "n_samples": 64}
        )
        assert r.status_code == 200
        validate(r.json(), schemas.ATTRIBUTION_SUMMARY_SCHEMA)

    def test_examples(self, service):
        client, _ = service
        r = client.get("/api/examples/ba2motifs/0")
        assert r.status_code == 200
        body = r.json()
        validate(body, schemas.REFERENCE_SET_SCHEMA)
        assert body["query_id"] == 0
        assert body["same_class"]["graph_id"] != 0
        assert body["diff_class"]["graph_id"] != 0

    def test_idempotent_responses_byte_identical(self, service):
        client, _ = service
        requests = [
            ("GET", "/api/datasets", None),
            ("GET", "/api/datasets/tree_grid/graph/0?layout=pca", None),
            ("POST", "/api/explain/node", {"dataset_id": "tree_grid", "node_id": 7}),
            ("POST", "/api/explain/graph",
             {"dataset_id": "ba2motifs", "graph_id": 3, "strategy": "top_k", "value": 4}),
            ("POST", "/api/explain/features",
             {"dataset_id": "feat_sep", "node_id": 2, "n_samples": 64, "seed": 9}),
            ("POST", "/api/explain/features/summary",
             {"dataset_id": "feat_sep", "sample_ids": [1, 2], "n_samples": 64, "seed": 9}),
            ("GET", "/api/examples/ba2motifs/5", None),
        ]
        for method, url, body in requests:
            first = client.request(method, url, json=body)
            second = client.request(method, url, json=body)
            assert first.status_code == 200
            assert first.content == second.content


class TestErrors:
    def test_unknown_dataset_404(self, service):
        client, _ = service
        r = client.post("/api/explain/node", json={"dataset_id": "ghost", "node_id": 0})
        assert r.status_code == 404
        assert r.json() == {"error": "not_found"}

    def test_unknown_graph_404(self, service):
        client, _ = service
        r = client.get("/api/examples/ba2motifs/999")
        assert r.status_code == 404

    def test_graph_view_unknown_graph_404(self, service):
        client, _ = service
        r = client.get("/api/datasets/ba2motifs/graph/999")
        assert r.status_code == 404
        assert r.json() == {"error": "not_found"}

    def test_missing_field_400_names_field(self, service):
        client, _ = service
        r = client.post("/api/explain/node", json={"dataset_id": "tree_grid"})
        assert r.status_code == 400
        body = r.json()
        validate(body, schemas.ERROR_SCHEMA)
        assert "node_id" in body["detail"]

    def test_malformed_json_400(self, service):
        client, _ = service
        r = client.post("/api/explain/node", content=b"{oops", headers={"content-type": "application/json"})
        assert r.status_code == 400
        validate(r.json(), schemas.ERROR_SCHEMA)

    def test_wrong_field_type_400(self, service):
        client, _ = service
        r = client.post("/api/explain/node", json={"dataset_id": "tree_grid", "node_id": "five"})
        assert r.status_code == 400

    def test_domain_precondition_422(self, service):
        client, _ = service
        r = client.post("/api/explain/node", json={"dataset_id": "tree_grid", "node_id": 10_000})
        assert r.status_code == 422
        validate(r.json(), schemas.ERROR_SCHEMA)

    def test_node_explanations_rejected_for_graph_dataset(self, service):
        client, _ = service
        r = client.post("/api/explain/node", json={"dataset_id": "ba2motifs", "node_id": 0})
        assert r.status_code == 422

    def test_corrupt_checkpoint_maps_to_opaque_500(self, store_root, tmp_path):
        root = tmp_path / "corrupt"
        shutil.copytree(store_root, root)
        registry = Registry(root)
        registry.model_path("tree_grid__gcn").write_text("{broken")
        client = TestClient(create_app(registry))
        r = client.get("/api/datasets/tree_grid/graph/0?layout=pca")
        assert r.status_code == 500
        assert r.json() == {"error": "internal"}


class TestRetention:
    def test_ten_concurrent_requests_load_each_checkpoint_once(self, store_root):
        registry = Registry(store_root)
        client = TestClient(create_app(registry))
        body = {"dataset_id": "ba2motifs", "graph_id": 2, "strategy": "top_k", "value": 5}

        def call(_):
            return client.post("/api/explain/graph", json=body)

        with ThreadPoolExecutor(max_workers=10) as pool:
            responses = list(pool.map(call, range(10)))
        assert all(r.status_code == 200 for r in responses)
        assert len({r.content for r in responses}) == 1
        assert registry.load_counts[(MODEL, "ba2motifs__self_explainable_gcn")] == 1
        assert registry.load_counts[(DATASET, "ba2motifs")] == 1
