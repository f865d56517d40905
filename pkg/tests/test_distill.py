import numpy as np
import pytest

from helpers import feature_separable_dataset
from ingrex.distill import SurrogateBundle, distill_mlp, fidelity_report, kd_loss_and_grads
from ingrex.errors import DatasetMismatch, IncompatibleModel, InvalidConfig
from ingrex.gcn import GcnModel, gcn_forward, train_gcn
from ingrex.graphs import DatasetBundle, Graph, sym_normalized_adjacency
from ingrex.nn import MlpParams, TrainConfig, mlp_forward_batch, softmax_rows


def _zero_teacher(feature_dim, num_classes):
    return GcnModel(
        layer_weights=(np.zeros((feature_dim, 8)), np.zeros((8, num_classes))),
        task="node_classification",
    )


def _ring_dataset(n=12):
    """Every node is structurally and featurally identical, so any teacher
    emits one constant logit row for all nodes."""
    graph = Graph(
        node_count=n,
        edges=tuple((i, (i + 1) % n) for i in range(n)),
        directed=False,
        node_features=np.full((n, 4), 0.5),
        node_labels=np.zeros(n, dtype=int),
    )
    return DatasetBundle(
        id="ring", task="node_classification", graphs=(graph,), num_classes=2,
        split={"train": list(range(0, n, 2)), "val": list(range(1, n, 2)), "test": []},
    )


def test_constant_teacher_is_learnable_by_bias_alone():
    ds = _ring_dataset()
    rng = np.random.default_rng(2)
    teacher = GcnModel(
        layer_weights=(rng.normal(size=(4, 8)), rng.normal(size=(8, 2))), task="node_classification"
    )
    graph = ds.graphs[0]
    t_logits = gcn_forward(teacher, sym_normalized_adjacency(graph), graph.node_features).logits
    assert np.max(np.abs(t_logits - t_logits[0])) < 1e-12  # constant over nodes

    bundle = distill_mlp(teacher, ds, TrainConfig(learning_rate=0.01, epochs=300, seed=0))
    assert bundle.fidelity == 1.0
    p_teacher = softmax_rows(t_logits / bundle.temperature)
    kl, _, _ = kd_loss_and_grads(bundle.student, graph.node_features, p_teacher, bundle.temperature)
    assert kl < 1e-3


def test_nonpositive_temperature_rejected():
    ds = feature_separable_dataset(n_per_class=6, seed=8)
    teacher = _zero_teacher(4, 2)
    cfg = TrainConfig(learning_rate=0.01, epochs=1, seed=0)
    for t in (0.0, -1.0):
        with pytest.raises(InvalidConfig):
            distill_mlp(teacher, ds, cfg, temperature=t)


def test_feature_separable_fidelity(featsep_stack):
    _, _, bundle = featsep_stack
    assert bundle.fidelity >= 0.9


def test_graph_task_rejected(ba_small):
    ds, teacher, _ = ba_small
    with pytest.raises(IncompatibleModel):
        distill_mlp(teacher, ds, TrainConfig(learning_rate=0.01, epochs=1, seed=0))


class TestFidelityReport:
    def test_identical_behavior_gives_ones(self):
        ds = feature_separable_dataset(n_per_class=8, seed=9)
        teacher = _zero_teacher(4, 2)
        student = MlpParams(weights=(np.zeros((4, 2)),), biases=(np.zeros(2),), activations=("identity",))
        bundle = SurrogateBundle(student=student, fidelity=1.0, dataset_id=ds.id)
        report = fidelity_report(bundle, teacher, ds)
        assert report == {"train": 1.0, "val": 1.0, "test": 1.0}

    def test_constant_wrong_class_matches_frequency(self, featsep_stack):
        ds, teacher, _ = featsep_stack
        always_one = MlpParams(
            weights=(np.zeros((4, 2)),), biases=(np.array([-10.0, 10.0]),), activations=("identity",)
        )
        bundle = SurrogateBundle(student=always_one, fidelity=0.0, dataset_id=ds.id)
        report = fidelity_report(bundle, teacher, ds)
        t_pred = np.argmax(
            gcn_forward(teacher, sym_normalized_adjacency(ds.graphs[0]), ds.graphs[0].node_features).logits,
            axis=1,
        )
        for split in ("train", "val", "test"):
            idx = np.asarray(ds.split[split])
            assert report[split] == pytest.approx(np.mean(t_pred[idx] == 1))

    def test_matches_independent_recount(self, featsep_stack):
        ds, teacher, bundle = featsep_stack
        report = fidelity_report(bundle, teacher, ds)
        graph = ds.graphs[0]
        t_pred = np.argmax(
            gcn_forward(teacher, sym_normalized_adjacency(graph), graph.node_features).logits, axis=1
        )
        s_pred = np.argmax(mlp_forward_batch(bundle.student, graph.node_features), axis=1)
        for split in ("train", "val", "test"):
            agree = sum(1 for i in ds.split[split] if t_pred[i] == s_pred[i])
            assert report[split] == pytest.approx(agree / len(ds.split[split]))

    def test_dataset_mismatch_rejected(self, featsep_stack):
        ds, teacher, bundle = featsep_stack
        renamed = DatasetBundle(
            id="other", task=ds.task, graphs=ds.graphs, num_classes=ds.num_classes, split=ds.split
        )
        with pytest.raises(DatasetMismatch):
            fidelity_report(bundle, teacher, renamed)


def test_edge_permutation_leaves_student_bit_identical():
    ds = feature_separable_dataset(n_per_class=8, seed=10)
    graph = ds.graphs[0]
    permuted_graph = Graph(
        node_count=graph.node_count,
        edges=tuple(reversed(graph.edges)),
        directed=graph.directed,
        node_features=graph.node_features,
        node_labels=graph.node_labels,
    )
    permuted = DatasetBundle(
        id=ds.id, task=ds.task, graphs=(permuted_graph,), num_classes=ds.num_classes, split=ds.split
    )
    cfg = TrainConfig(learning_rate=0.01, epochs=50, seed=3)
    teacher, _ = train_gcn(ds, cfg)
    teacher_p, _ = train_gcn(permuted, cfg)
    a = distill_mlp(teacher, ds, cfg)
    b = distill_mlp(teacher_p, permuted, cfg)
    for wa, wb in zip(a.student.weights, b.student.weights):
        assert np.array_equal(wa, wb)
    for ba_, bb in zip(a.student.biases, b.student.biases):
        assert np.array_equal(ba_, bb)
    assert a.fidelity == b.fidelity
