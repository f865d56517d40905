from __future__ import annotations

import pytest

from helpers import feature_separable_dataset
from ingrex.checkpoints import save_gcn, save_self_explainable, save_surrogate
from ingrex.datasets import generate_ba2motifs, generate_tree_grid
from ingrex.distill import distill_mlp
from ingrex.gcn import train_gcn, train_self_explainable
from ingrex.graphs import save_dataset
from ingrex.nn import TrainConfig
from ingrex.registry import Registry
from ingrex.service import model_id


@pytest.fixture(scope="session")
def ba_small():
    """Small trained graph-classification stack shared across tests."""
    dataset = generate_ba2motifs(10, 12, seed=7)
    config = TrainConfig(learning_rate=0.01, epochs=200, seed=0)
    teacher, _ = train_gcn(dataset, config)
    explainer, _ = train_self_explainable(teacher, dataset, config, sparsity_weight=0.1)
    return dataset, teacher, explainer


@pytest.fixture(scope="session")
def tree_small():
    dataset = generate_tree_grid(4, 2, seed=3)
    teacher, _ = train_gcn(dataset, TrainConfig(learning_rate=0.01, epochs=200, seed=0))
    return dataset, teacher


@pytest.fixture(scope="session")
def featsep_stack():
    """Feature-separable node dataset, its teacher, and the surrogate."""
    dataset = feature_separable_dataset()
    teacher, _ = train_gcn(dataset, TrainConfig(learning_rate=0.01, epochs=250, seed=0))
    surrogate = distill_mlp(teacher, dataset, TrainConfig(learning_rate=0.01, epochs=400, seed=0))
    return dataset, teacher, surrogate


@pytest.fixture(scope="session")
def store_root(tmp_path_factory, ba_small, tree_small, featsep_stack):
    """Storage root holding every dataset and checkpoint the service needs."""
    root = tmp_path_factory.mktemp("store")
    ba_ds, ba_teacher, ba_explainer = ba_small
    tree_ds, tree_teacher = tree_small
    fs_ds, fs_teacher, fs_surrogate = featsep_stack

    registry = Registry(root)
    for ds in (ba_ds, tree_ds, fs_ds):
        save_dataset(ds, registry.dataset_path(ds.id))

    def meta(ds):
        return {"seed": 0, "epochs": 200, "dataset_id": ds.id}

    save_gcn(ba_teacher, registry.model_path(model_id(ba_ds.id, "gcn")), meta(ba_ds))
    save_self_explainable(
        ba_explainer, registry.model_path(model_id(ba_ds.id, "self_explainable_gcn")), meta(ba_ds)
    )
    save_gcn(tree_teacher, registry.model_path(model_id(tree_ds.id, "gcn")), meta(tree_ds))
    save_gcn(fs_teacher, registry.model_path(model_id(fs_ds.id, "gcn")), meta(fs_ds))
    save_surrogate(fs_surrogate, registry.model_path(model_id(fs_ds.id, "mlp_surrogate")), meta(fs_ds))
    return root
