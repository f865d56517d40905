"""Command-line driver for the full lifecycle: generate datasets, train
and distill models, print explanations, and serve the REST API.

All explanation commands print exactly the JSON the corresponding service
endpoint would return (same builders, same serializer). Usage errors exit
2; domain errors print one diagnostic line and exit 1.
"""

from __future__ import annotations

import functools
import sys

import click

from . import service, wire
from .datasets import generate_ba2motifs, generate_tree_grid
from .distill import distill_mlp
from .errors import IngrexError
from .gcn import train_gcn, train_self_explainable
from .graphs import GRAPH_TASK, NODE_TASK
from .checkpoints import save_gcn, save_self_explainable, save_surrogate
from .nn import TrainConfig
from .registry import DATASET, MODEL, Registry

DEFAULT_EPOCHS = 400
DEFAULT_LR = 0.01
DEFAULT_SPARSITY = 0.1

_storage_option = click.option(
    "--storage-root",
    envvar=service.ENV_STORAGE_ROOT,
    default="ingrex_data",
    show_default=True,
    help="Directory holding datasets/ and models/.",
)


def _domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except IngrexError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _emit(payload) -> None:
    click.echo(wire.dumps(payload))


@click.group()
def main():
    """Explanation engine for graph neural networks."""


@main.command()
@click.argument("kind", type=click.Choice(["tree_grid", "ba2motifs"]))
@click.option("--dataset", default=None, help="Dataset id (defaults to the kind).")
@click.option("--depth", default=5, show_default=True, type=int)
@click.option("--num-grids", default=3, show_default=True, type=int)
@click.option("--num-graphs", default=50, show_default=True, type=int)
@click.option("--base-size", default=20, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@_storage_option
@_domain_errors
def generate(kind, dataset, depth, num_grids, num_graphs, base_size, seed, storage_root):
    """Write a synthetic dataset into the storage root."""
    if kind == "tree_grid":
        bundle = generate_tree_grid(depth, num_grids, seed)
    else:
        bundle = generate_ba2motifs(num_graphs, base_size, seed)
    if dataset:
        bundle = type(bundle)(
            id=dataset, task=bundle.task, graphs=bundle.graphs,
            num_classes=bundle.num_classes, split=bundle.split,
        )
    registry = Registry(storage_root)
    path = registry.put_dataset(bundle)
    _emit({"dataset_id": bundle.id, "path": str(path), "num_graphs": bundle.num_graphs})


@main.command()
@click.option("--dataset", required=True)
@click.option("--epochs", default=DEFAULT_EPOCHS, show_default=True, type=int)
@click.option("--lr", default=DEFAULT_LR, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--sparsity-weight", default=DEFAULT_SPARSITY, show_default=True, type=float)
@_storage_option
@_domain_errors
def train(dataset, epochs, lr, seed, sparsity_weight, storage_root):
    """Train the teacher GCN (plus, for graph datasets, the jointly
    distilled self-explainable model) and write checkpoints."""
    registry = Registry(storage_root)
    ds = registry.load_or_get(DATASET, dataset)
    config = TrainConfig(learning_rate=lr, epochs=epochs, seed=seed)
    meta = {"seed": seed, "epochs": epochs, "dataset_id": dataset}
    teacher, history = train_gcn(ds, config)
    save_gcn(teacher, registry.model_path(service.model_id(dataset, "gcn")), meta)
    models = [service.model_id(dataset, "gcn")]
    summary = {"dataset_id": dataset, "models": models, "train_acc": history["train_acc"][-1]}
    if ds.task == GRAPH_TASK:
        explainer, joint_history = train_self_explainable(teacher, ds, config, sparsity_weight)
        save_self_explainable(
            explainer, registry.model_path(service.model_id(dataset, "self_explainable_gcn")), meta
        )
        models.append(service.model_id(dataset, "self_explainable_gcn"))
        summary["joint_train_acc"] = joint_history["train_acc"][-1]
        summary["mask_mean"] = joint_history["mask_mean"][-1]
    _emit(summary)


@main.command()
@click.option("--dataset", required=True)
@click.option("--epochs", default=DEFAULT_EPOCHS, show_default=True, type=int)
@click.option("--lr", default=DEFAULT_LR, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@_storage_option
@_domain_errors
def distill(dataset, epochs, lr, seed, storage_root):
    """Distill the trained teacher into the feature-only MLP surrogate."""
    registry = Registry(storage_root)
    ds = registry.load_or_get(DATASET, dataset)
    teacher = registry.load_or_get(MODEL, service.model_id(dataset, "gcn"))
    bundle = distill_mlp(teacher, ds, TrainConfig(learning_rate=lr, epochs=epochs, seed=seed))
    meta = {"seed": seed, "epochs": epochs, "dataset_id": dataset}
    save_surrogate(bundle, registry.model_path(service.model_id(dataset, "mlp_surrogate")), meta)
    _emit({
        "dataset_id": dataset,
        "model": service.model_id(dataset, "mlp_surrogate"),
        "fidelity": bundle.fidelity,
    })


@main.command("explain-node")
@click.option("--dataset", required=True)
@click.option("--node", required=True, type=int)
@click.option("--top-k", default=None, type=int)
@click.option("--d", default=None, type=float)
@_storage_option
@_domain_errors
def explain_node_cmd(dataset, node, top_k, d, storage_root):
    """Print the RWR subgraph explanation of one node prediction."""
    registry = Registry(storage_root)
    _emit(service.explain_node_payload(registry, dataset, node, top_k, d))


@main.command("explain-graph")
@click.option("--dataset", required=True)
@click.option("--graph", required=True, type=int)
@click.option("--top-k", default=None, type=int)
@click.option("--threshold", default=None, type=float)
@_storage_option
@_domain_errors
def explain_graph_cmd(dataset, graph, top_k, threshold, storage_root):
    """Print the edge-mask explanation of one graph prediction."""
    if top_k is not None and threshold is not None:
        raise click.UsageError("--top-k and --threshold are mutually exclusive")
    registry = Registry(storage_root)
    if threshold is not None:
        kind, value = "threshold", threshold
    else:
        kind, value = "top_k", float(top_k if top_k is not None else 10)
    _emit(service.explain_graph_payload(registry, dataset, graph, kind, value))


@main.command()
@click.option("--dataset", required=True)
@click.option("--node", default=None, type=int)
@click.option("--summary", is_flag=True, default=False, help="Dataset-level mean |phi| ranking.")
@click.option("--sample-ids", default=None, help="Comma-separated node ids for --summary.")
@click.option("--n-samples", default=service.DEFAULT_N_SAMPLES, show_default=True, type=int)
@click.option("--seed", default=service.DEFAULT_SEED, show_default=True, type=int)
@_storage_option
@_domain_errors
def attribute(dataset, node, summary, sample_ids, n_samples, seed, storage_root):
    """Print Shapley feature attributions from the distilled surrogate."""
    registry = Registry(storage_root)
    if summary:
        ids = [int(t) for t in sample_ids.split(",")] if sample_ids else None
        _emit(service.features_summary_payload(registry, dataset, ids, n_samples, seed))
        return
    if node is None:
        raise click.UsageError("--node is required unless --summary is set")
    _emit(service.explain_features_payload(registry, dataset, node, n_samples, seed))


@main.command()
@click.option("--port", envvar=service.ENV_PORT, default=service.DEFAULT_PORT, show_default=True, type=int)
@_storage_option
def serve(port, storage_root):
    """Run the REST backend."""
    service.serve(storage_root, port)


if __name__ == "__main__":
    main()
