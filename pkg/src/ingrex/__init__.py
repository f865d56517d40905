"""Interactive explanation engine for graph neural networks.

Trains a small GCN plus its self-explainable and distilled companions,
computes structural explanations (random walk with restart, learned edge
masks), Shapley feature attributions, and example-based references, and
serves everything as JSON over REST.
"""

from .attribution import exact_shapley, kernel_shap, summarize_attributions
from .datasets import generate_ba2motifs, generate_tree_grid
from .distill import SurrogateBundle, distill_mlp, fidelity_report
from .gcn import (
    GcnModel,
    SelfExplainableGcn,
    gcn_forward,
    masked_gcn_forward,
    train_gcn,
    train_self_explainable,
)
from .graphs import (
    DatasetBundle,
    Graph,
    NormalizedAdjacency,
    column_normalized_adjacency,
    load_dataset,
    save_dataset,
    sym_normalized_adjacency,
)
from .nn import MlpParams, TrainConfig
from .references import build_index, find_references
from .registry import Registry
from .sparse import SparseMatrix, build_csr, spmv
from .structural import RwrConfig, SelectionStrategy, explain_graph, explain_node, rwr

__all__ = [
    "DatasetBundle",
    "GcnModel",
    "Graph",
    "MlpParams",
    "NormalizedAdjacency",
    "Registry",
    "RwrConfig",
    "SelectionStrategy",
    "SelfExplainableGcn",
    "SparseMatrix",
    "SurrogateBundle",
    "TrainConfig",
    "build_csr",
    "build_index",
    "column_normalized_adjacency",
    "distill_mlp",
    "exact_shapley",
    "explain_graph",
    "explain_node",
    "fidelity_report",
    "find_references",
    "gcn_forward",
    "generate_ba2motifs",
    "generate_tree_grid",
    "kernel_shap",
    "load_dataset",
    "masked_gcn_forward",
    "rwr",
    "save_dataset",
    "spmv",
    "summarize_attributions",
    "sym_normalized_adjacency",
    "train_gcn",
    "train_self_explainable",
]
