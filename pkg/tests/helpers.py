"""Shared test utilities: independent oracles and data factories."""

from __future__ import annotations

import numpy as np

from ingrex.graphs import NODE_TASK, DatasetBundle, Graph


def rank_auc(scores, labels) -> float:
    """ROC-AUC via the Mann-Whitney U statistic with tie correction."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=int)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    allv = np.concatenate([pos, neg])
    order = np.argsort(allv, kind="mergesort")
    ranks = np.empty(len(allv))
    ranks[order] = np.arange(1, len(allv) + 1)
    sv = allv[order]
    i = 0
    while i < len(sv):
        j = i
        while j + 1 < len(sv) and sv[j + 1] == sv[i]:
            j += 1
        if j > i:
            ranks[order[i : j + 1]] = (i + 1 + j + 1) / 2
        i = j + 1
    u = ranks[: len(pos)].sum() - len(pos) * (len(pos) + 1) / 2
    return float(u / (len(pos) * len(neg)))


def finite_diff(loss_fn, params, h=1e-5):
    """Central-difference gradients of ``loss_fn(params)`` per array."""
    grads = []
    for pi, par in enumerate(params):
        fd = np.zeros_like(par)
        it = np.nditer(par, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            plus = [q.copy() for q in params]
            minus = [q.copy() for q in params]
            plus[pi][idx] += h
            minus[pi][idx] -= h
            fd[idx] = (loss_fn(plus) - loss_fn(minus)) / (2 * h)
            it.iternext()
        grads.append(fd)
    return grads


def max_rel_error(analytic, numeric) -> float:
    """Worst per-array relative error between two gradient lists."""
    worst = 0.0
    for a, f in zip(analytic, numeric):
        denom = max(np.max(np.abs(a)), np.max(np.abs(f)), 1e-8)
        worst = max(worst, float(np.max(np.abs(a - f)) / denom))
    return worst


def random_graph(rng: np.random.Generator, max_nodes: int = 8, directed=None) -> Graph:
    """Small random graph; may contain dangling nodes but no duplicates."""
    n = int(rng.integers(1, max_nodes + 1))
    if directed is None:
        directed = bool(rng.integers(0, 2))
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if not directed and i > j:
                continue
            if rng.random() < 0.35:
                edges.append((i, j))
    return Graph(
        node_count=n,
        edges=tuple(edges),
        directed=directed,
        node_features=rng.normal(size=(n, 3)),
    )


def feature_separable_dataset(n_per_class: int = 30, seed: int = 11) -> DatasetBundle:
    """Homophilous two-class graph whose features determine the label."""
    rng = np.random.default_rng(seed)
    n = 2 * n_per_class
    labels = np.array([0] * n_per_class + [1] * n_per_class)
    means = np.array([[2.0, -2.0, 0.5, 0.0], [-2.0, 2.0, -0.5, 0.0]])
    features = means[labels] + 0.3 * rng.normal(size=(n, 4))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = 0.12 if labels[i] == labels[j] else 0.01
            if rng.random() < p:
                edges.append((i, j))
    graph = Graph(
        node_count=n,
        edges=tuple(edges),
        directed=False,
        node_features=features,
        node_labels=labels,
    )
    idx = rng.permutation(n)
    return DatasetBundle(
        id="feat_sep",
        task=NODE_TASK,
        graphs=(graph,),
        num_classes=2,
        split={
            "train": sorted(int(i) for i in idx[: int(0.6 * n)]),
            "val": sorted(int(i) for i in idx[int(0.6 * n) : int(0.8 * n)]),
            "test": sorted(int(i) for i in idx[int(0.8 * n) :]),
        },
    )
