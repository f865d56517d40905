"""Dataset/model registry with in-memory retention.

Entities live as files under the storage root (``datasets/<id>.json``,
``models/<id>.json``); the first access loads and caches, later accesses
return the cached object. A single lock makes the load exactly-once under
concurrent callers; ``load_counts`` exposes that for tests.
"""

from __future__ import annotations

import threading
from pathlib import Path

from .checkpoints import load_checkpoint
from .errors import NotFound
from .graphs import DatasetBundle, load_dataset, save_dataset

__all__ = ["Registry", "load_or_get"]

DATASET = "dataset"
MODEL = "model"


class Registry:
    def __init__(self, storage_root):
        self.storage_root = Path(storage_root)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self.load_counts: dict = {}

    def dataset_path(self, dataset_id: str) -> Path:
        return self.storage_root / "datasets" / f"{dataset_id}.json"

    def model_path(self, model_id: str) -> Path:
        return self.storage_root / "models" / f"{model_id}.json"

    def load_or_get(self, kind: str, entity_id: str):
        """Cached load; exactly one file read per (kind, id) even when
        called concurrently."""
        if kind == DATASET:
            path = self.dataset_path(entity_id)
        elif kind == MODEL:
            path = self.model_path(entity_id)
        else:
            raise NotFound(f"unknown entity kind {kind!r}")
        key = (kind, entity_id)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
            if not path.is_file():
                raise NotFound(f"{kind} {entity_id!r} not found")
            entity = load_dataset(path, entity_id) if kind == DATASET else load_checkpoint(path)
            self._cache[key] = entity
            self.load_counts[key] = self.load_counts.get(key, 0) + 1
            return entity

    def put_dataset(self, bundle: DatasetBundle) -> Path:
        path = self.dataset_path(bundle.id)
        save_dataset(bundle, path)
        with self._lock:
            self._cache[(DATASET, bundle.id)] = bundle
        return path

    def list_dataset_ids(self) -> list:
        root = self.storage_root / "datasets"
        if not root.is_dir():
            return []
        return sorted(p.stem for p in root.glob("*.json"))

    def invalidate(self) -> None:
        with self._lock:
            self._cache.clear()


def load_or_get(registry: Registry, kind: str, entity_id: str):
    """Module-level alias of :meth:`Registry.load_or_get`."""
    return registry.load_or_get(kind, entity_id)
