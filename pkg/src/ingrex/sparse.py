"""Compressed-sparse-row matrices and the few kernels the rest of the
package needs: matrix-vector / matrix-dense products (plus the transposed
variants used by backprop) and construction from edge lists.

Everything is float64 and deterministic; matrices are immutable after
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DuplicateEdge, OutOfRange

__all__ = ["SparseMatrix", "build_csr", "spmv"]


@dataclass(frozen=True)
class SparseMatrix:
    """CSR matrix. Rows index edge sources, columns edge destinations.

    Invariants (checked in ``__post_init__``): ``row_offsets`` is monotone
    non-decreasing with ``row_offsets[-1] == nnz``; column indices are in
    range and strictly increasing within each row; no explicitly stored
    zeros.
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray = field(repr=False)
    col_indices: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        offsets = np.asarray(self.row_offsets, dtype=np.int64)
        cols = np.asarray(self.col_indices, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "row_offsets", offsets)
        object.__setattr__(self, "col_indices", cols)
        object.__setattr__(self, "values", vals)
        if offsets.shape != (self.n_rows + 1,) or offsets[0] != 0:
            raise DimensionMismatch("row_offsets must have length n_rows+1 and start at 0")
        if np.any(np.diff(offsets) < 0) or offsets[-1] != len(cols) or len(cols) != len(vals):
            raise DimensionMismatch("row_offsets inconsistent with stored entries")
        if len(cols) and (cols.min() < 0 or cols.max() >= self.n_cols):
            raise OutOfRange("column index outside [0, n_cols)")
        # strictly increasing columns within each row (unique storage)
        if len(cols) > 1:
            same_row = np.ones(len(cols) - 1, dtype=bool)
            boundaries = offsets[1:-1]
            boundaries = boundaries[(boundaries > 0) & (boundaries < len(cols))]
            same_row[boundaries - 1] = False
            deltas = np.diff(cols)
            if np.any(same_row & (deltas == 0)):
                raise DuplicateEdge("duplicate entry within a row")
            if np.any(same_row & (deltas < 0)):
                raise DimensionMismatch("column indices must increase within a row")
        if np.any(vals == 0.0):
            raise DimensionMismatch("explicit zeros are not stored")

    @property
    def nnz(self) -> int:
        return int(self.row_offsets[-1])

    @property
    def row_of_entry(self) -> np.ndarray:
        """Row index of each stored entry, aligned with ``values``."""
        return np.repeat(np.arange(self.n_rows), np.diff(self.row_offsets))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return spmv(self, v)

    def matmat(self, x: np.ndarray) -> np.ndarray:
        """``self @ x`` for a dense (n_cols, k) matrix."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.n_cols:
            raise DimensionMismatch(f"expected {self.n_cols} rows, got {x.shape[0]}")
        out = np.zeros((self.n_rows,) + x.shape[1:], dtype=np.float64)
        contrib = self.values[:, None] * x[self.col_indices] if x.ndim == 2 else self.values * x[self.col_indices]
        np.add.at(out, self.row_of_entry, contrib)
        return out

    def rmatmat(self, x: np.ndarray) -> np.ndarray:
        """``self.T @ x`` for a dense (n_rows, k) matrix."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.n_rows:
            raise DimensionMismatch(f"expected {self.n_rows} rows, got {x.shape[0]}")
        out = np.zeros((self.n_cols,) + x.shape[1:], dtype=np.float64)
        contrib = self.values[:, None] * x[self.row_of_entry] if x.ndim == 2 else self.values * x[self.row_of_entry]
        np.add.at(out, self.col_indices, contrib)
        return out

    def with_values(self, values: np.ndarray) -> "SparseMatrix":
        """Same sparsity pattern, different entry values."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise DimensionMismatch("replacement values must match nnz")
        return SparseMatrix(self.n_rows, self.n_cols, self.row_offsets, self.col_indices, values)

    def transpose(self) -> "SparseMatrix":
        """CSR of the transposed matrix (deterministic entry order)."""
        rows = self.row_of_entry
        order = np.lexsort((rows, self.col_indices))
        t_cols = rows[order]
        t_vals = self.values[order]
        t_offsets = np.zeros(self.n_cols + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.col_indices, minlength=self.n_cols), out=t_offsets[1:])
        return SparseMatrix(self.n_cols, self.n_rows, t_offsets, t_cols, t_vals)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.float64)
        out[self.row_of_entry, self.col_indices] = self.values
        return out

    def entry_pairs(self) -> np.ndarray:
        """(nnz, 2) array of (row, col) per stored entry, CSR order."""
        return np.stack([self.row_of_entry, self.col_indices], axis=1)


def build_csr(edges, n_rows: int, n_cols: int, values=None) -> SparseMatrix:
    """Build a canonical CSR matrix from an edge list.

    Each edge ``(src, dst)`` becomes the entry at row ``src``, column
    ``dst`` with value 1.0 unless ``values`` supplies one per edge.
    Duplicate edges are an error, not merged. Entries given an explicit
    0.0 value are rejected (canonical CSR stores no zeros).
    """
    edge_arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if values is None:
        vals = np.ones(len(edge_arr), dtype=np.float64)
    else:
        vals = np.asarray(values, dtype=np.float64)
        if vals.shape != (len(edge_arr),):
            raise DimensionMismatch("one value per edge required")
        if np.any(vals == 0.0):
            raise DimensionMismatch("explicit zeros are not stored")
    if len(edge_arr):
        if edge_arr.min() < 0 or edge_arr[:, 0].max() >= n_rows or edge_arr[:, 1].max() >= n_cols:
            raise OutOfRange("edge endpoint outside matrix shape")
        keys = edge_arr[:, 0] * n_cols + edge_arr[:, 1]
        if len(np.unique(keys)) != len(keys):
            raise DuplicateEdge("duplicate edge in input")
        order = np.lexsort((edge_arr[:, 1], edge_arr[:, 0]))
        edge_arr, vals = edge_arr[order], vals[order]
    offsets = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(edge_arr[:, 0], minlength=n_rows), out=offsets[1:])
    return SparseMatrix(n_rows, n_cols, offsets, edge_arr[:, 1], vals)


def spmv(m: SparseMatrix, v: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product ``m @ v``."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (m.n_cols,):
        raise DimensionMismatch(f"vector length {v.shape} incompatible with {m.n_cols} columns")
    out = np.zeros(m.n_rows, dtype=np.float64)
    np.add.at(out, m.row_of_entry, m.values * v[m.col_indices])
    return out
