import numpy as np
import pytest

from ingrex.errors import DimensionMismatch, DuplicateEdge, OutOfRange
from ingrex.sparse import SparseMatrix, build_csr, spmv


def test_single_edge():
    m = build_csr([(0, 1)], 2, 2)
    assert m.row_offsets.tolist() == [0, 1, 1]
    assert m.col_indices.tolist() == [1]
    assert m.values.tolist() == [1.0]


def test_empty_graph():
    m = build_csr([], 3, 3)
    assert m.row_offsets.tolist() == [0, 0, 0, 0]
    assert m.col_indices.size == 0


def test_two_rows_one_entry_each():
    m = build_csr([(1, 0), (0, 1)], 2, 2)
    assert m.row_offsets.tolist() == [0, 1, 2]
    assert m.col_indices.tolist() == [1, 0]
    assert m.to_dense().tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_canonical_order_and_values():
    m = build_csr([(1, 2), (0, 3), (1, 0)], 2, 4, values=[5.0, 2.0, 7.0])
    assert m.col_indices.tolist() == [3, 0, 2]
    assert m.values.tolist() == [2.0, 7.0, 5.0]


def test_out_of_range_endpoint():
    with pytest.raises(OutOfRange):
        build_csr([(0, 2)], 2, 2)
    with pytest.raises(OutOfRange):
        build_csr([(2, 0)], 2, 2)


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdge):
        build_csr([(0, 1), (0, 1)], 2, 2)


def test_explicit_zero_rejected():
    with pytest.raises(DimensionMismatch):
        build_csr([(0, 1)], 2, 2, values=[0.0])


def test_spmv_identity():
    m = build_csr([(0, 0), (1, 1)], 2, 2)
    assert spmv(m, [3.0, 4.0]).tolist() == [3.0, 4.0]


def test_spmv_permutation():
    m = build_csr([(0, 1), (1, 0)], 2, 2)
    assert spmv(m, [1.0, 0.0]).tolist() == [0.0, 1.0]


def test_spmv_dimension_mismatch():
    m = build_csr([(0, 1)], 2, 2)
    with pytest.raises(DimensionMismatch):
        spmv(m, [1.0, 2.0, 3.0])


def test_spmv_matches_dense_oracle():
    rng = np.random.default_rng(0)
    for _ in range(60):
        n = int(rng.integers(1, 9))
        mask = rng.random((n, n)) < 0.4
        edges = [(i, j) for i in range(n) for j in range(n) if mask[i, j]]
        vals = rng.normal(size=len(edges))
        vals[vals == 0.0] = 1.0
        m = build_csr(edges, n, n, values=vals)
        v = rng.normal(size=n)
        assert np.max(np.abs(spmv(m, v) - m.to_dense() @ v)) < 1e-12


def test_matmat_and_rmatmat_match_dense():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n, k = int(rng.integers(1, 8)), int(rng.integers(1, 5))
        mask = rng.random((n, n)) < 0.5
        edges = [(i, j) for i in range(n) for j in range(n) if mask[i, j]]
        m = build_csr(edges, n, n)
        x = rng.normal(size=(n, k))
        dense = m.to_dense()
        assert np.allclose(m.matmat(x), dense @ x, atol=1e-12)
        assert np.allclose(m.rmatmat(x), dense.T @ x, atol=1e-12)


def test_transpose_round_trip():
    rng = np.random.default_rng(2)
    mask = rng.random((5, 7)) < 0.4
    edges = [(i, j) for i in range(5) for j in range(7) if mask[i, j]]
    m = build_csr(edges, 5, 7)
    t = m.transpose()
    assert np.array_equal(t.to_dense(), m.to_dense().T)
    assert np.array_equal(t.transpose().to_dense(), m.to_dense())


def test_invariant_checks_on_manual_construction():
    with pytest.raises(DuplicateEdge):
        SparseMatrix(1, 3, np.array([0, 2]), np.array([1, 1]), np.array([1.0, 1.0]))
    with pytest.raises(DimensionMismatch):
        SparseMatrix(1, 3, np.array([0, 2]), np.array([2, 1]), np.array([1.0, 1.0]))
    with pytest.raises(OutOfRange):
        SparseMatrix(1, 2, np.array([0, 1]), np.array([5]), np.array([1.0]))
