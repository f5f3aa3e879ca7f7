"""Dual-view sparse store: every mutation checked against a dense shadow."""

import numpy as np
import pytest

from pslp.sparse import SparseDualMatrix, ZERO_DROP_TOL


def build(m, n, entries):
    return SparseDualMatrix.build(m, n, entries)


def test_build_basic_views():
    mat = build(1, 2, [(0, 0, 1.0), (0, 1, 2.0)])
    assert sorted(mat.row_entries(0)) == [(0, 1.0), (1, 2.0)]
    assert mat.col_entries(0) == [(0, 1.0)]
    assert mat.col_entries(1) == [(0, 2.0)]
    assert mat.nnz == 2


def test_build_sums_duplicates():
    mat = build(1, 1, [(0, 0, 1.0), (0, 0, 2.0)])
    assert mat.get(0, 0) == 3.0
    assert mat.nnz == 1


def test_build_drops_tiny_values():
    mat = build(1, 2, [(0, 0, 1e-300), (0, 1, 1.0)])
    assert mat.get(0, 0) == 0.0
    assert mat.nnz == 1


def test_build_rejects_out_of_range():
    with pytest.raises(IndexError):
        build(1, 1, [(0, 5, 1.0)])
    with pytest.raises(IndexError):
        build(1, 1, [(2, 0, 1.0)])


def test_delete_row_singleton_returns_column():
    mat = build(2, 2, [(0, 1, 4.0), (1, 0, 1.0)])
    removed = mat.delete_row(0)
    assert removed == [(1, 4.0)]
    assert not mat.row_is_alive(0)
    assert mat.col_entries(1) == []


def test_delete_col_empty_returns_nothing():
    mat = build(1, 2, [(0, 0, 1.0)])
    assert mat.delete_col(1) == []


def test_delete_row_shrinks_each_column_once():
    mat = build(2, 3, [(0, 0, 1.0), (0, 1, 2.0), (0, 2, 3.0), (1, 0, 5.0)])
    before = [mat.col_nnz(k) for k in range(3)]
    mat.delete_row(0)
    after = [mat.col_nnz(k) for k in range(3)]
    assert [b - a for b, a in zip(before, after)] == [1, 1, 1]


def test_double_delete_raises():
    mat = build(1, 1, [(0, 0, 1.0)])
    mat.delete_row(0)
    with pytest.raises(ValueError):
        mat.delete_row(0)


def test_add_scaled_row_creates_fill_in():
    mat = build(2, 2, [(0, 0, 1.0), (1, 1, 2.0)])
    mat.add_scaled_row(1, 0, 0.5)
    assert sorted(mat.row_entries(0)) == [(0, 1.0), (1, 1.0)]


def test_add_scaled_row_exact_cancellation():
    mat = build(2, 1, [(0, 0, 1.0), (1, 0, 2.0)])
    mat.add_scaled_row(1, 0, -0.5)
    assert mat.row_entries(0) == []
    assert mat.col_entries(0) == [(1, 2.0)]


def test_add_scaled_row_matches_dense(rng):
    for _ in range(40):
        m, n = 20, 20
        dense = np.zeros((m, n))
        entries = []
        for _ in range(80):
            i, k = rng.integers(0, m), rng.integers(0, n)
            v = float(rng.integers(-8, 9)) or 1.0
            dense[i, k] += v
            entries.append((int(i), int(k), v))
        dense[np.abs(dense) <= ZERO_DROP_TOL] = 0.0
        mat = build(m, n, entries)
        src, dst = rng.choice(m, size=2, replace=False)
        lam = float(rng.integers(-3, 4)) or 1.0
        mat.add_scaled_row(int(src), int(dst), lam)
        dense[dst] += lam * dense[src]
        dense[dst, np.abs(dense[dst]) <= ZERO_DROP_TOL] = 0.0
        np.testing.assert_allclose(mat.to_dense(), dense, atol=1e-12)
        mat.check_consistency()


def test_set_value_to_zero_removes_entry():
    mat = build(1, 1, [(0, 0, 1.0)])
    mat.set_value(0, 0, 0.0)
    assert mat.row_entries(0) == []
    assert mat.col_entries(0) == []
    assert mat.nnz == 0


def test_set_value_creates_entry():
    mat = build(1, 2, [(0, 0, 1.0)])
    mat.set_value(0, 1, 3.0)
    assert mat.get(0, 1) == 3.0
    assert (0, 3.0) in mat.col_entries(1)


def test_matvec_rmatvec():
    mat = build(2, 3, [(0, 0, 1.0), (0, 2, -2.0), (1, 1, 3.0)])
    x = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(mat.matvec(x), [-5.0, 6.0])
    y = np.array([1.0, -1.0])
    np.testing.assert_allclose(mat.rmatvec(y), [1.0, -3.0, -2.0])


def test_compact_identity_when_nothing_deleted():
    mat = build(2, 2, [(0, 0, 1.0), (1, 1, 2.0)])
    new, row_map, col_map = mat.compact()
    np.testing.assert_array_equal(row_map, [0, 1])
    np.testing.assert_array_equal(col_map, [0, 1])
    np.testing.assert_allclose(new.to_dense(), mat.to_dense())


def test_compact_all_rows_deleted():
    mat = build(2, 2, [(0, 0, 1.0), (1, 1, 2.0)])
    mat.delete_row(0)
    mat.delete_row(1)
    new, row_map, col_map = mat.compact()
    assert new.num_rows == 0
    assert new.num_cols == 2
    np.testing.assert_array_equal(row_map, [-1, -1])


def test_compact_matches_filtered_dense(rng):
    m, n = 12, 9
    entries = [
        (int(i), int(k), float(rng.integers(1, 5)))
        for i in range(m)
        for k in range(n)
        if rng.random() < 0.4
    ]
    mat = build(m, n, entries)
    dead_rows = sorted(rng.choice(m, size=4, replace=False).tolist())
    dead_cols = sorted(rng.choice(n, size=3, replace=False).tolist())
    for i in dead_rows:
        mat.delete_row(i)
    for k in dead_cols:
        mat.delete_col(k)
    new, row_map, col_map = mat.compact()
    keep_r = [i for i in range(m) if i not in dead_rows]
    keep_c = [k for k in range(n) if k not in dead_cols]
    expect = mat.to_dense()[np.ix_(keep_r, keep_c)]
    np.testing.assert_allclose(new.to_dense(), expect)
    for old, new_i in enumerate(row_map):
        assert (new_i == -1) == (old in dead_rows)


def fuzz_ops(num_ops, seed):
    """Random op stream mirrored on a dense shadow; consistency re-checked."""
    rng = np.random.default_rng(seed)
    m, n = 15, 12
    dense = np.zeros((m, n))
    entries = []
    for _ in range(60):
        i, k = int(rng.integers(0, m)), int(rng.integers(0, n))
        v = float(rng.integers(-6, 7)) or 2.0
        dense[i, k] += v
        entries.append((i, k, v))
    dense[np.abs(dense) <= ZERO_DROP_TOL] = 0.0
    mat = SparseDualMatrix.build(m, n, entries)
    row_alive = [True] * m
    col_alive = [True] * n

    for step in range(num_ops):
        op = rng.integers(0, 10)
        if op <= 4:
            live = [i for i in range(m) if row_alive[i]]
            livec = [k for k in range(n) if col_alive[k]]
            if not live or not livec:
                continue
            i = int(rng.choice(live))
            k = int(rng.choice(livec))
            v = float(rng.integers(-6, 7))
            mat.set_value(i, k, v)
            dense[i, k] = v if abs(v) > ZERO_DROP_TOL else 0.0
        elif op <= 6:
            live = [i for i in range(m) if row_alive[i]]
            if len(live) < 2:
                continue
            src, dst = rng.choice(live, size=2, replace=False)
            lam = float(rng.integers(-2, 3)) or 1.0
            mat.add_scaled_row(int(src), int(dst), lam)
            dense[dst] += lam * dense[src]
            dense[dst, np.abs(dense[dst]) <= ZERO_DROP_TOL] = 0.0
        elif op == 7:
            live = [i for i in range(m) if row_alive[i]]
            if len(live) <= 2:
                continue
            i = int(rng.choice(live))
            mat.delete_row(i)
            row_alive[i] = False
            dense[i] = 0.0
        elif op == 8:
            live = [k for k in range(n) if col_alive[k]]
            if len(live) <= 2:
                continue
            k = int(rng.choice(live))
            mat.delete_col(k)
            col_alive[k] = False
            dense[:, k] = 0.0
        else:
            mat.check_consistency()
            np.testing.assert_allclose(mat.to_dense(), dense, atol=1e-9)
    mat.check_consistency()
    np.testing.assert_allclose(mat.to_dense(), dense, atol=1e-9)
    assert mat.nnz == int(np.count_nonzero(dense))


def test_fuzz_against_dense_shadow():
    for seed in range(4):
        fuzz_ops(2500, seed)
