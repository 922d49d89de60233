from fractions import Fraction

import numpy as np
import pytest

from delta2n import chain_complex as cc
from delta2n.linalg import SparseRationalMatrix
from delta2n.theta_graphs import has_odd_automorphism, is_full_theta

# (n, degree) -> dimension, all pinned by the brute-force enumeration oracle
# in test_theta_graphs
DIMS = {
    (4, 6): 6, (4, 5): 4, (4, 4): 0,
    (5, 7): 60, (5, 6): 60, (5, 5): 10,
    (6, 8): 600, (6, 7): 720, (6, 6): 180,
}


@pytest.mark.parametrize("n,p,want", [(k[0], k[1], v) for k, v in DIMS.items()])
def test_basis_dimensions(n, p, want):
    assert cc.build_basis(n, p).dim == want


def test_basis_invariants():
    basis = cc.build_basis(5, 7)
    assert list(basis.graphs) == sorted(basis.graphs)
    assert len(set(basis.graphs)) == basis.dim
    for g in basis.graphs:
        assert is_full_theta(g)
        assert not has_odd_automorphism(g)
        assert g.num_edges == 8


def test_basis_n3_empty():
    # single degree-5 orbit carries an odd automorphism
    assert cc.build_basis(3, 5).dim == 0


def test_basis_rejects_bad_n():
    with pytest.raises(ValueError):
        cc.build_basis(1, 4)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_d_squared_is_zero(n):
    d_next = cc.boundary_matrix(n, n + 1)
    d_top = cc.boundary_matrix(n, n + 2)
    assert d_next.matmul(d_top).is_zero()


@pytest.mark.parametrize("n", [4, 5, 6])
def test_d_next_surjective(n):
    from delta2n.linalg import is_surjective

    assert is_surjective(cc.boundary_matrix(n, n + 1))


def test_boundary_entries_are_small_integers():
    d = cc.boundary_matrix(5, 7)
    assert d.shape == (60, 60)
    for _, v in d.entries():
        assert v.denominator == 1
        assert abs(v) <= 8


def test_rank_examples():
    assert cc.rank(SparseRationalMatrix(3, 3)) == 0
    eye = SparseRationalMatrix(4, 4, {(i, i): 1 for i in range(4)})
    assert cc.rank(eye) == 4
    assert cc.rank(cc.boundary_matrix(4, 6)) == 3


def test_kernel_basis_examples():
    eye = SparseRationalMatrix(3, 3, {(i, i): 1 for i in range(3)})
    assert cc.kernel_basis(eye).shape == (3, 0)
    row = SparseRationalMatrix(1, 2, {(0, 0): 1, (0, 1): 1})
    k = cc.kernel_basis(row)
    assert k.shape == (2, 1)
    assert k[0, 0] * 1 + k[1, 0] * 1 == 0 and not k.is_zero()


def test_kernel_of_d7_n5():
    d7 = cc.boundary_matrix(5, 7)
    k = cc.kernel_basis(d7)
    assert k.shape == (60, 15)
    assert d7.matmul(k).is_zero()


def test_build_complex_structure():
    cx = cc.build_complex(4)
    assert cx.basis(6).dim == 6 and cx.basis(5).dim == 4 and cx.basis(4).dim == 0
    assert cx.d(6).shape == (4, 6)
    assert cx.d(5).shape == (0, 4)


@pytest.mark.parametrize("n,want", [(4, (3, 1)), (5, (15, 5))])
def test_betti_small(n, want):
    assert cc.betti(n) == want


def test_betti_6():
    assert cc.betti(6) == (86, 26)


def test_betti_range():
    with pytest.raises(ValueError):
        cc.betti(3)
    with pytest.raises(ValueError):
        cc.betti(9)


def test_disk_cache_roundtrip(tmp_path):
    fresh = cc._build_matrix(4, 6)
    cc._MATRIX_MEMO.pop((4, 6), None)
    first = cc.boundary_matrix(4, 6, cache_dir=tmp_path)
    files = list(tmp_path.glob("boundary_n4_p6_*.txt"))
    assert len(files) == 1
    cc._MATRIX_MEMO.pop((4, 6), None)
    again = cc.boundary_matrix(4, 6, cache_dir=tmp_path)
    assert again == first == fresh


def test_cache_file_format(tmp_path):
    cc._MATRIX_MEMO.pop((4, 6), None)
    mat = cc.boundary_matrix(4, 6, cache_dir=tmp_path)
    (path,) = tmp_path.glob("*.txt")
    lines = path.read_text().splitlines()
    rows, cols, nnz = map(int, lines[0].split())
    assert (rows, cols) == mat.shape and nnz == mat.nnz
    r, c, frac = lines[1].split()
    num, den = frac.split("/")
    assert mat[int(r), int(c)] == Fraction(int(num), int(den))


def test_stale_cache_rebuilt(tmp_path):
    # wrong-shape file under the right name is ignored, not trusted
    path = cc._cache_path(tmp_path, 4, 6)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("2 2 1\n0 0 5/1\n")
    cc._MATRIX_MEMO.pop((4, 6), None)
    mat = cc.boundary_matrix(4, 6, cache_dir=tmp_path)
    assert mat.shape == (4, 6)
