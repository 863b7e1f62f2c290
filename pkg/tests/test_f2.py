"""GF(2) linear algebra: examples and randomized properties."""

import itertools
import random

import pytest

from floergrid.f2 import BitMatrix, Subspace, kernel_basis, rank, relative_rank


def test_rank_empty_matrix():
    assert rank(BitMatrix((), 0)) == 0
    assert rank(BitMatrix((), 5)) == 0


def test_rank_identity():
    ident = BitMatrix.from_lists([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert rank(ident) == 3


def test_rank_equal_rows():
    m = BitMatrix.from_lists([[1, 1], [1, 1]], 2)
    assert rank(m) == 1


def test_kernel_identity_2x2():
    m = BitMatrix.from_lists([[1, 0], [0, 1]], 2)
    assert kernel_basis(m).dim == 0


def test_kernel_zero_matrix():
    m = BitMatrix((0, 0), 3)
    assert kernel_basis(m).dim == 3


def test_kernel_single_row():
    m = BitMatrix.from_lists([[1, 1]], 2)
    ker = kernel_basis(m)
    assert ker.dim == 1
    assert ker.basis.rows == (0b11,)


def test_kernel_vectors_annihilate():
    rng = random.Random(4)
    for _ in range(30):
        rows = tuple(rng.randrange(1 << 7) for _ in range(5))
        m = BitMatrix(rows, 7)
        ker = kernel_basis(m)
        for v in ker.basis.rows:
            assert m.mul_vec(v) == 0
        assert ker.dim == 7 - rank(m)


def test_relative_rank_examples():
    z = Subspace.from_rows([0b01], 2)  # span{(1,0)}
    b = Subspace.from_rows([0b11], 2)  # span{(1,1)}
    assert relative_rank(z, z) == 0
    assert relative_rank(z, b) == 1
    full = Subspace.from_rows([0b01, 0b10], 2)
    zero = Subspace.from_rows([], 2)
    assert relative_rank(full, zero) == 2


def test_relative_rank_dimension_mismatch():
    with pytest.raises(ValueError):
        relative_rank(Subspace.from_rows([1], 2), Subspace.from_rows([1], 3))


def test_rank_transpose_and_bounds():
    rng = random.Random(9)
    for _ in range(40):
        nr, nc = rng.randrange(0, 6), rng.randrange(0, 6)
        m = BitMatrix(tuple(rng.randrange(1 << nc) for _ in range(nr)), nc)
        r = rank(m)
        assert r == rank(m.transpose())
        assert r <= min(nr, nc)
        assert nc == r + kernel_basis(m).dim


def _span_vectors(sub: Subspace):
    vecs = set()
    for bits in itertools.product((0, 1), repeat=sub.dim):
        v = 0
        for b, row in zip(bits, sub.basis.rows):
            if b:
                v ^= row
        vecs.add(v)
    return vecs


def test_relative_rank_against_enumeration():
    rng = random.Random(17)
    for _ in range(25):
        dim = rng.randrange(1, 9)
        z = Subspace.from_rows([rng.randrange(1 << dim) for _ in range(3)], dim)
        b = Subspace.from_rows([rng.randrange(1 << dim) for _ in range(3)], dim)
        b_vecs = _span_vectors(b)
        quotient = {min(v ^ w for w in b_vecs) for v in _span_vectors(z)}
        # dim of (Z+B)/B by brute force: log2 of coset-representative count
        count = len(quotient)
        expected = count.bit_length() - 1
        assert 1 << expected == count
        assert relative_rank(z, b) == expected


def test_relative_rank_monotonicity():
    rng = random.Random(3)
    for _ in range(20):
        dim = rng.randrange(2, 10)
        z_rows = [rng.randrange(1 << dim) for _ in range(2)]
        z_big = Subspace.from_rows(z_rows + [rng.randrange(1 << dim)], dim)
        z = Subspace.from_rows(z_rows, dim)
        b_rows = [rng.randrange(1 << dim) for _ in range(2)]
        b = Subspace.from_rows(b_rows, dim)
        b_big = Subspace.from_rows(b_rows + [rng.randrange(1 << dim)], dim)
        assert relative_rank(z, b) <= relative_rank(z_big, b)
        assert relative_rank(z, b) >= relative_rank(z, b_big)


def test_subspace_contains():
    s = Subspace.from_rows([0b101, 0b011], 3)
    assert s.contains(0b101)
    assert s.contains(0b110)
    assert not s.contains(0b100)
