"""Bit-packed linear algebra over GF(2).

Rows are Python ints used as bit vectors (bit j = column j), so a row
operation is a single int XOR and elimination runs word-parallel.
Pivoting is fixed left-to-right (lowest set bit first), which makes
reduced forms deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple


def _lowest_bit(v: int) -> int:
    """Index of the lowest set bit of a nonzero int."""
    return (v & -v).bit_length() - 1


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix with one int bit-row per matrix row."""

    rows: Tuple[int, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise ValueError("cols must be nonnegative")
        mask = (1 << self.cols) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_rows(cls, rows: Iterable[int], cols: int) -> "BitMatrix":
        return cls(tuple(rows), cols)

    @classmethod
    def from_lists(cls, rows: Iterable[Iterable[int]], cols: int) -> "BitMatrix":
        packed = []
        for row in rows:
            v = 0
            for j, bit in enumerate(row):
                if bit & 1:
                    v |= 1 << j
            packed.append(v)
        return cls(tuple(packed), cols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.rows):
            v = r
            while v:
                j = _lowest_bit(v)
                out[j] |= 1 << i
                v &= v - 1
        return BitMatrix(tuple(out), len(self.rows))

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch in stack")
        return BitMatrix(self.rows + other.rows, self.cols)

    def mul_vec(self, v: int) -> int:
        """Matrix-vector product M v with v a column bit vector."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & v).count("1") & 1:
                out |= 1 << i
        return out


@dataclass(frozen=True)
class Subspace:
    """A subspace of F2^ambient_dim given by a reduced row basis."""

    ambient_dim: int
    basis: BitMatrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise ValueError("basis width must equal ambient dimension")

    @classmethod
    def from_rows(cls, rows: Iterable[int], ambient_dim: int) -> "Subspace":
        reduced = _rref_rows(list(rows))
        return cls(ambient_dim, BitMatrix(tuple(reduced), ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def contains(self, v: int) -> bool:
        for row in self.basis.rows:
            if v and _lowest_bit(v) == _lowest_bit(row):
                v ^= row
        return v == 0


def _eliminate_rows(rows: List[int]) -> dict:
    """Forward-eliminate, returning {pivot column: reduced row}."""
    pivots: dict = {}
    for row in rows:
        while row:
            p = _lowest_bit(row)
            if p in pivots:
                row ^= pivots[p]
            else:
                pivots[p] = row
                break
    return pivots


def _rref_rows(rows: List[int]) -> List[int]:
    """Reduced row-echelon rows, sorted by pivot column."""
    pivots = _eliminate_rows(rows)
    for p in sorted(pivots, reverse=True):
        for q in list(pivots):
            if q != p and (pivots[q] >> p) & 1:
                pivots[q] ^= pivots[p]
    return [pivots[p] for p in sorted(pivots)]


def rank(m: BitMatrix) -> int:
    """Rank over GF(2) via bit-parallel Gaussian elimination."""
    return len(_eliminate_rows(list(m.rows)))


def rank_rows(rows: Iterable[int]) -> int:
    """Rank of a plain iterable of int bit-rows."""
    return len(_eliminate_rows(list(rows)))


def row_space(m: BitMatrix) -> Subspace:
    """Row space of m as a reduced Subspace."""
    return Subspace.from_rows(m.rows, m.cols)


def rref(m: BitMatrix) -> BitMatrix:
    """Reduced row-echelon form with zero rows dropped."""
    return BitMatrix(tuple(_rref_rows(list(m.rows))), m.cols)


def kernel_basis(m: BitMatrix) -> Subspace:
    """Right kernel {v : M v = 0} as a Subspace of F2^cols."""
    reduced = _rref_rows(list(m.rows))
    pivot_cols = [_lowest_bit(r) for r in reduced]
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for p, row in zip(pivot_cols, reduced):
            if (row >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return Subspace.from_rows(basis, m.cols)


def relative_rank(z: Subspace, b: Subspace) -> int:
    """dim((Z + B) / B), i.e. how much of Z survives modulo B."""
    if z.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    stacked = list(z.basis.rows) + list(b.basis.rows)
    return rank_rows(stacked) - b.dim


__all__ = [
    "BitMatrix",
    "Subspace",
    "rank",
    "rank_rows",
    "row_space",
    "rref",
    "kernel_basis",
    "relative_rank",
]
