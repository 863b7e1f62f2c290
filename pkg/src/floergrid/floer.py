"""Generators, gradings, and differentials of the grid chain complex.

A generator is a permutation: the point on lattice row r (0-indexed,
bottom-up) sits at column perm[r].  The full differential counts empty
toroidal rectangles, recording the O markings a rectangle covers as
exponents of the corresponding formal variables (indexed by column).
The hat differential additionally kills any term carrying a positive
exponent at a special (vertex) O; the associated-graded differential
also discards rectangles containing X markings.

All grading arithmetic is exact: planar point comparisons are done in
doubled integer coordinates, so half-integer bookkeeping never touches
floats.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from floergrid.grid import DEFAULT_SIZE_CAP, GridDiagram, GridError, weights


class SizeCapError(GridError):
    """Grid too large for generator enumeration without an override."""


Perm = Tuple[int, ...]
Exps = Tuple[int, ...]


def size_cap() -> int:
    raw = os.environ.get("FLOERGRID_MAX_N", "")
    if raw.strip().isdigit():
        return int(raw)
    return DEFAULT_SIZE_CAP


def check_size(g: GridDiagram, override: bool = False) -> None:
    cap = size_cap()
    if g.n > cap and not override:
        raise SizeCapError(
            f"grid size {g.n} exceeds the cap {cap} ({g.n}! generators); "
            "pass override or set FLOERGRID_MAX_N"
        )


@dataclass(frozen=True)
class Generator:
    """A generator with cached Maslov and planar Alexander gradings."""

    perm: Perm
    maslov: int
    alex: int


@dataclass(frozen=True)
class ChainElement:
    """A finite F2 combination of (exponent tuple, generator perm) pairs."""

    terms: FrozenSet[Tuple[Exps, Perm]]

    @classmethod
    def zero(cls) -> "ChainElement":
        return cls(frozenset())

    @classmethod
    def of(cls, perm: Perm, exps: Exps = None, n: int = None) -> "ChainElement":
        if exps is None:
            exps = (0,) * (n if n is not None else len(perm))
        return cls(frozenset({(tuple(exps), tuple(perm))}))

    def __add__(self, other: "ChainElement") -> "ChainElement":
        return ChainElement(self.terms ^ other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def times_monomial(self, exps: Exps) -> "ChainElement":
        return ChainElement(
            frozenset((tuple(a + b for a, b in zip(e, exps)), p) for e, p in self.terms)
        )

    def sorted_terms(self) -> List[Tuple[Exps, Perm]]:
        return sorted(self.terms)


# --- the planar pairing ----------------------------------------------------


def pairing(a_points: Iterable, b_points: Iterable) -> Fraction:
    """Half the number of strictly northeast/southwest comparable pairs.

    Arguments are weighted planar point collections: iterables of either
    (x, y) points (weight 1) or ((x, y), weight) pairs; the count extends
    bilinearly over the weights and is symmetric in its arguments.
    """

    def norm(points) -> List[Tuple[Fraction, Fraction, int]]:
        out = []
        for item in points:
            if len(item) == 2 and not isinstance(item[0], (tuple, list)):
                (x, y), w = item, 1
            else:
                (x, y), w = item
            out.append((Fraction(x), Fraction(y), int(w)))
        return out

    total = 0
    for ax, ay, aw in norm(a_points):
        for bx, by, bw in norm(b_points):
            if (ax < bx and ay < by) or (ax > bx and ay > by):
                total += aw * bw
    return Fraction(total, 2)


def _count2(a_pts: Sequence[Tuple[int, int]], b_pts: Sequence[Tuple[int, int]]) -> int:
    """Comparable ordered pairs between doubled-coordinate point lists."""
    total = 0
    for ax, ay in a_pts:
        for bx, by in b_pts:
            if (ax < bx and ay < by) or (ax > bx and ay > by):
                total += 1
    return total


@lru_cache(maxsize=None)
def _diagram_data(g: GridDiagram):
    """Doubled-coordinate marking data: (o_pts by column, x_pts, m by column,
    special flags by column, x cells 0-indexed)."""
    o_pts = [None] * g.n
    for r in range(1, g.n + 1):
        c = g.o_cols[r - 1]
        o_pts[c - 1] = (2 * c - 1, 2 * r - 1)
    x_pts = tuple((2 * c - 1, 2 * r - 1) for (r, c) in sorted(g.xs))
    m = weights(g)
    special = g.special_by_col()
    x_cells = tuple((r - 1, c - 1) for (r, c) in sorted(g.xs))
    return tuple(o_pts), x_pts, m, special, x_cells


def _gen_pts(perm: Perm) -> List[Tuple[int, int]]:
    return [(2 * c, 2 * r) for r, c in enumerate(perm)]


def maslov(g: GridDiagram, x) -> int:
    """Maslov grading of a generator (permutation or Generator)."""
    perm = x.perm if isinstance(x, Generator) else tuple(x)
    o_pts, _, _, _, _ = _diagram_data(g)
    pts = _gen_pts(perm)
    doubled = _count2(pts, pts) - 2 * _count2(pts, o_pts) + _count2(o_pts, o_pts)
    if doubled % 2:
        raise AssertionError("Maslov grading must be an integer")
    return doubled // 2 + 1


def alexander(g: GridDiagram, x) -> int:
    """Planar Alexander grading (absolute, pre-symmetrization)."""
    perm = x.perm if isinstance(x, Generator) else tuple(x)
    o_pts, x_pts, m, _, _ = _diagram_data(g)
    pts = _gen_pts(perm)
    doubled = _count2(pts, x_pts)
    for c0, opt in enumerate(o_pts):
        doubled -= m[c0] * _count2(pts, [opt])
    if doubled % 2:
        raise AssertionError("Alexander grading must be an integer on balanced diagrams")
    return doubled // 2


def maslov_term(g: GridDiagram, exps: Exps, perm: Perm) -> int:
    """Maslov grading of a monomial-generator term (each variable drops 2)."""
    return maslov(g, perm) - 2 * sum(exps)

def alexander_term(g: GridDiagram, exps: Exps, perm: Perm) -> int:
    """Alexander grading of a term (variable for O_i drops m_i)."""
    _, _, m, _, _ = _diagram_data(g)
    return alexander(g, perm) - sum(e * m[c] for c, e in enumerate(exps))


def generators(g: GridDiagram, override: bool = False) -> Iterator[Generator]:
    """All n! generators with cached gradings, in lexicographic order."""
    check_size(g, override)
    for perm in itertools.permutations(range(g.n)):
        yield Generator(perm, maslov(g, perm), alexander(g, perm))


# --- rectangles and differentials ------------------------------------------


@dataclass(frozen=True)
class Rectangle:
    """An empty toroidal rectangle out of a generator.

    Lattice data is 0-indexed: the rectangle spans columns
    [col_start, col_start + width] and rows [row_start, row_start + height]
    (coordinates mod n); rows holds the two moving row indices.
    """

    from_perm: Perm
    to_perm: Perm
    rows: Tuple[int, int]
    wrapped: bool
    col_start: int
    width: int
    row_start: int
    height: int
    o_hits: Exps
    x_count: int


def _span_contains(start: int, length: int, cell: int, n: int) -> bool:
    """Does the half-open cyclic cell run [start, start+length) hit cell?"""
    return (cell - start) % n < length


@lru_cache(maxsize=None)
def _rectangles(g: GridDiagram, perm: Perm) -> Tuple[Rectangle, ...]:
    n = g.n
    o_pts, _, _, _, x_cells = _diagram_data(g)
    ocol0 = [g.o_cols[r] - 1 for r in range(n)]
    out = []
    for r1 in range(n):
        for r2 in range(r1 + 1, n):
            c1, c2 = perm[r1], perm[r2]
            to_perm = list(perm)
            to_perm[r1], to_perm[r2] = c2, c1
            to_perm = tuple(to_perm)
            for wrapped in (False, True):
                if not wrapped:
                    row_start, height = r1, r2 - r1
                    col_start = c1
                    width = (c2 - c1) % n
                else:
                    row_start, height = r2, r1 + n - r2
                    col_start = c2
                    width = (c1 - c2) % n
                empty = True
                for t in range(n):
                    if t in (r1, r2):
                        continue
                    if (t - row_start) % n < height and 0 < (perm[t] - col_start) % n < width:
                        empty = False
                        break
                if not empty:
                    continue
                o_hits = [0] * n
                x_count = 0
                for dr in range(height):
                    cell_row = (row_start + dr) % n
                    oc = ocol0[cell_row]
                    if _span_contains(col_start, width, oc, n):
                        o_hits[oc] = 1
                for (xr, xc) in x_cells:
                    if _span_contains(row_start, height, xr, n) and _span_contains(
                        col_start, width, xc, n
                    ):
                        x_count += 1
                out.append(
                    Rectangle(
                        from_perm=perm,
                        to_perm=to_perm,
                        rows=(r1, r2),
                        wrapped=wrapped,
                        col_start=col_start,
                        width=width,
                        row_start=row_start,
                        height=height,
                        o_hits=tuple(o_hits),
                        x_count=x_count,
                    )
                )
    return tuple(out)


def empty_rectangles(g: GridDiagram, x) -> List[Rectangle]:
    """All empty toroidal rectangles out of a generator."""
    perm = x.perm if isinstance(x, Generator) else tuple(x)
    return list(_rectangles(g, perm))


def _differential(g: GridDiagram, e: ChainElement, hat: bool, x_free_only: bool) -> ChainElement:
    _, _, _, special, _ = _diagram_data(g)
    acc: Dict[Tuple[Exps, Perm], int] = {}
    for exps, perm in e.terms:
        for rect in _rectangles(g, perm):
            if x_free_only and rect.x_count:
                continue
            new_exps = tuple(a + b for a, b in zip(exps, rect.o_hits))
            if hat and any(v and special[c] for c, v in enumerate(new_exps)):
                continue
            key = (new_exps, rect.to_perm)
            acc[key] = acc.get(key, 0) ^ 1
    return ChainElement(frozenset(k for k, v in acc.items() if v))


def d_minus(g: GridDiagram, e: ChainElement) -> ChainElement:
    """Full filtered differential: all empty rectangles, O's as exponents."""
    return _differential(g, e, hat=False, x_free_only=False)


def d_hat(g: GridDiagram, e: ChainElement) -> ChainElement:
    """Hat differential: drop every image term with a positive exponent
    at a special O."""
    return _differential(g, e, hat=True, x_free_only=False)


def d_graded(g: GridDiagram, e: ChainElement) -> ChainElement:
    """Associated-graded differential: X-free rectangles only."""
    return _differential(g, e, hat=True, x_free_only=True)


def alexander_relative(g: GridDiagram, x, y) -> int:
    """Relative Alexander grading via a chain of (not necessarily empty)
    rectangles factoring one permutation into the other."""
    perm_x = x.perm if isinstance(x, Generator) else tuple(x)
    perm_y = y.perm if isinstance(y, Generator) else tuple(y)
    if sorted(perm_x) != sorted(perm_y):
        raise GridError("generators live on different grids")
    n = g.n
    _, _, m, _, x_cells = _diagram_data(g)
    ocol0 = [g.o_cols[r] - 1 for r in range(n)]
    total = 0
    cur = list(perm_x)
    for r1 in range(n):
        if cur[r1] == perm_y[r1]:
            continue
        r2 = cur.index(perm_y[r1], r1 + 1)
        # one (possibly non-empty) rectangle for the transposition r1<->r2,
        # using the non-wrapped candidate
        c1, c2 = cur[r1], cur[r2]
        row_start, height = r1, r2 - r1
        col_start, width = c1, (c2 - c1) % n
        x_hits = sum(
            1
            for (xr, xc) in x_cells
            if (xr - row_start) % n < height and (xc - col_start) % n < width
        )
        o_sum = 0
        for dr in range(height):
            oc = ocol0[(row_start + dr) % n]
            if (oc - col_start) % n < width:
                o_sum += m[oc]
        total += x_hits - o_sum
        cur[r1], cur[r2] = cur[r2], cur[r1]
    return total


__all__ = [
    "SizeCapError",
    "Generator",
    "ChainElement",
    "pairing",
    "maslov",
    "alexander",
    "maslov_term",
    "alexander_term",
    "generators",
    "Rectangle",
    "empty_rectangles",
    "d_minus",
    "d_hat",
    "d_graded",
    "alexander_relative",
    "size_cap",
    "check_size",
]
