"""Chain maps attached to a commutation move, counted by pentagons,
and the hexagon homotopies relating their composites to the identity.

Both diagrams of a commuting pair are drawn in one combined picture:
the straight vertical line between the exchanged columns serves one
diagram, and a parallel curve crossing it exactly twice serves the
other.  The curve is realized rectilinearly with exact rational
coordinates: it runs 3/4 to the left of the line on the arc carrying
the left column's markings, 3/4 to the right on the complementary arc,
and jogs across at the two certificate heights.  Every counted region
is then a rectilinear polygon, and emptiness, marking counts, and the
convexity condition at the crossing corners reduce to exact
point-in-polygon tests (corner convexity is probed with four quarter
points around each crossing: a convex corner sees exactly one inside).

Wrapped regions (through either cut of the torus) are enumerated along
with planar ones; the chain-map and homotopy identities fail without
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from floergrid.floer import ChainElement, Exps, Perm
from floergrid.grid import GridDiagram, GridError, serialize_grid
from floergrid.moves import commutation_certificate


QUARTER = Fraction(1, 4)
PROBE = Fraction(1, 8)
Point = Tuple[Fraction, Fraction]


class CommutationPairError(GridError):
    """The two diagrams are not related by a single legal commutation."""


def _swap_cols(g: GridDiagram, k: int) -> GridDiagram:
    """Exchange the contents of columns k and k+1 (no legality check)."""
    swap = lambda c: k + 1 if c == k else (k if c == k + 1 else c)
    return GridDiagram(
        n=g.n,
        o_cols=tuple(swap(c) for c in g.o_cols),
        o_special=g.o_special,
        xs=frozenset((r, swap(c)) for r, c in g.xs),
        cobordism_mode=g.cobordism_mode,
    )


def _transpose(g: GridDiagram) -> GridDiagram:
    """Reflect across the southwest-northeast diagonal (rows <-> columns).

    This is an on-the-nose isomorphism of the whole construction: it
    fixes the lower-left/upper-right corner convention, the point
    pairing, and every marking count, so row-commutation maps are the
    column-commutation maps of the transposed diagrams.
    """
    o_cols = [0] * g.n
    o_special = [False] * g.n
    for r in range(1, g.n + 1):
        c = g.o_cols[r - 1]
        o_cols[c - 1] = r
        o_special[c - 1] = g.o_special[r - 1]
    return GridDiagram(
        n=g.n,
        o_cols=tuple(o_cols),
        o_special=tuple(o_special),
        xs=frozenset((c, r) for (r, c) in g.xs),
        cobordism_mode=g.cobordism_mode,
    )


def _transpose_element(g: GridDiagram, e: ChainElement) -> ChainElement:
    """Carry a chain element to the transposed diagram's complex.

    Generator permutations invert; the variable of the O in column c
    becomes the variable of column (row of that O) in the transpose.
    """
    terms = set()
    for exps, perm in e.terms:
        inv = [0] * len(perm)
        for r, c in enumerate(perm):
            inv[c] = r
        new_exps = [0] * g.n
        for c in range(g.n):
            new_exps[g.o_row_of_col(c + 1) - 1] = exps[c]
        terms.add((tuple(new_exps), tuple(inv)))
    return ChainElement(frozenset(terms))


@dataclass(frozen=True)
class CombinedDiagram:
    """The two commuting diagrams drawn over one set of markings.

    base is the diagram whose curve is the straight line x = line; the
    other diagram uses the offset curve.  cross_lo < cross_hi are the
    crossing heights, and inner_is_left records whether the heights in
    (cross_lo, cross_hi) belong to the left column of the pair.
    """

    base: GridDiagram
    other: GridDiagram
    line: int
    cross_lo: Fraction
    cross_hi: Fraction
    inner_is_left: bool

    @property
    def n(self) -> int:
        return self.base.n

    def gamma_offset(self, y: Fraction) -> Fraction:
        """x position of the offset curve at height y (not a crossing)."""
        ym = y % self.n
        inner = self.cross_lo < ym < self.cross_hi
        on_left_arc = inner == self.inner_is_left
        return self.line + (-Fraction(3, 4) if on_left_arc else Fraction(3, 4))

    def swap_exps(self, exps: Exps) -> Exps:
        """Translate variable exponents between the two column indexings."""
        out = list(exps)
        k = self.line - 1  # 0-indexed left cell column
        out[k], out[k + 1] = out[k + 1], out[k]
        return tuple(out)


def combine(a: GridDiagram, b: GridDiagram) -> Tuple[CombinedDiagram, bool]:
    """Build the combined diagram for a commuting pair.

    The picture is anchored on the canonical member of the pair (smaller
    serialization) so that both map directions share one geometry.
    Returns (combined, source_on_offset): the flag says whether diagram
    `a` is the one living on the offset curve.
    """
    if a.n != b.n:
        raise CommutationPairError("diagrams have different sizes")
    pair_k = None
    for k in range(1, a.n):
        if _swap_cols(a, k) == b:
            pair_k = k
            break
    if pair_k is None:
        raise CommutationPairError("diagrams do not differ by one adjacent column exchange")
    base, other, source_on_offset = (a, b, False)
    if serialize_grid(b) < serialize_grid(a):
        base, other, source_on_offset = (b, a, True)
    cert = commutation_certificate(base, pair_k, "cols")
    if cert is None:
        raise CommutationPairError(f"columns {pair_k},{pair_k + 1} are not legally commutable")
    if cert.degenerate:
        raise CommutationPairError(
            "commutation shares a marking row; pentagon maps need crossings away from markings"
        )
    e1, e2 = cert.e1, cert.e2
    if e1.denominator == 1:
        e1 += QUARTER
    if e2.denominator == 1:
        e2 += QUARTER
    if not e1 < e2:
        raise AssertionError("crossing heights collapsed")
    return (
        CombinedDiagram(
            base=base,
            other=other,
            line=pair_k,
            cross_lo=e1,
            cross_hi=e2,
            inner_is_left=cert.first_in_inner,
        ),
        source_on_offset,
    )


# --- exact rectilinear point location ----------------------------------


def _edges(verts: Sequence[Point]) -> List[Tuple[Point, Point]]:
    return [(verts[k], verts[(k + 1) % len(verts)]) for k in range(len(verts))]


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    (px, py), (ax, ay), (bx, by) = p, a, b
    if ax == bx:
        return px == ax and min(ay, by) <= py <= max(ay, by)
    return py == ay and min(ax, bx) <= px <= max(ax, bx)


def _inside(p: Point, edges) -> bool:
    """Strict interior test (even-odd rule; boundary points excluded)."""
    for a, b in edges:
        if _on_segment(p, a, b):
            return False
    px, py = p
    crossings = 0
    for (ax, ay), (bx, by) in edges:
        if ax == bx and ax > px and min(ay, by) <= py < max(ay, by):
            crossings ^= 1
    return crossings == 1


def _inside_torus(p: Point, edges, n: int) -> bool:
    px, py = p
    for kx in (-1, 0, 1, 2):
        for ky in (-1, 0, 1, 2):
            if _inside((px + kx * n, py + ky * n), edges):
                return True
    return False


def _convex_at(corner: Point, edges) -> bool:
    """Exactly one of the four probe quadrants lies inside."""
    cx, cy = corner
    hits = 0
    for dx in (-PROBE, PROBE):
        for dy in (-PROBE, PROBE):
            if _inside((cx + dx, cy + dy), edges):
                hits += 1
    return hits == 1


# --- region enumeration --------------------------------------------------


@dataclass(frozen=True)
class _Region:
    to_perm: Perm
    o_hits: Exps
    x_count: int
    orientation: int


def _shoelace_sign(verts: Sequence[Point]) -> int:
    total = Fraction(0)
    for k in range(len(verts)):
        (x1, y1), (x2, y2) = verts[k], verts[(k + 1) % len(verts)]
        total += x1 * y2 - x2 * y1
    return 1 if total > 0 else (-1 if total < 0 else 0)


# Counted regions carry one fixed boundary sense (corner cycle read
# counterclockwise); the mirrored candidates belong to the reversed maps
# and would break Maslov preservation.  Pinned by exhaustively checking
# the chain-map and homotopy identities over all commutable 4x4 pairs.
PENTAGON_ORIENT = -1
HEXAGON_ORIENT = -1


def _marking_cells(g: GridDiagram):
    """(O cells, X cells) as 0-indexed (row, col) pairs."""
    o_cells = [(r - 1, g.o_cols[r - 1] - 1) for r in range(1, g.n + 1)]
    x_cells = [(r - 1, c - 1) for (r, c) in sorted(g.xs)]
    return o_cells, x_cells


def _count_regions(
    cd: CombinedDiagram, perm: Perm, source_on_offset: bool, hexagon: bool
) -> List[_Region]:
    """All pentagons (or hexagons) out of one generator.

    Pentagons connect the source complex to the other diagram's complex;
    hexagons return to the source complex.  Candidates range over the
    second moving point, both vertical intervals, and both horizontal
    sides; each candidate polygon must pass the crossing-corner probe
    tests and contain no generator point strictly inside.
    """
    n = cd.n
    line = cd.line
    o_cells, x_cells = _marking_cells(cd.base)
    p_row = perm.index(line)
    out: List[_Region] = []
    crossings = (cd.cross_lo, cd.cross_hi)
    for q_row in range(n):
        if q_row == p_row:
            continue
        j = perm[q_row]
        to_perm = list(perm)
        to_perm[p_row], to_perm[q_row] = j, line
        to_perm = tuple(to_perm)
        p, q = p_row, q_row
        for wrapped in (False, True):
            y_lo, y_hi = (min(p, q), max(p, q)) if not wrapped else (max(p, q), min(p, q) + n)
            p_lift = p if y_lo <= p <= y_hi else p + n
            q_lift = q if y_lo <= q <= y_hi else q + n
            lifted = sorted(
                h + k * n
                for h in crossings
                for k in (0, 1, 2)
                if y_lo < h + k * n < y_hi
            )
            if hexagon and len(lifted) != 2:
                continue
            if not hexagon and not lifted:
                continue
            corner_sets = [tuple(lifted)] if hexagon else [(a,) for a in lifted]
            for corners, side in (
                (c, s) for c in corner_sets for s in ("right", "left")
            ):
                if side == "right":
                    big_j = j if j > line else j + n
                else:
                    big_j = j if j < line else j - n
                verts = _region_vertices(
                    cd, p_lift, q_lift, corners, big_j, source_on_offset, hexagon
                )
                edges = _edges(verts)
                if not all(_convex_at((Fraction(line), h), edges) for h in corners):
                    continue
                blocked = False
                for t in range(n):
                    if t in (p_row, q_row):
                        continue
                    if _inside_torus((Fraction(perm[t]), Fraction(t)), edges, n):
                        blocked = True
                        break
                if blocked:
                    continue
                o_hits = [0] * n
                for (r0, c0) in o_cells:
                    pt = (Fraction(2 * c0 + 1, 2), Fraction(2 * r0 + 1, 2))
                    if _inside_torus(pt, edges, n):
                        o_hits[c0] = 1
                x_count = 0
                for (r0, c0) in x_cells:
                    pt = (Fraction(2 * c0 + 1, 2), Fraction(2 * r0 + 1, 2))
                    if _inside_torus(pt, edges, n):
                        x_count += 1
                out.append(
                    _Region(
                        to_perm=to_perm,
                        o_hits=tuple(o_hits),
                        x_count=x_count,
                        orientation=_shoelace_sign(verts),
                    )
                )
    return out


def _offset_run(cd: CombinedDiagram, y_from: Fraction, y_to: Fraction) -> List[Point]:
    """Vertices along the offset curve from height y_from to y_to (lifted
    coordinates), jogging across the line at every crossing lift passed."""
    n = cd.n
    lo, hi = (y_from, y_to) if y_from < y_to else (y_to, y_from)
    stops = sorted(
        h + k * n
        for h in (cd.cross_lo, cd.cross_hi)
        for k in (-1, 0, 1, 2)
        if lo < h + k * n < hi
    )
    if y_from > y_to:
        stops = stops[::-1]
    verts: List[Point] = []
    cur = Fraction(y_from)
    for nxt in [Fraction(s) for s in stops] + [Fraction(y_to)]:
        off = cd.gamma_offset(Fraction(cur + nxt, 2))
        verts.append((off, cur))
        verts.append((off, nxt))
        cur = nxt
    return verts


def _region_vertices(
    cd: CombinedDiagram,
    p_lift: int,
    q_lift: int,
    corners: Sequence[Fraction],
    big_j: int,
    source_on_offset: bool,
    hexagon: bool,
) -> List[Point]:
    """Vertex loop of one candidate region in lifted coordinates."""
    i = Fraction(cd.line)
    P = Fraction(p_lift)
    Q = Fraction(q_lift)
    J = Fraction(big_j)
    if not hexagon:
        (a,) = corners
        a = Fraction(a)
        if not source_on_offset:
            return [(i, P), (i, a)] + _offset_run(cd, a, Q) + [(J, Q), (J, P)]
        return _offset_run(cd, P, a) + [(i, a), (i, Q), (J, Q), (J, P)]
    a_p, a_q = sorted((Fraction(c) for c in corners), key=lambda h: abs(h - P))
    if not source_on_offset:
        return (
            [(i, P), (i, a_p)]
            + _offset_run(cd, a_p, a_q)
            + [(i, a_q), (i, Q), (J, Q), (J, P)]
        )
    return (
        _offset_run(cd, P, a_p)
        + [(i, a_p), (i, a_q)]
        + _offset_run(cd, a_q, Q)
        + [(J, Q), (J, P)]
    )


@lru_cache(maxsize=None)
def _regions_cached(
    key: Tuple, perm: Perm, source_on_offset: bool, hexagon: bool
) -> Tuple[_Region, ...]:
    cd = _COMBINED_CACHE[key]
    return tuple(_count_regions(cd, perm, source_on_offset, hexagon))


_COMBINED_CACHE: Dict[Tuple, CombinedDiagram] = {}


def _combined_key(a: GridDiagram, b: GridDiagram) -> Tuple:
    cd, source_on_offset = combine(a, b)
    key = (serialize_grid(cd.base), serialize_grid(cd.other), cd.line)
    _COMBINED_CACHE[key] = cd
    return key, cd, source_on_offset


# --- public maps ----------------------------------------------------------


def pentagon_map(left: GridDiagram, right: GridDiagram, e: ChainElement) -> ChainElement:
    """The commutation chain map from the complex of `left` to that of
    `right`, counting empty pentagons in the combined diagram.

    Markings inside a pentagon are allowed; covered O's contribute
    variable exponents (recorded in the right diagram's column
    indexing).  The map preserves Maslov grading and is a chain map for
    the full filtered differential.
    """
    key, cd, source_on_offset = _combined_key(left, right)
    acc: Dict[Tuple[Exps, Perm], int] = {}
    for exps, perm in e.terms:
        exps_combined = exps if not source_on_offset else cd.swap_exps(exps)
        for region in _regions_cached(key, perm, source_on_offset, False):
            if PENTAGON_ORIENT and region.orientation != PENTAGON_ORIENT:
                continue
            total = tuple(x + h for x, h in zip(exps_combined, region.o_hits))
            out_exps = total if source_on_offset else cd.swap_exps(total)
            term = (out_exps, region.to_perm)
            acc[term] = acc.get(term, 0) ^ 1
    return ChainElement(frozenset(t for t, v in acc.items() if v))


def hexagon_homotopy(g: GridDiagram, other: GridDiagram, e: ChainElement) -> ChainElement:
    """The homotopy on the complex of `g` counting empty hexagons through
    both curves of the combined diagram for the pair (g, other)."""
    key, cd, source_on_offset = _combined_key(g, other)
    acc: Dict[Tuple[Exps, Perm], int] = {}
    for exps, perm in e.terms:
        exps_combined = exps if not source_on_offset else cd.swap_exps(exps)
        for region in _regions_cached(key, perm, source_on_offset, True):
            if HEXAGON_ORIENT and region.orientation != HEXAGON_ORIENT:
                continue
            total = tuple(x + h for x, h in zip(exps_combined, region.o_hits))
            out_exps = total if not source_on_offset else cd.swap_exps(total)
            term = (out_exps, region.to_perm)
            acc[term] = acc.get(term, 0) ^ 1
    return ChainElement(frozenset(t for t, v in acc.items() if v))


__all__ = [
    "CommutationPairError",
    "CombinedDiagram",
    "combine",
    "pentagon_map",
    "hexagon_homotopy",
]
