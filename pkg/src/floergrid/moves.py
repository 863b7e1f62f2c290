"""Grid moves: cyclic permutation, commutation, (de)stabilization, and
the cobordism moves (birth, death, X-saddle, O-saddle).

Moves are pure: apply_move returns a new diagram and re-validates it.
Adjacent-column (row) commutation is decided by an arc-separation test
on the shared circle: the two columns' marking heights must occupy two
closed arcs with disjoint interiors and a common pair of endpoints,
where an endpoint may sit at a marking height only if both columns hold
a marking in that row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

from floergrid.grid import GridDiagram, GridError, validate


class IllegalMoveError(GridError):
    """Raised when a move's legality clause fails; names the clause."""


MOVE_KINDS = {
    "cyclic-row": 1,
    "cyclic-col": 1,
    "commute-cols": 1,
    "commute-rows": 1,
    "stabilize-row": 2,
    "stabilize-col": 2,
    "destabilize": 2,
    "birth": 2,
    "death": 2,
    "xsaddle": 2,
    "osaddle": 2,
    "renumber": None,
}

ISOTOPY_KINDS = {
    "cyclic-row",
    "cyclic-col",
    "commute-cols",
    "commute-rows",
    "stabilize-row",
    "stabilize-col",
    "destabilize",
    "renumber",
}


@dataclass(frozen=True)
class GridMove:
    """A single grid move, stored as its script-line form."""

    kind: str
    args: Tuple = ()

    def __post_init__(self):
        if self.kind not in MOVE_KINDS:
            raise IllegalMoveError(f"unknown move kind {self.kind!r}")

    def to_line(self) -> str:
        return " ".join([self.kind] + [str(a) for a in self.args])

    @property
    def is_isotopy(self) -> bool:
        return self.kind in ISOTOPY_KINDS


def parse_move(line: str) -> GridMove:
    parts = line.split()
    if not parts:
        raise IllegalMoveError("empty move line")
    kind = parts[0].lower()
    if kind not in MOVE_KINDS:
        raise IllegalMoveError(f"unknown move kind {parts[0]!r}")
    rest = parts[1:]
    if kind in ("cyclic-row", "cyclic-col"):
        choices = ("top", "bottom") if kind == "cyclic-row" else ("left", "right")
        if len(rest) != 1 or rest[0].lower() not in choices:
            raise IllegalMoveError(f"{kind} expects one of {choices}")
        return GridMove(kind, (rest[0].lower(),))
    if kind == "renumber":
        try:
            perm = tuple(int(p) for p in rest)
        except ValueError:
            raise IllegalMoveError("renumber expects integers") from None
        return GridMove(kind, perm)
    want = MOVE_KINDS[kind]
    try:
        nums = tuple(int(p) for p in rest)
    except ValueError:
        raise IllegalMoveError(f"{kind} expects integer arguments") from None
    if len(nums) != want:
        raise IllegalMoveError(f"{kind} expects {want} integer argument(s)")
    return GridMove(kind, nums)


def parse_move_script(text: str) -> List[GridMove]:
    moves = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            moves.append(parse_move(line))
    return moves


# --- commutation legality -------------------------------------------------


def _lane_heights(g: GridDiagram, index: int, axis: str) -> Set[Fraction]:
    """Heights (circle positions) of the markings in one column or row."""
    out: Set[Fraction] = set()
    if axis == "cols":
        r = g.o_row_of_col(index)
        out.add(Fraction(2 * r - 1, 2))
        for r in g.xs_in_col(index):
            out.add(Fraction(2 * r - 1, 2))
    else:
        c = g.o_cols[index - 1]
        out.add(Fraction(2 * c - 1, 2))
        for c in g.xs_in_row(index):
            out.add(Fraction(2 * c - 1, 2))
    return out


@dataclass(frozen=True)
class CommutationCertificate:
    """Witness for a legal commutation.

    e1 < e2 are the shared arc endpoints on the circle of circumference n;
    first_in_inner says whether the markings of the first lane (column i /
    row i) occupy the inner closed arc [e1, e2], the second lane then
    occupying the complementary closed arc.  degenerate flags endpoints
    that sit at a marking height shared by both lanes.
    """

    n: int
    e1: Fraction
    e2: Fraction
    first_in_inner: bool
    degenerate: bool

    def first_arc_contains(self, h: Fraction) -> bool:
        inner = self.e1 <= h % self.n <= self.e2
        return inner if self.first_in_inner else not inner


def commutation_certificate(
    g: GridDiagram, index: int, axis: str = "cols", strict: bool = False
) -> Optional[CommutationCertificate]:
    """Find an arc-separation witness for commuting lanes index, index+1.

    Returns None when the lanes' marking heights interleave.  With
    strict=True, shared marking-height endpoints are not allowed at all.
    """
    if axis not in ("cols", "rows"):
        raise ValueError("axis must be 'cols' or 'rows'")
    if not 1 <= index <= g.n - 1:
        raise IllegalMoveError(f"commute index {index} out of range 1..{g.n - 1}")
    ha = _lane_heights(g, index, axis)
    hb = _lane_heights(g, index + 1, axis)
    shared = ha & hb
    heights = sorted(ha | hb)
    n = g.n
    candidates: List[Fraction] = []
    for k, h in enumerate(heights):
        nxt = heights[(k + 1) % len(heights)] + (n if k + 1 == len(heights) else 0)
        candidates.append(Fraction(h + nxt, 2) % n)
    if not strict:
        candidates.extend(sorted(shared))
    candidates = sorted(set(candidates))
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            e1, e2 = candidates[i], candidates[j]
            inner = [h for h in (ha | hb) if e1 <= h <= e2]
            outer = [h for h in (ha | hb) if h <= e1 or h >= e2]
            if all(h in inner for h in ha) and all(h in outer for h in hb):
                return CommutationCertificate(n, e1, e2, True, bool({e1, e2} & shared))
            if all(h in outer for h in ha) and all(h in inner for h in hb):
                return CommutationCertificate(n, e1, e2, False, bool({e1, e2} & shared))
    return None


def commutation_legal(g: GridDiagram, index: int, axis: str = "cols", strict: bool = False) -> bool:
    return commutation_certificate(g, index, axis, strict) is not None


# --- individual moves -----------------------------------------------------


def _rebuild(
    g: GridDiagram,
    n: int,
    o_cells: Sequence[Tuple[int, int, bool]],
    xs: Sequence[Tuple[int, int]],
    move: GridMove,
) -> GridDiagram:
    o_cols = [0] * n
    o_special = [False] * n
    seen_rows = set()
    for r, c, special in o_cells:
        if r in seen_rows:
            raise IllegalMoveError(f"{move.kind}: two O markings end up in row {r}")
        seen_rows.add(r)
        o_cols[r - 1] = c
        o_special[r - 1] = special
    try:
        out = GridDiagram(
            n=n,
            o_cols=tuple(o_cols),
            o_special=tuple(o_special),
            xs=frozenset(xs),
            cobordism_mode=g.cobordism_mode,
        )
    except GridError as exc:
        raise IllegalMoveError(f"{move.kind}: {exc}") from None
    bad = validate(out)
    if bad:
        raise IllegalMoveError(f"{move.kind} breaks diagram invariants: " + "; ".join(map(str, bad)))
    return out


def _o_cells(g: GridDiagram) -> List[Tuple[int, int, bool]]:
    return [(r, g.o_cols[r - 1], g.o_special[r - 1]) for r in range(1, g.n + 1)]


def apply_move(g: GridDiagram, move: GridMove) -> GridDiagram:
    """Apply one move, checking its legality clause and revalidating."""
    kind = move.kind
    n = g.n
    if kind == "cyclic-row":
        up = move.args[0] == "top"
        if up:
            row_map = lambda r: 1 if r == n else r + 1
        else:
            row_map = lambda r: n if r == 1 else r - 1
        return _rebuild(
            g,
            n,
            [(row_map(r), c, s) for r, c, s in _o_cells(g)],
            [(row_map(r), c) for r, c in g.xs],
            move,
        )
    if kind == "cyclic-col":
        left = move.args[0] == "left"
        if left:
            col_map = lambda c: n if c == 1 else c - 1
        else:
            col_map = lambda c: 1 if c == n else c + 1
        return _rebuild(
            g,
            n,
            [(r, col_map(c), s) for r, c, s in _o_cells(g)],
            [(r, col_map(c)) for r, c in g.xs],
            move,
        )
    if kind in ("commute-cols", "commute-rows"):
        (i,) = move.args
        axis = "cols" if kind == "commute-cols" else "rows"
        if commutation_certificate(g, i, axis) is None:
            raise IllegalMoveError(
                f"{kind} {i}: marking heights of lanes {i} and {i + 1} interleave (no separating arcs)"
            )
        if axis == "cols":
            swap = lambda c: i + 1 if c == i else (i if c == i + 1 else c)
            return _rebuild(
                g,
                n,
                [(r, swap(c), s) for r, c, s in _o_cells(g)],
                [(r, swap(c)) for r, c in g.xs],
                move,
            )
        swap = lambda r: i + 1 if r == i else (i if r == i + 1 else r)
        return _rebuild(
            g,
            n,
            [(swap(r), c, s) for r, c, s in _o_cells(g)],
            [(swap(r), c) for r, c in g.xs],
            move,
        )
    if kind in ("stabilize-row", "stabilize-col"):
        r0, c0 = move.args
        if (r0, c0) not in g.xs:
            raise IllegalMoveError(f"{kind}: cell ({r0},{c0}) holds no X marking")
        # New row directly above row r0 (index r0+1), new column directly
        # to the left of column c0 (index c0); same insertion rule both axes.
        row_map = lambda r: r if r <= r0 else r + 1
        col_map = lambda c: c if c < c0 else c + 1
        o_cells = [(row_map(r), col_map(c), s) for r, c, s in _o_cells(g)]
        o_cells.append((r0 + 1, c0, False))
        xs = [(row_map(r), col_map(c)) for r, c in g.xs if (r, c) != (r0, c0)]
        xs.extend([(r0, c0), (r0 + 1, c0 + 1)])
        return _rebuild(g, n + 1, o_cells, xs, move)
    if kind == "destabilize":
        r0, c0 = move.args
        if r0 + 1 > n or c0 + 1 > n:
            raise IllegalMoveError("destabilize: 2x2 square exceeds the grid")
        if (r0, c0) not in g.xs or (r0 + 1, c0 + 1) not in g.xs:
            raise IllegalMoveError(
                f"destabilize: expected X markings at ({r0},{c0}) and ({r0 + 1},{c0 + 1})"
            )
        if g.o_cols[r0] != c0:
            raise IllegalMoveError(f"destabilize: expected the O of row {r0 + 1} in column {c0}")
        if g.o_special[r0]:
            raise IllegalMoveError("destabilize: the stabilization O must be standard")
        if g.xs_in_row(r0 + 1) != [c0 + 1]:
            raise IllegalMoveError(f"destabilize: row {r0 + 1} carries markings beyond the pattern")
        if g.xs_in_col(c0) != [r0]:
            raise IllegalMoveError(f"destabilize: column {c0} carries markings beyond the pattern")
        row_map = lambda r: r if r <= r0 else r - 1
        col_map = lambda c: c if c < c0 else c - 1
        o_cells = [
            (row_map(r), col_map(c), s) for r, c, s in _o_cells(g) if (r, c) != (r0 + 1, c0)
        ]
        xs = [
            (row_map(r), col_map(c))
            for r, c in g.xs
            if (r, c) not in ((r0, c0), (r0 + 1, c0 + 1))
        ]
        xs.append((r0, c0))
        return _rebuild(g, n - 1, o_cells, xs, move)
    if kind == "birth":
        r0, c0 = move.args
        if not g.cobordism_mode:
            raise IllegalMoveError("birth requires cobordism mode (X and O share the new cell)")
        if not (1 <= r0 <= n + 1 and 1 <= c0 <= n + 1):
            raise IllegalMoveError(f"birth: insertion cell ({r0},{c0}) out of range")
        row_map = lambda r: r if r < r0 else r + 1
        col_map = lambda c: c if c < c0 else c + 1
        o_cells = [(row_map(r), col_map(c), s) for r, c, s in _o_cells(g)]
        o_cells.append((r0, c0, False))
        xs = [(row_map(r), col_map(c)) for r, c in g.xs]
        xs.append((r0, c0))
        return _rebuild(g, n + 1, o_cells, xs, move)
    if kind == "death":
        r0, c0 = move.args
        if g.o_cols[r0 - 1] != c0 or (r0, c0) not in g.xs:
            raise IllegalMoveError(f"death: cell ({r0},{c0}) must hold both an X and an O")
        if g.o_special[r0 - 1]:
            raise IllegalMoveError(
                "death: the dying O must be standard (special-O deaths follow a different convention)"
            )
        if g.xs_in_row(r0) != [c0]:
            raise IllegalMoveError(f"death: row {r0} holds more than one X")
        if g.xs_in_col(c0) != [r0]:
            raise IllegalMoveError(f"death: column {c0} holds more than one X")
        row_map = lambda r: r if r < r0 else r - 1
        col_map = lambda c: c if c < c0 else c - 1
        o_cells = [
            (row_map(r), col_map(c), s) for r, c, s in _o_cells(g) if (r, c) != (r0, c0)
        ]
        xs = [(row_map(r), col_map(c)) for r, c in g.xs if (r, c) != (r0, c0)]
        return _rebuild(g, n - 1, o_cells, xs, move)
    if kind == "xsaddle":
        r0, c0 = move.args
        return _saddle(g, move, r0, c0, want="x")
    if kind == "osaddle":
        r0, c0 = move.args
        return _saddle(g, move, r0, c0, want="o")
    if kind == "renumber":
        perm = move.args
        if sorted(perm) != list(range(1, n + 1)):
            raise IllegalMoveError("renumber: not a permutation of 1..n")
        return g  # marking labels are positional; renumbering is geometric identity
    raise IllegalMoveError(f"unknown move kind {kind!r}")


def _cell_markings(g: GridDiagram, r: int, c: int) -> List[str]:
    out = []
    if g.o_cols[r - 1] == c:
        out.append("O")
    if (r, c) in g.xs:
        out.append("X")
    return out


def _saddle(g: GridDiagram, move: GridMove, r0: int, c0: int, want: str) -> GridDiagram:
    n = g.n
    if r0 + 1 > n or c0 + 1 > n:
        raise IllegalMoveError(f"{move.kind}: 2x2 square exceeds the grid")
    for (r, c) in ((r0, c0), (r0 + 1, c0 + 1)):
        if _cell_markings(g, r, c):
            raise IllegalMoveError(f"{move.kind}: cell ({r},{c}) must be empty")
    if want == "x":
        if (r0 + 1, c0) not in g.xs or (r0, c0 + 1) not in g.xs:
            raise IllegalMoveError(
                f"xsaddle: expected X markings in the upper-left ({r0 + 1},{c0}) "
                f"and lower-right ({r0},{c0 + 1}) cells"
            )
        xs = [p for p in g.xs if p not in ((r0 + 1, c0), (r0, c0 + 1))]
        xs.extend([(r0, c0), (r0 + 1, c0 + 1)])
        return _rebuild(g, n, _o_cells(g), xs, move)
    if g.o_cols[r0] != c0 or not g.o_special[r0]:
        raise IllegalMoveError(f"osaddle: expected a special O in the upper-left cell ({r0 + 1},{c0})")
    if g.o_cols[r0 - 1] != c0 + 1 or g.o_special[r0 - 1]:
        raise IllegalMoveError(
            f"osaddle: expected a standard O in the lower-right cell ({r0},{c0 + 1})"
        )
    o_cells = [(r, c, s) for r, c, s in _o_cells(g) if r not in (r0, r0 + 1)]
    o_cells.append((r0, c0, True))
    o_cells.append((r0 + 1, c0 + 1, True))
    return _rebuild(g, n, o_cells, list(g.xs), move)


def apply_script(g: GridDiagram, moves: Sequence[GridMove]) -> GridDiagram:
    """Apply moves in order; errors name the failing step index."""
    cur = g
    for step, mv in enumerate(moves, start=1):
        try:
            cur = apply_move(cur, mv)
        except IllegalMoveError as exc:
            raise IllegalMoveError(f"step {step} ({mv.to_line()}): {exc}") from None
    return cur


__all__ = [
    "IllegalMoveError",
    "GridMove",
    "MOVE_KINDS",
    "ISOTOPY_KINDS",
    "parse_move",
    "parse_move_script",
    "CommutationCertificate",
    "commutation_certificate",
    "commutation_legal",
    "apply_move",
    "apply_script",
]
