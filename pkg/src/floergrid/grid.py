"""Grid diagrams for balanced transverse spatial graphs, knots, and links.

Coordinates are 1-indexed, rows bottom-up and columns left-right.  The
marking in cell (row, col) sits at the planar point (col - 1/2, row - 1/2);
generator points live on the integer lattice 0..n-1 (toroidal).  A diagram
carries one O per row and per column (a permutation), a set of X cells, and
per-row "special" flags marking the O's that play the role of graph
vertices.  In cobordism mode a cell may hold both an X and an O.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple


DEFAULT_SIZE_CAP = 8


class GridError(Exception):
    """Base class for grid-layer failures."""


class GridParseError(GridError):
    """Raised on malformed grid-file text (carries line number)."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class GridValidationError(GridError):
    """Raised when a parsed diagram violates a structural invariant."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in violations))


class MarkingKind(Enum):
    O_STANDARD = "O_standard"
    O_SPECIAL = "O_special"
    X = "X"


@dataclass(frozen=True, order=True)
class Marking:
    """One O or X marking at a grid cell."""

    kind: MarkingKind = field(compare=False)
    row: int
    col: int

    def label(self) -> str:
        if self.kind is MarkingKind.X:
            return f"X({self.row},{self.col})"
        star = "*" if self.kind is MarkingKind.O_SPECIAL else ""
        return f"O{star}({self.row},{self.col})"


@dataclass(frozen=True)
class Violation:
    """A named invariant violation with its location."""

    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


@dataclass(frozen=True)
class GridDiagram:
    """An n x n graph grid diagram.

    o_cols[r-1] is the column of the O in row r; o_special[r-1] flags it
    as a vertex O.  xs holds (row, col) cells carrying an X (multiplicity
    0/1 per cell).  Instances are immutable and hashable; all operations
    return new values.
    """

    n: int
    o_cols: Tuple[int, ...]
    o_special: Tuple[bool, ...]
    xs: FrozenSet[Tuple[int, int]]
    cobordism_mode: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise GridError("grid size must be positive")
        if len(self.o_cols) != self.n or len(self.o_special) != self.n:
            raise GridError("O data must have one entry per row")
        for c in self.o_cols:
            if not 1 <= c <= self.n:
                raise GridError(f"O column {c} out of range 1..{self.n}")
        if sorted(self.o_cols) != list(range(1, self.n + 1)):
            raise GridError("O markings must form a permutation")
        for (r, c) in self.xs:
            if not (1 <= r <= self.n and 1 <= c <= self.n):
                raise GridError(f"X cell ({r},{c}) out of range")
        if not self.cobordism_mode:
            for r, c in self.xs:
                if self.o_cols[r - 1] == c:
                    raise GridError(f"cell ({r},{c}) holds both an X and an O")

    # --- basic queries -------------------------------------------------

    def o_row_of_col(self, col: int) -> int:
        return self.o_cols.index(col) + 1

    def o_markings(self) -> List[Marking]:
        out = []
        for r, c in enumerate(self.o_cols, start=1):
            kind = MarkingKind.O_SPECIAL if self.o_special[r - 1] else MarkingKind.O_STANDARD
            out.append(Marking(kind, r, c))
        return out

    def x_markings(self) -> List[Marking]:
        return [Marking(MarkingKind.X, r, c) for (r, c) in sorted(self.xs)]

    def markings(self) -> List[Marking]:
        return self.o_markings() + self.x_markings()

    def xs_in_row(self, row: int) -> List[int]:
        return sorted(c for (r, c) in self.xs if r == row)

    def xs_in_col(self, col: int) -> List[int]:
        return sorted(r for (r, c) in self.xs if c == col)

    def special_by_col(self) -> Tuple[bool, ...]:
        """Special flag of the O in each column 1..n."""
        flags = [False] * self.n
        for r, c in enumerate(self.o_cols, start=1):
            flags[c - 1] = self.o_special[r - 1]
        return tuple(flags)

    def with_mode(self, cobordism_mode: bool) -> "GridDiagram":
        return replace(self, cobordism_mode=cobordism_mode)

    def is_link_grid(self) -> bool:
        """Every row and column holds exactly one X."""
        rows = [0] * self.n
        cols = [0] * self.n
        for r, c in self.xs:
            rows[r - 1] += 1
            cols[c - 1] += 1
        return all(v == 1 for v in rows) and all(v == 1 for v in cols)

    def digest(self) -> str:
        return hashlib.sha256(serialize_grid(self).encode()).hexdigest()


# --- parsing and serialization ------------------------------------------


def parse_grid(text: str, cobordism_mode: bool = False, check: bool = True) -> GridDiagram:
    """Parse grid-file text into a GridDiagram.

    The format: a `size N` line, then one `O <row> <col> [special]` or
    `X <row> <col>` line per marking; `#` starts a comment and blank
    lines are ignored.  With check=True, structural violations raise
    GridValidationError.
    """
    n: Optional[int] = None
    o_by_row: Dict[int, Tuple[int, bool]] = {}
    xs = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].lower()
        if head == "size":
            if n is not None:
                raise GridParseError("duplicate size line", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise GridParseError("expected `size N`", lineno)
            n = int(parts[1])
            if n < 1:
                raise GridParseError("size must be positive", lineno)
            continue
        if n is None:
            raise GridParseError("size line must come first", lineno)
        if head not in ("o", "x"):
            raise GridParseError(f"unknown marking kind {parts[0]!r}", lineno)
        if head == "o":
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3].lower() != "special"):
                raise GridParseError("expected `O <row> <col> [special]`", lineno)
        elif len(parts) != 3:
            raise GridParseError("expected `X <row> <col>`", lineno)
        try:
            row, col = int(parts[1]), int(parts[2])
        except ValueError:
            raise GridParseError("row and col must be integers", lineno) from None
        if not (1 <= row <= n and 1 <= col <= n):
            raise GridParseError(f"cell ({row},{col}) out of range 1..{n}", lineno)
        if head == "o":
            if row in o_by_row:
                raise GridParseError(f"two O markings in row {row}", lineno)
            if any(c == col for (c, _) in o_by_row.values()):
                raise GridParseError(f"two O markings in column {col}", lineno)
            o_by_row[row] = (col, len(parts) == 4)
        else:
            if (row, col) in xs:
                raise GridParseError(f"duplicate X in cell ({row},{col})", lineno)
            xs.add((row, col))
    if n is None:
        raise GridParseError("missing size line")
    missing = [r for r in range(1, n + 1) if r not in o_by_row]
    if missing:
        raise GridParseError(f"no O marking in row {missing[0]}")
    if not cobordism_mode:
        for (r, c) in xs:
            if o_by_row[r][0] == c:
                raise GridParseError(f"cell ({r},{c}) holds both an X and an O")
    g = GridDiagram(
        n=n,
        o_cols=tuple(o_by_row[r][0] for r in range(1, n + 1)),
        o_special=tuple(o_by_row[r][1] for r in range(1, n + 1)),
        xs=frozenset(xs),
        cobordism_mode=cobordism_mode,
    )
    if check:
        bad = validate(g)
        if bad:
            raise GridValidationError(bad)
    return g


def serialize_grid(g: GridDiagram) -> str:
    """Canonical text form: O lines by row, X lines by (row, col)."""
    lines = [f"size {g.n}"]
    for r in range(1, g.n + 1):
        star = " special" if g.o_special[r - 1] else ""
        lines.append(f"O {r} {g.o_cols[r - 1]}{star}")
    for r, c in sorted(g.xs):
        lines.append(f"X {r} {c}")
    return "\n".join(lines) + "\n"


# --- validation -----------------------------------------------------------


def validate(g: GridDiagram) -> List[Violation]:
    """Check all diagram invariants; an empty list means valid.

    Rules: sink/source-freeness (an X in every row and column), balance
    (row X-count equals column X-count at every O), and outside cobordism
    mode at least one special O in every connected component.
    """
    out: List[Violation] = []
    for r in range(1, g.n + 1):
        if not g.xs_in_row(r):
            out.append(Violation("sink/source", f"no X marking in row {r}"))
    for c in range(1, g.n + 1):
        if not g.xs_in_col(c):
            out.append(Violation("sink/source", f"no X marking in column {c}"))
    for r in range(1, g.n + 1):
        c = g.o_cols[r - 1]
        row_count = len(g.xs_in_row(r))
        col_count = len(g.xs_in_col(c))
        if row_count != col_count and row_count and col_count:
            out.append(
                Violation(
                    "balance",
                    f"O at ({r},{c}) has {row_count} X in its row but {col_count} in its column",
                )
            )
    if not g.cobordism_mode and not out:
        for comp in components(g):
            if not any(m.kind is MarkingKind.O_SPECIAL for m in comp):
                where = min((m.row, m.col) for m in comp)
                out.append(
                    Violation("special-per-component", f"component through cell {where} has no special O")
                )
    return out


def weights(g: GridDiagram) -> Tuple[int, ...]:
    """Per-O weight m_i, indexed by column: the X count in O_i's column.

    Balanced diagrams have the same count in the O's row; that is
    re-checked here.
    """
    out = []
    for c in range(1, g.n + 1):
        col_count = len(g.xs_in_col(c))
        row_count = len(g.xs_in_row(g.o_row_of_col(c)))
        if col_count != row_count:
            raise GridValidationError(
                [Violation("balance", f"O in column {c}: row count {row_count} != column count {col_count}")]
            )
        if col_count < 1:
            raise GridValidationError([Violation("sink/source", f"no X in column {c}")])
        out.append(col_count)
    return tuple(out)


def components(g: GridDiagram) -> List[List[Marking]]:
    """Connected components of the markings.

    X's connect to O's vertically (same column) and O's connect to X's
    horizontally (same row); components are the transitive closure.
    Returned sorted by their minimal (row, col) cell, each sorted.
    """
    marks = g.markings()
    index = {id(m): i for i, m in enumerate(marks)}
    parent = list(range(len(marks)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    by_col: Dict[int, List[Marking]] = {}
    by_row: Dict[int, List[Marking]] = {}
    for m in marks:
        by_col.setdefault(m.col, []).append(m)
        by_row.setdefault(m.row, []).append(m)
    for m in marks:
        if m.kind is MarkingKind.X:
            for other in by_col[m.col]:
                if other.kind is not MarkingKind.X:
                    union(index[id(m)], index[id(other)])
        else:
            for other in by_row[m.row]:
                if other.kind is MarkingKind.X:
                    union(index[id(m)], index[id(other)])
    groups: Dict[int, List[Marking]] = {}
    for m in marks:
        groups.setdefault(find(index[id(m)]), []).append(m)
    comps = [sorted(group) for group in groups.values()]
    comps.sort(key=lambda group: (group[0].row, group[0].col))
    return comps


def component_count(g: GridDiagram) -> int:
    return len(components(g))


def is_tight(g: GridDiagram) -> bool:
    """Link grid with exactly one special O on each component."""
    if not g.is_link_grid():
        return False
    for comp in components(g):
        specials = sum(1 for m in comp if m.kind is MarkingKind.O_SPECIAL)
        if specials != 1:
            return False
    return True


__all__ = [
    "DEFAULT_SIZE_CAP",
    "GridError",
    "GridParseError",
    "GridValidationError",
    "MarkingKind",
    "Marking",
    "Violation",
    "GridDiagram",
    "parse_grid",
    "serialize_grid",
    "validate",
    "weights",
    "components",
    "component_count",
    "is_tight",
]
