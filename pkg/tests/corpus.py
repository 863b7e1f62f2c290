"""Shared diagram corpus for the test suite.

Frozen text for the distinguished diagrams (unknots, trefoils, figure
eight, Hopf links, unlinks, wedge graphs) plus deterministic generators
for move-derived and random variants.  build_corpus() returns 50+ named
valid balanced diagrams spanning grid sizes 2..6.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from floergrid.grid import GridDiagram, parse_grid, serialize_grid, validate
from floergrid.moves import (
    GridMove,
    IllegalMoveError,
    apply_move,
    commutation_legal,
)

UNKNOT_2 = """\
size 2
O 2 1 special
O 1 2
X 1 1
X 2 2
"""

UNKNOT_2B = """\
size 2
O 1 1 special
O 2 2
X 2 1
X 1 2
"""

# Left-handed trefoil: O's on the diagonal, X's two steps right.
TREFOIL_LEFT = """\
size 5
O 1 1 special
O 2 2
O 3 3
O 4 4
O 5 5
X 1 3
X 2 4
X 3 5
X 4 1
X 5 2
"""

# Right-handed trefoil: the column reflection of the left one.
TREFOIL_RIGHT = """\
size 5
O 1 5 special
O 2 4
O 3 3
O 4 2
O 5 1
X 1 3
X 2 2
X 3 1
X 4 5
X 5 4
"""

# Figure-eight knot: determinant 5, graded homology dims 1/3/1 at
# symmetrized Alexander levels -1/0/1, tau = 0.
FIGURE_EIGHT = """\
size 6
O 1 4 special
O 2 5
O 3 3
O 4 2
O 5 6
O 6 1
X 1 6
X 2 2
X 3 1
X 4 4
X 5 3
X 6 5
"""

# Positive Hopf link (linking number +1), tight.
HOPF_POSITIVE = """\
size 4
O 4 1 special
O 3 2 special
O 2 3
O 1 4
X 2 1
X 1 2
X 4 3
X 3 4
"""

# Negative Hopf link: column reflection of the positive one.
HOPF_NEGATIVE = """\
size 4
O 4 4 special
O 3 3 special
O 2 2
O 1 1
X 2 4
X 1 3
X 4 2
X 3 1
"""

UNLINK_2 = """\
size 4
O 2 1 special
O 1 2
O 4 3 special
O 3 4
X 1 1
X 2 2
X 3 3
X 4 4
"""

UNLINK_3 = """\
size 6
O 2 1 special
O 1 2
O 4 3 special
O 3 4
O 6 5 special
O 5 6
X 1 1
X 2 2
X 3 3
X 4 4
X 5 5
X 6 6
"""

# Wedge of two circles: one vertex O of weight 2, two loops, size 3.
WEDGE_3 = """\
size 3
O 1 1 special
O 2 2
O 3 3
X 1 2
X 1 3
X 2 1
X 3 1
"""

# Wedge of two circles on a 4x4 grid (vertex O of weight 2).
WEDGE_4 = """\
size 4
O 1 1 special
O 2 3
O 3 2
O 4 4
X 1 2
X 1 4
X 2 1
X 3 3
X 4 1
"""


def grid(text: str) -> GridDiagram:
    return parse_grid(text)


def named_diagrams() -> Dict[str, GridDiagram]:
    return {
        "unknot-2": grid(UNKNOT_2),
        "unknot-2b": grid(UNKNOT_2B),
        "trefoil-left": grid(TREFOIL_LEFT),
        "trefoil-right": grid(TREFOIL_RIGHT),
        "figure-eight": grid(FIGURE_EIGHT),
        "hopf-positive": grid(HOPF_POSITIVE),
        "hopf-negative": grid(HOPF_NEGATIVE),
        "unlink-2": grid(UNLINK_2),
        "unlink-3": grid(UNLINK_3),
        "wedge-3": grid(WEDGE_3),
        "wedge-4": grid(WEDGE_4),
    }


def legal_moves(g: GridDiagram, allow_stabilize: bool) -> List[GridMove]:
    """Legal isotopy moves on g, in a deterministic order."""
    out = [
        GridMove("cyclic-row", ("top",)),
        GridMove("cyclic-row", ("bottom",)),
        GridMove("cyclic-col", ("left",)),
        GridMove("cyclic-col", ("right",)),
    ]
    for i in range(1, g.n):
        if commutation_legal(g, i, "cols"):
            out.append(GridMove("commute-cols", (i,)))
        if commutation_legal(g, i, "rows"):
            out.append(GridMove("commute-rows", (i,)))
    if allow_stabilize:
        for (r, c) in sorted(g.xs):
            out.append(GridMove("stabilize-row", (r, c)))
            out.append(GridMove("stabilize-col", (r, c)))
    for r in range(1, g.n):
        for c in range(1, g.n):
            mv = GridMove("destabilize", (r, c))
            try:
                apply_move(g, mv)
            except IllegalMoveError:
                continue
            out.append(mv)
    return out


def random_isotopy_script(
    g: GridDiagram, length: int, rng: random.Random, max_size: int = 5
) -> Tuple[List[GridMove], GridDiagram]:
    """A random legal isotopy script keeping the grid size bounded."""
    moves: List[GridMove] = []
    cur = g
    for _ in range(length):
        options = legal_moves(cur, allow_stabilize=cur.n < max_size)
        mv = rng.choice(options)
        cur = apply_move(cur, mv)
        moves.append(mv)
    return moves, cur


def unknot_variants(count: int = 6, seed: int = 11) -> List[GridDiagram]:
    """Stabilized/commuted unknot diagrams up to size 5, all distinct."""
    rng = random.Random(seed)
    base = grid(UNKNOT_2)
    seen = {serialize_grid(base)}
    out: List[GridDiagram] = []
    while len(out) < count:
        steps = rng.randrange(2, 7)
        _, cand = random_isotopy_script(base, steps, rng, max_size=5)
        key = serialize_grid(cand)
        if key not in seen:
            seen.add(key)
            out.append(cand)
    return out


def random_link_grids(
    n: int, count: int, seed: int, all_special_every: int = 5
) -> List[GridDiagram]:
    """Random valid one-X-per-lane grids of size n, tight by default.

    Every all_special_every-th diagram instead marks every O as a vertex,
    exercising the all-special corner of the hat complex.
    """
    from floergrid.grid import MarkingKind, components

    rng = random.Random(seed)
    out: List[GridDiagram] = []
    seen = set()
    while len(out) < count:
        o = list(range(1, n + 1))
        x = list(range(1, n + 1))
        rng.shuffle(o)
        rng.shuffle(x)
        if any(a == b for a, b in zip(o, x)):
            continue
        draft = GridDiagram(
            n=n,
            o_cols=tuple(o),
            o_special=tuple(True for _ in range(n)),
            xs=frozenset((r + 1, x[r]) for r in range(n)),
        )
        if len(out) % all_special_every == all_special_every - 1:
            g = draft
        else:
            special = [False] * n
            for comp in components(draft):
                o_rows = [m.row for m in comp if m.kind is not MarkingKind.X]
                special[min(o_rows) - 1] = True
            g = GridDiagram(
                n=n,
                o_cols=tuple(o),
                o_special=tuple(special),
                xs=draft.xs,
            )
        if validate(g):
            continue
        key = serialize_grid(g)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def graph_variants(count: int = 6, seed: int = 23) -> List[GridDiagram]:
    """Move-derived variants of the wedge graphs (sizes 3..5)."""
    rng = random.Random(seed)
    out: List[GridDiagram] = []
    seen = set()
    bases = [grid(WEDGE_3), grid(WEDGE_4)]
    while len(out) < count:
        base = rng.choice(bases)
        steps = rng.randrange(1, 5)
        _, cand = random_isotopy_script(base, steps, rng, max_size=5)
        key = serialize_grid(cand)
        if key not in seen:
            seen.add(key)
            out.append(cand)
    return out


def build_corpus() -> List[Tuple[str, GridDiagram]]:
    """At least 50 valid balanced diagrams, exhaustively checkable sizes."""
    out: List[Tuple[str, GridDiagram]] = list(named_diagrams().items())
    out.extend((f"unknot-variant-{k}", g) for k, g in enumerate(unknot_variants(8)))
    out.extend((f"graph-variant-{k}", g) for k, g in enumerate(graph_variants(6)))
    out.extend((f"random-4-{k}", g) for k, g in enumerate(random_link_grids(4, 12, seed=101)))
    out.extend((f"random-5-{k}", g) for k, g in enumerate(random_link_grids(5, 14, seed=202)))
    out.extend((f"random-6-{k}", g) for k, g in enumerate(random_link_grids(6, 2, seed=303)))
    return out
