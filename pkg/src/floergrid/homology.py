"""Filtered hat homology, symmetrization, and the tau invariant.

Per Maslov grading the hat chain group is spanned by monomial-generator
pairs (exponents at the standard O variables; special exponents vanish
in the hat quotient), so every grading-level question is finite linear
algebra over GF(2).  Direct, per-definition chain groups and boundary
matrices are exposed as chain_basis / boundary_matrix.

The optimized engine first cancels differential entries that are single
marking-free rectangles (unit coefficient, zero Alexander drop).  Such a
cancellation is a filtered chain homotopy equivalence, so the filtered
invariants survive; cancelling the remaining unit entries (nonzero
Alexander drop) is still an unfiltered equivalence and yields a smaller
complex that computes plain hat homology.  Homology is then swept over
a Maslov window; window extremes and tau are certified by recomputing
with a widened window and requiring equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from floergrid import f2
from floergrid.f2 import BitMatrix, Subspace
from floergrid.floer import (
    ChainElement,
    Exps,
    Perm,
    check_size,
    maslov,
    alexander,
    d_hat,
    _rectangles,
)
from floergrid.grid import GridDiagram, GridError, weights


DEFAULT_WINDOW_SLACK = 4
BOTTOM_MARGIN = 2


class WindowError(GridError):
    """Window empty, too small to certify extremes, or unstable."""


class UndeterminedError(GridError):
    """No nontrivial inclusion level found in the certified window."""

    def __init__(self, window: Tuple[int, int]):
        self.window = window
        super().__init__(
            f"tau undetermined: hat homology vanishes throughout Maslov window {window}"
        )


# --- direct, per-definition chain data -------------------------------------


@dataclass(frozen=True)
class BigradedBasis:
    """Ordered hat-complex basis in one Maslov grading."""

    maslov: int
    entries: Tuple[Tuple[Exps, Perm], ...]
    alexander: Tuple[int, ...]
    index: Dict[Tuple[Exps, Perm], int] = field(compare=False, hash=False, default=None)

    def __len__(self) -> int:
        return len(self.entries)


def _exp_tuples(total: int, cols: Sequence[int], n: int):
    """Full-width exponent tuples supported on cols, summing to total,
    in lexicographic order."""
    if not cols:
        if total == 0:
            yield (0,) * n
        return
    first, rest = cols[0], cols[1:]
    for v in range(total + 1):
        for tail in _exp_tuples(total - v, rest, n):
            e = list(tail)
            e[first] = v
            yield tuple(e)


def chain_basis(g: GridDiagram, i: int, override: bool = False) -> BigradedBasis:
    """All hat-complex basis elements of Maslov grading i.

    Entries are (exponents, permutation) pairs ordered by permutation
    then exponents, with exponents supported on standard O columns only.
    """
    check_size(g, override)
    special = g.special_by_col()
    std = [c for c in range(g.n) if not special[c]]
    m = weights(g)
    entries: List[Tuple[Exps, Perm]] = []
    alex: List[int] = []
    for perm in itertools.permutations(range(g.n)):
        d = maslov(g, perm) - i
        if d < 0 or d % 2:
            continue
        a0 = alexander(g, perm)
        for exps in _exp_tuples(d // 2, std, g.n):
            entries.append((exps, perm))
            alex.append(a0 - sum(e * m[c] for c, e in enumerate(exps)))
    order = sorted(range(len(entries)), key=lambda k: (entries[k][1], entries[k][0]))
    entries = [entries[k] for k in order]
    alex = [alex[k] for k in order]
    return BigradedBasis(
        maslov=i,
        entries=tuple(entries),
        alexander=tuple(alex),
        index={e: k for k, e in enumerate(entries)},
    )


def boundary_matrix(g: GridDiagram, i: int, override: bool = False) -> BitMatrix:
    """Matrix of the hat differential from grading i to grading i-1.

    Column j is the differential of basis element j expressed in the
    (i-1) basis (rows).
    """
    src = chain_basis(g, i, override)
    tgt = chain_basis(g, i - 1, override)
    rows = [0] * len(tgt)
    for j, (exps, perm) in enumerate(src.entries):
        image = d_hat(g, ChainElement(frozenset({(exps, perm)})))
        for term in image.terms:
            rows[tgt.index[term]] |= 1 << j
    return BitMatrix(tuple(rows), len(src))


# --- reduced complexes ------------------------------------------------------


@dataclass
class _Reduced:
    """A generator-level complex with polynomial entries over the
    standard O variables (exponent-tuple sets, F2 coefficients)."""

    alive: List[int]
    diff: Dict[int, Dict[int, FrozenSet[Exps]]]


def _build_hat_diff(eng: "_Engine") -> Dict[int, Dict[int, FrozenSet[Exps]]]:
    g = eng.g
    special = eng.special
    diff: Dict[int, Dict[int, FrozenSet[Exps]]] = {}
    for gi, perm in enumerate(eng.gens):
        acc: Dict[int, set] = {}
        for rect in _rectangles(g, perm):
            if any(rect.o_hits[c] and special[c] for c in range(g.n)):
                continue
            tgt = eng.gen_index[rect.to_perm]
            bucket = acc.setdefault(tgt, set())
            bucket.symmetric_difference_update({rect.o_hits})
        entry = {tgt: frozenset(p) for tgt, p in acc.items() if p}
        if entry:
            diff[gi] = entry
    return diff


def _reduce(eng: "_Engine", start: _Reduced, safe: bool) -> _Reduced:
    """Cancel unit entries (constant-1 polynomials); with safe=True only
    those with zero Alexander drop, preserving the filtration."""
    zero = (0,) * eng.g.n
    diff = {s: dict(t) for s, t in start.diff.items()}
    alive = set(start.alive)
    preds: Dict[int, set] = {}
    for s, tgts in diff.items():
        for t in tgts:
            preds.setdefault(t, set()).add(s)

    def unit_entries():
        found = []
        for s in sorted(diff):
            for t in sorted(diff[s]):
                if diff[s][t] == frozenset({zero}):
                    if safe and eng.A2[s] != eng.A2[t]:
                        continue
                    found.append((s, t))
        return found

    while True:
        units = unit_entries()
        if not units:
            break
        x, y = units[0]
        dx = diff.pop(x, {})
        dx.pop(y, None)
        for z in dx:
            preds.get(z, set()).discard(x)
        for w in sorted(preds.get(y, set()) - {x}):
            q = diff[w].pop(y)
            for z, pset in dx.items():
                tgt = set(diff[w].get(z, frozenset()))
                for qe in q:
                    for pe in pset:
                        prod = tuple(a + b for a, b in zip(qe, pe))
                        if prod in tgt:
                            tgt.remove(prod)
                        else:
                            tgt.add(prod)
                if tgt:
                    diff[w][z] = frozenset(tgt)
                    preds.setdefault(z, set()).add(w)
                else:
                    diff[w].pop(z, None)
                    preds.get(z, set()).discard(w)
        preds.pop(y, None)
        dy = diff.pop(y, {})
        for z in dy:
            preds.get(z, set()).discard(y)
        for w in list(preds.get(x, set())):
            diff[w].pop(x, None)
        preds.pop(x, None)
        alive.discard(x)
        alive.discard(y)
        diff = {s: t for s, t in diff.items() if t and s in alive}
    return _Reduced(alive=sorted(alive), diff=diff)


# --- the engine -------------------------------------------------------------


class _Engine:
    """Per-diagram homology engine over one grading convention.

    mode "alexander": planar Alexander grading (symmetrization applies);
    mode "aprime": the link grading from the cobordism chapter, stored
    doubled so half-integers stay integral.
    """

    def __init__(self, g: GridDiagram, mode: str = "alexander", a2_override=None):
        self.g = g
        self.mode = mode
        self.special = g.special_by_col()
        self.std_cols = [c for c in range(g.n) if not self.special[c]]
        self.m = weights(g)
        self.gens: List[Perm] = sorted(itertools.permutations(range(g.n)))
        self.gen_index = {p: i for i, p in enumerate(self.gens)}
        self.M = [maslov(g, p) for p in self.gens]
        if a2_override is not None:
            self.A2 = list(a2_override)
        else:
            self.A2 = [2 * alexander(g, p) for p in self.gens]
        full = _Reduced(alive=list(range(len(self.gens))), diff=_build_hat_diff(self))
        self.red = _reduce(self, full, safe=True)
        self.min = _reduce(self, self.red, safe=False)
        self._basis_cache: Dict[Tuple[bool, int], tuple] = {}
        self._rank_cache: Dict[Tuple[bool, int], int] = {}

    # entry A2 value: generator A2 minus doubled monomial weight
    def _entry_a2(self, gi: int, exps: Exps) -> int:
        return self.A2[gi] - 2 * sum(e * self.m[c] for c, e in enumerate(exps))

    def basis(self, minimal: bool, i: int):
        """Entries (gen, exps, a2) of grading i plus an index map."""
        key = (minimal, i)
        if key not in self._basis_cache:
            rc = self.min if minimal else self.red
            entries = []
            for gi in rc.alive:
                d = self.M[gi] - i
                if d < 0 or d % 2:
                    continue
                for exps in _exp_tuples(d // 2, self.std_cols, self.g.n):
                    entries.append((gi, exps, self._entry_a2(gi, exps)))
            index = {(gi, exps): k for k, (gi, exps, _) in enumerate(entries)}
            self._basis_cache[key] = (entries, index)
        return self._basis_cache[key]

    def matrix(self, minimal: bool, i: int) -> BitMatrix:
        """Differential from grading i to i-1 on the chosen reduction."""
        rc = self.min if minimal else self.red
        src, _ = self.basis(minimal, i)
        tgt_entries, tgt_index = self.basis(minimal, i - 1)
        rows = [0] * len(tgt_entries)
        for j, (gi, exps, _) in enumerate(src):
            for gj, poly in rc.diff.get(gi, {}).items():
                for p in poly:
                    key = (gj, tuple(a + b for a, b in zip(exps, p)))
                    rows[tgt_index[key]] |= 1 << j
        return BitMatrix(tuple(rows), len(src))

    def rank(self, minimal: bool, i: int) -> int:
        key = (minimal, i)
        if key not in self._rank_cache:
            self._rank_cache[key] = f2.rank(self.matrix(minimal, i))
        return self._rank_cache[key]

    def default_window(self, slack: int) -> Tuple[int, int]:
        return (min(self.M) - 2 * slack, max(self.M))

    def hat_dims(self, window: Tuple[int, int], threads: int = 1) -> Dict[int, int]:
        lo, hi = window
        if lo > hi:
            raise WindowError(f"empty Maslov window {window}")
        gradings = list(range(lo, hi + 1))
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(lambda i: self.rank(True, i), gradings))
        dims = {}
        for i in gradings:
            n_i = len(self.basis(True, i)[0])
            dims[i] = n_i - self.rank(True, i) - self.rank(True, i + 1)
        return dims

    # --- associated graded ---------------------------------------------

    def graded_blocks(self, i: int) -> Dict[int, List[int]]:
        """Positions of grading-i entries grouped by doubled Alexander value."""
        entries, _ = self.basis(False, i)
        blocks: Dict[int, List[int]] = {}
        for pos, (_, _, a2) in enumerate(entries):
            blocks.setdefault(a2, []).append(pos)
        return blocks

    def graded_rank(self, i: int, a2: int) -> int:
        """Rank of the Alexander-preserving part of the differential
        out of block (i, a2)."""
        src_entries, _ = self.basis(False, i)
        tgt_entries, tgt_index = self.basis(False, i - 1)
        cols = [pos for pos, (_, _, a2v) in enumerate(src_entries) if a2v == a2]
        rows: Dict[int, int] = {}
        rc = self.red
        for bit, pos in enumerate(cols):
            gi, exps, _ = src_entries[pos]
            for gj, poly in rc.diff.get(gi, {}).items():
                for p in poly:
                    key = (gj, tuple(a + b for a, b in zip(exps, p)))
                    t = tgt_index[key]
                    if tgt_entries[t][2] == a2:
                        rows[t] = rows.get(t, 0) | (1 << bit)
        return f2.rank_rows(rows.values())

    def graded_table(self, window: Tuple[int, int]) -> Dict[Tuple[int, int], int]:
        lo, hi = window
        if lo > hi:
            raise WindowError(f"empty Maslov window {window}")
        table: Dict[Tuple[int, int], int] = {}
        rank_cache: Dict[Tuple[int, int], int] = {}

        def grank(i: int, a2: int) -> int:
            if (i, a2) not in rank_cache:
                rank_cache[(i, a2)] = self.graded_rank(i, a2)
            return rank_cache[(i, a2)]

        for i in range(lo, hi + 1):
            for a2, positions in self.graded_blocks(i).items():
                dim = len(positions) - grank(i, a2) - grank(i + 1, a2)
                if dim:
                    table[(i, a2)] = dim
        return table

    def cycles_below(self, i: int, a2h_cap: int, c2: int) -> Subspace:
        """Cycles of grading i supported on entries with shifted doubled
        Alexander value at most a2h_cap, as vectors over the full basis."""
        entries, _ = self.basis(False, i)
        sel = [pos for pos, (_, _, a2) in enumerate(entries) if a2 + c2 <= a2h_cap]
        tgt_entries, tgt_index = self.basis(False, i - 1)
        rows = [0] * len(tgt_entries)
        rc = self.red
        for bit, pos in enumerate(sel):
            gi, exps, _ = entries[pos]
            for gj, poly in rc.diff.get(gi, {}).items():
                for p in poly:
                    key = (gj, tuple(a + b for a, b in zip(exps, p)))
                    rows[tgt_index[key]] |= 1 << bit
        kernel = f2.kernel_basis(BitMatrix(tuple(rows), len(sel)))
        lifted = []
        for v in kernel.basis.rows:
            out = 0
            rest = v
            while rest:
                b = (rest & -rest).bit_length() - 1
                out |= 1 << sel[b]
                rest &= rest - 1
            lifted.append(out)
        return Subspace.from_rows(lifted, len(entries))

    def boundaries(self, i: int) -> Subspace:
        """Image of the filtered differential into grading i."""
        mat = self.matrix(False, i + 1)
        cols = mat.transpose()
        return Subspace.from_rows(cols.rows, cols.cols)


@lru_cache(maxsize=6)
def _engine(g: GridDiagram, mode: str) -> _Engine:
    if mode == "aprime":
        from floergrid.cobordism import _aprime2_all

        return _Engine(g, mode="aprime", a2_override=_aprime2_all(g))
    return _Engine(g, mode="alexander")


def get_engine(g: GridDiagram, mode: str = "alexander", override: bool = False) -> _Engine:
    check_size(g, override)
    return _engine(g, mode)


# --- public results ---------------------------------------------------------


@dataclass(frozen=True)
class GradedHomologyTable:
    """Associated-graded hat homology dimensions by (maslov, alexander)."""

    dims: Dict[Tuple[int, int], int]
    m_max: int
    m_min: int
    window: Tuple[int, int]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def span(self) -> int:
        return self.m_max - self.m_min


@dataclass(frozen=True)
class SymmetrizationResult:
    """The half-integer shift centering the graded homology extremes."""

    shift: Fraction
    m_max: int
    m_min: int


def _raw_graded(eng: _Engine, window: Tuple[int, int]) -> GradedHomologyTable:
    lo, hi = window
    table2 = eng.graded_table(window)
    if not table2:
        raise WindowError(f"no graded homology found in Maslov window {window}")
    if any(i <= lo + BOTTOM_MARGIN - 1 for (i, _) in table2):
        raise WindowError(
            f"window {window} too small to certify extremes: "
            "graded homology meets the bottom margin"
        )
    dims = {}
    for (i, a2), dim in sorted(table2.items()):
        if a2 % 2:
            raise AssertionError("planar Alexander gradings must be integral")
        dims[(i, a2 // 2)] = dim
    ms = [m for (_, m) in dims]
    return GradedHomologyTable(dims=dims, m_max=max(ms), m_min=min(ms), window=window)


def graded_homology(
    g: GridDiagram, maslov_window: Optional[Sequence[int]] = None, override: bool = False
) -> GradedHomologyTable:
    """Associated-graded hat homology over a Maslov window.

    The window must be wide enough that no homology touches its bottom
    margin, otherwise the extremes cannot be trusted and WindowError is
    raised.
    """
    eng = get_engine(g, override=override)
    if maslov_window is None:
        window = eng.default_window(DEFAULT_WINDOW_SLACK)
    else:
        window = (int(maslov_window[0]), int(maslov_window[1]))
    return _raw_graded(eng, window)


def symmetrize(g: GridDiagram, w_slack: int = DEFAULT_WINDOW_SLACK, override: bool = False) -> SymmetrizationResult:
    """Shift making the extreme graded-homology levels opposite."""
    eng = get_engine(g, override=override)
    table = _raw_graded(eng, eng.default_window(w_slack))
    shift = -Fraction(table.m_max + table.m_min, 2)
    return SymmetrizationResult(shift=shift, m_max=table.m_max, m_min=table.m_min)


def hat_homology_dims(
    g: GridDiagram,
    maslov_window: Optional[Sequence[int]] = None,
    threads: int = 1,
    override: bool = False,
) -> Dict[int, int]:
    """dim of hat homology per Maslov grading in the window."""
    eng = get_engine(g, override=override)
    if maslov_window is None:
        window = eng.default_window(DEFAULT_WINDOW_SLACK)
    else:
        window = (int(maslov_window[0]), int(maslov_window[1]))
    return eng.hat_dims(window, threads=threads)


def iota_nontrivial(
    g: GridDiagram,
    m,
    maslov_window: Optional[Sequence[int]] = None,
    certify: bool = True,
    override: bool = False,
) -> bool:
    """Does the filtration level m inject something nonzero into hat homology?

    m is a symmetrized Alexander level (half-integer Fraction or int).
    True iff some cycle of symmetrized level <= m in some window grading
    is not a boundary of the full hat complex.  With certify=True the
    check is repeated on a deeper window; a changed answer raises
    WindowError.
    """
    eng = get_engine(g, override=override)
    if maslov_window is None:
        window = eng.default_window(DEFAULT_WINDOW_SLACK)
    else:
        window = (int(maslov_window[0]), int(maslov_window[1]))
    sym = symmetrize(g, override=override)
    c2 = int(2 * sym.shift)
    m2 = Fraction(m) * 2
    if m2.denominator != 1:
        raise ValueError("filtration level must be a half-integer")
    m2 = int(m2)

    def scan(win: Tuple[int, int]) -> bool:
        lo, hi = win
        for i in range(lo, hi + 1):
            z = eng.cycles_below(i, m2, c2)
            if z.dim and f2.relative_rank(z, eng.boundaries(i)) > 0:
                return True
        return False

    answer = scan(window)
    if certify:
        wider = (window[0] - 4, window[1])
        if scan(wider) != answer:
            raise WindowError(
                f"inclusion test at level {m} changed when the window grew from "
                f"{window} to {wider}"
            )
    return answer


@dataclass(frozen=True)
class TauResult:
    """tau with its certification context."""

    tau: Fraction
    shift: Fraction
    m_max: int
    m_min: int
    window: Tuple[int, int]
    certified: bool
    hat_dims: Dict[int, int]


def _tau_once(eng: _Engine, window: Tuple[int, int], c2: int, threads: int = 1) -> Fraction:
    dims = eng.hat_dims(window, threads=threads)
    lo, hi = window
    if any(dims[i] for i in range(lo, lo + BOTTOM_MARGIN)):
        raise WindowError(
            f"window {window} too small: hat homology meets the bottom margin"
        )
    support = [i for i, d in dims.items() if d]
    if not support:
        raise UndeterminedError(window)
    levels = set()
    for i in support:
        entries, _ = eng.basis(False, i)
        levels.update(a2 + c2 for (_, _, a2) in entries)
    boundaries = {i: eng.boundaries(i) for i in support}
    for level in sorted(levels):
        for i in support:
            z = eng.cycles_below(i, level, c2)
            if z.dim and f2.relative_rank(z, boundaries[i]) > 0:
                return Fraction(level, 2)
    raise UndeterminedError(window)


def tau(
    g: GridDiagram,
    w_slack: int = DEFAULT_WINDOW_SLACK,
    certify: bool = True,
    threads: int = 1,
    override: bool = False,
) -> TauResult:
    """The minimal symmetrized filtration level mapping nontrivially into
    hat homology, certified by window widening.

    Raises UndeterminedError when hat homology vanishes in the window and
    WindowError when widening the window changes the answer.
    """
    eng = get_engine(g, override=override)

    def run(slack: int):
        window = eng.default_window(slack)
        table = _raw_graded(eng, window)
        c2 = -(table.m_max + table.m_min)
        value = _tau_once(eng, window, c2, threads=threads)
        return window, table, c2, value

    window, table, c2, value = run(w_slack)
    certified = False
    if certify:
        _, table2, c2b, value2 = run(w_slack + 2)
        if (table2.m_max, table2.m_min, value2) != (table.m_max, table.m_min, value):
            raise WindowError(
                f"result unstable under window widening: "
                f"W={w_slack} gives tau={value}, extremes ({table.m_min},{table.m_max}); "
                f"W={w_slack + 2} gives tau={value2}, extremes ({table2.m_min},{table2.m_max})"
            )
        certified = True
    dims = eng.hat_dims(window)
    return TauResult(
        tau=value,
        shift=Fraction(c2, 2),
        m_max=table.m_max,
        m_min=table.m_min,
        window=window,
        certified=certified,
        hat_dims={i: d for i, d in sorted(dims.items()) if d},
    )


__all__ = [
    "DEFAULT_WINDOW_SLACK",
    "WindowError",
    "UndeterminedError",
    "BigradedBasis",
    "chain_basis",
    "boundary_matrix",
    "GradedHomologyTable",
    "SymmetrizationResult",
    "graded_homology",
    "symmetrize",
    "hat_homology_dims",
    "iota_nontrivial",
    "TauResult",
    "tau",
    "get_engine",
]
