"""Link gradings, tau', cobordism scripts, and the slice obstruction.

A cobordism script is an ordered list of grid moves between two link
diagrams.  Running one tallies births, deaths, and saddles, applies the
genus formula g = (s - b - d)/2 + 1 - (l1 + l2)/2, computes tau at both
endpoints, and checks the genus inequality

    1 - g - l1 <= tau(L1) - tau(L2) <= g + l2 - 1,

which holds for every connected cobordism.  Births, X-saddles,
O-saddles, and deaths shift the link Alexander grading by -1/2, +1/2,
-1/2, and +1/2 respectively; the report tracks the running total.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from floergrid.floer import _count2, _diagram_data, _gen_pts, check_size
from floergrid.grid import (
    GridDiagram,
    GridError,
    component_count,
    is_tight,
    parse_grid,
    serialize_grid,
    validate,
)
from floergrid.moves import GridMove, IllegalMoveError, apply_move, parse_move


class ScriptError(GridError):
    """A cobordism script failed to parse, apply, or verify."""


def _aprime4(g: GridDiagram, perm) -> int:
    """Four times the link Alexander grading of a generator."""
    o_pts, x_pts, _, _, _ = _diagram_data(g)
    pts = _gen_pts(tuple(perm))
    val = (
        2 * _count2(pts, x_pts)
        - 2 * _count2(pts, list(o_pts))
        - _count2(x_pts, x_pts)
        + _count2(list(o_pts), list(o_pts))
        - 2 * (g.n - 1)
    )
    return val


def _aprime2_all(g: GridDiagram) -> List[int]:
    """Doubled link Alexander gradings for all generators in order."""
    out = []
    for perm in sorted(itertools.permutations(range(g.n))):
        v4 = _aprime4(g, perm)
        if v4 % 2:
            raise AssertionError("link Alexander grading must be a half-integer")
        out.append(v4 // 2)
    return out


def alexander_prime(g: GridDiagram, x) -> Fraction:
    """Link Alexander grading of a generator (half-integer).

    Defined for link grids: every row and column holds exactly one X.
    """
    if not g.is_link_grid():
        raise GridError("link Alexander grading requires a link grid (one X per row and column)")
    perm = x.perm if hasattr(x, "perm") else tuple(x)
    return Fraction(_aprime4(g, perm), 4)


def tau_prime(
    g: GridDiagram,
    w_slack: Optional[int] = None,
    certify: bool = True,
    threads: int = 1,
    override: bool = False,
) -> Fraction:
    """tau computed from the link Alexander filtration, unsymmetrized."""
    from floergrid.homology import (
        DEFAULT_WINDOW_SLACK,
        WindowError,
        _tau_once,
        get_engine,
    )

    if not is_tight(g):
        raise GridError("tau' requires a tight link grid (one special O per component)")
    eng = get_engine(g, mode="aprime", override=override)
    slack = DEFAULT_WINDOW_SLACK if w_slack is None else w_slack
    value = _tau_once(eng, eng.default_window(slack), c2=0, threads=threads)
    if certify:
        value2 = _tau_once(eng, eng.default_window(slack + 2), c2=0, threads=threads)
        if value2 != value:
            raise WindowError(
                f"tau' unstable under window widening: {value} vs {value2}"
            )
    return value


# --- scripts ----------------------------------------------------------------


BIRTH_SHIFT = Fraction(-1, 2)
X_SADDLE_SHIFT = Fraction(1, 2)
O_SADDLE_SHIFT = Fraction(-1, 2)
DEATH_SHIFT = Fraction(1, 2)

_PHASE = {"birth": 0, "xsaddle": 1, "osaddle": 1, "death": 2}


@dataclass(frozen=True)
class CobordismScript:
    """Moves plus endpoint data for a link cobordism."""

    initial: GridDiagram
    moves: Tuple[GridMove, ...]
    final_check: Optional[GridDiagram] = None


def parse_script_file(path) -> CobordismScript:
    """Read a script file: `initial <grid path>`, optional
    `final-check <grid path>`, then one move per line."""
    path = Path(path)
    initial = None
    final_check = None
    moves: List[GridMove] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        head = parts[0].lower()
        if head in ("initial", "final-check"):
            if len(parts) != 2:
                raise ScriptError(f"line {lineno}: {head} needs a file path")
            target = (path.parent / parts[1].strip()).resolve()
            try:
                diagram = parse_grid(target.read_text())
            except OSError as exc:
                raise ScriptError(f"line {lineno}: cannot read {target}: {exc}") from None
            if head == "initial":
                initial = diagram
            else:
                final_check = diagram
            continue
        try:
            moves.append(parse_move(line))
        except IllegalMoveError as exc:
            raise ScriptError(f"line {lineno}: {exc}") from None
    if initial is None:
        raise ScriptError("script is missing an `initial <path>` header")
    return CobordismScript(initial=initial, moves=tuple(moves), final_check=final_check)


@dataclass(frozen=True)
class CobordismReport:
    """Counts, genus, endpoint invariants, and the inequality verdict."""

    l1: int
    l2: int
    births: int
    deaths: int
    x_saddles: int
    o_saddles: int
    genus: Fraction
    a_prime_shift: Fraction
    tau1: Fraction
    tau2: Fraction
    tau_prime1: Optional[Fraction]
    tau_prime2: Optional[Fraction]
    bound_satisfied: Optional[bool]
    final: GridDiagram
    warnings: Tuple[str, ...] = ()

    @property
    def saddles(self) -> int:
        return self.x_saddles + self.o_saddles


def run_script(script: CobordismScript, w_slack: Optional[int] = None, threads: int = 1) -> CobordismReport:
    """Apply a cobordism script, tally its counts, and evaluate the
    genus inequality at its endpoints."""
    from floergrid.homology import tau as tau_fn

    warnings: List[str] = []
    initial = script.initial.with_mode(True)
    check_size(initial)
    cur = initial
    counts = {"birth": 0, "death": 0, "xsaddle": 0, "osaddle": 0}
    phase = 0
    phase_warned = False
    for step, mv in enumerate(script.moves, start=1):
        try:
            cur = apply_move(cur, mv)
        except IllegalMoveError as exc:
            raise ScriptError(f"step {step} ({mv.to_line()}): {exc}") from None
        if mv.kind in counts:
            counts[mv.kind] += 1
        p = _PHASE.get(mv.kind)
        if p is not None:
            if p < phase and not phase_warned:
                warnings.append(
                    f"step {step}: {mv.kind} out of births-saddles-deaths order "
                    "(script accepted; counts and bound still computed)"
                )
                phase_warned = True
            phase = max(phase, p)
    final = cur
    try:
        final_strict = final.with_mode(False)
    except GridError as exc:
        raise ScriptError(f"final diagram is not a spatial-graph diagram: {exc}") from None
    bad = validate(final_strict)
    if bad:
        raise ScriptError(
            "final diagram is not a valid spatial-graph diagram: "
            + "; ".join(str(v) for v in bad)
        )
    if script.final_check is not None:
        if serialize_grid(final_strict) != serialize_grid(script.final_check.with_mode(False)):
            raise ScriptError("final diagram does not match the final-check diagram")
    b, d = counts["birth"], counts["death"]
    sx, so = counts["xsaddle"], counts["osaddle"]
    s = sx + so
    start_strict = script.initial.with_mode(False)
    l1 = component_count(start_strict)
    l2 = component_count(final_strict)
    genus = Fraction(s - b - d, 2) + 1 - Fraction(l1 + l2, 2)
    shift = b * BIRTH_SHIFT + sx * X_SADDLE_SHIFT + so * O_SADDLE_SHIFT + d * DEATH_SHIFT

    tau_kwargs = {"threads": threads}
    if w_slack is not None:
        tau_kwargs["w_slack"] = w_slack
    tau1 = tau_fn(start_strict, **tau_kwargs).tau
    tau2 = tau_fn(final_strict, **tau_kwargs).tau

    def endpoint_tau_prime(g: GridDiagram, which: str) -> Optional[Fraction]:
        if not is_tight(g):
            warnings.append(
                f"{which} endpoint is not tight; tau' and the tau = tau' + (l-1)/2 "
                "relation are skipped there"
            )
            return None
        return tau_prime(g, w_slack=w_slack, threads=threads)

    tp1 = endpoint_tau_prime(start_strict, "initial")
    tp2 = endpoint_tau_prime(final_strict, "final")

    bound_satisfied: Optional[bool]
    if genus.denominator != 1 or genus < 0:
        warnings.append(
            f"genus formula gives {genus}: the traced surface is not a connected "
            "cobordism, so the genus inequality is not applicable"
        )
        bound_satisfied = None
    elif tp1 is None or tp2 is None:
        warnings.append(
            "an endpoint is not a tight link diagram, so its tau is a "
            "spatial-graph value and the link genus inequality is not applicable"
        )
        bound_satisfied = None
    else:
        bound_satisfied = (1 - genus - l1) <= (tau1 - tau2) <= (genus + l2 - 1)
    return CobordismReport(
        l1=l1,
        l2=l2,
        births=b,
        deaths=d,
        x_saddles=sx,
        o_saddles=so,
        genus=genus,
        a_prime_shift=shift,
        tau1=tau1,
        tau2=tau2,
        tau_prime1=tp1,
        tau_prime2=tp2,
        bound_satisfied=bound_satisfied,
        final=final,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class SliceVerdict:
    obstructed: bool
    branch: str

    @property
    def verdict(self) -> str:
        return "obstructed" if self.obstructed else "inconclusive"


def slice_obstruction(tau_value, l: int) -> SliceVerdict:
    """Sliceness obstruction from tau: obstructed iff tau > 0 or tau <= -l."""
    t = Fraction(tau_value)
    if l < 1:
        raise ValueError("component count must be positive")
    if t > 0:
        return SliceVerdict(True, f"tau = {t} > 0")
    if t <= -l:
        return SliceVerdict(True, f"tau = {t} <= -{l}")
    return SliceVerdict(False, f"tau = {t} lies in [{1 - l}, 0]")


__all__ = [
    "ScriptError",
    "alexander_prime",
    "tau_prime",
    "CobordismScript",
    "parse_script_file",
    "CobordismReport",
    "run_script",
    "SliceVerdict",
    "slice_obstruction",
    "BIRTH_SHIFT",
    "X_SADDLE_SHIFT",
    "O_SADDLE_SHIFT",
    "DEATH_SHIFT",
]
