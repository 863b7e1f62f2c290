"""Command-line interface.

Every run prints one structured envelope (JSON by default, or an
aligned text table) holding the command name, a content digest of the
inputs, the command-specific result, and any diagnostics.  Numbers are
exact: half-integers render as fractions like "3/2", never floats.

Exit status: 0 success, 1 domain verdict (invalid diagram, tau-equality
failure, obstruction found, bound violated), 2 usage/IO/parse errors,
3 undetermined-in-window.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from floergrid.grid import (
    GridDiagram,
    GridError,
    GridParseError,
    GridValidationError,
    component_count,
    is_tight,
    parse_grid,
    serialize_grid,
    validate,
)
from floergrid.moves import IllegalMoveError, apply_move, parse_move_script
from floergrid.floer import SizeCapError, generators
from floergrid.homology import DEFAULT_WINDOW_SLACK, UndeterminedError, WindowError, tau
from floergrid.cobordism import (
    ScriptError,
    parse_script_file,
    run_script,
    slice_obstruction,
)


EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_WINDOW = 3

INFO_TABLE_LIMIT = 6


def fmt_number(x) -> object:
    """Exact rendering: ints stay ints, half-integers become 'p/q'."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    f = Fraction(x)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def _digest(paths: List[Path]) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(p.read_bytes())
    return h.hexdigest()


def _render_table(value, indent: str = "") -> List[str]:
    lines: List[str] = []
    if isinstance(value, dict):
        for k in value:
            v = value[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}{k}:")
                lines.extend(_render_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.extend(_render_table(v, indent + "  "))
            else:
                lines.append(f"{indent}- {v}")
    else:
        lines.append(f"{indent}{value}")
    return lines


def emit(command: str, digest: str, result: Dict, diagnostics: List[str], fmt: str) -> None:
    envelope = {
        "command": command,
        "input_digest": digest,
        "result": result,
        "diagnostics": diagnostics,
    }
    if fmt == "json":
        print(json.dumps(envelope, sort_keys=True, indent=2))
    else:
        for line in _render_table(envelope):
            print(line)


def _read_grid(path: Path, check: bool = True) -> GridDiagram:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScriptError(f"cannot read {path}: {exc}") from None
    return parse_grid(text, check=check)


def cmd_validate(args, fmt: str) -> int:
    path = Path(args.grid)
    g = _read_grid(path, check=False)
    violations = validate(g)
    result = {
        "valid": not violations,
        "violations": [str(v) for v in violations],
        "size": g.n,
    }
    emit("validate", _digest([path]), result, [], fmt)
    return EXIT_OK if not violations else EXIT_VERDICT


def cmd_info(args, fmt: str) -> int:
    path = Path(args.grid)
    g = _read_grid(path)
    gens = list(generators(g, override=args.override_size_cap))
    ms = [x.maslov for x in gens]
    alx = [x.alex for x in gens]
    result: Dict = {
        "size": g.n,
        "generator_count": len(gens),
        "maslov_range": [min(ms), max(ms)],
        "alexander_range": [min(alx), max(alx)],
        "components": component_count(g),
    }
    if g.n <= INFO_TABLE_LIMIT:
        result["generators"] = [
            {
                "perm": " ".join(str(c + 1) for c in x.perm),
                "maslov": x.maslov,
                "alexander": x.alex,
            }
            for x in gens
        ]
    emit("info", _digest([path]), result, [], fmt)
    return EXIT_OK


def cmd_tau(args, fmt: str) -> int:
    path = Path(args.grid)
    g = _read_grid(path)
    res = tau(
        g,
        w_slack=args.window,
        certify=args.certify,
        threads=args.threads,
        override=args.override_size_cap,
    )
    result = {
        "tau": fmt_number(res.tau),
        "shift": fmt_number(res.shift),
        "m_max": res.m_max,
        "m_min": res.m_min,
        "window": list(res.window),
        "certified": res.certified,
        "hat_homology": {str(i): d for i, d in res.hat_dims.items()},
    }
    emit("tau", _digest([path]), result, [], fmt)
    return EXIT_OK


def cmd_moves(args, fmt: str) -> int:
    grid_path = Path(args.grid)
    script_path = Path(args.script)
    g = _read_grid(grid_path)
    try:
        moves = parse_move_script(script_path.read_text())
    except OSError as exc:
        raise ScriptError(f"cannot read {script_path}: {exc}") from None
    diagnostics: List[str] = []
    cur = g
    for step, mv in enumerate(moves, start=1):
        try:
            cur = apply_move(cur, mv)
        except IllegalMoveError as exc:
            raise IllegalMoveError(f"step {step} ({mv.to_line()}): {exc}") from None
    result: Dict = {
        "moves_applied": len(moves),
        "final_size": cur.n,
        "final_grid": serialize_grid(cur),
    }
    status = EXIT_OK
    if args.check_tau:
        isotopy_only = all(mv.is_isotopy for mv in moves)
        if not isotopy_only:
            diagnostics.append(
                "script contains non-isotopy moves; tau equality is not asserted"
            )
            result["tau_check"] = "skipped"
        else:
            before = tau(g, threads=args.threads, override=args.override_size_cap).tau
            after = tau(cur, threads=args.threads, override=args.override_size_cap).tau
            result["tau_before"] = fmt_number(before)
            result["tau_after"] = fmt_number(after)
            result["tau_check"] = "equal" if before == after else "MISMATCH"
            if before != after:
                diagnostics.append(
                    f"tau changed under an isotopy script: {before} -> {after}"
                )
                status = EXIT_VERDICT
    emit("moves", _digest([grid_path, script_path]), result, diagnostics, fmt)
    return status


def cmd_cobordism(args, fmt: str) -> int:
    script_path = Path(args.script)
    script = parse_script_file(script_path)
    report = run_script(script, w_slack=args.window, threads=args.threads)
    lower = 1 - report.genus - report.l1
    upper = report.genus + report.l2 - 1
    result = {
        "l1": report.l1,
        "l2": report.l2,
        "births": report.births,
        "deaths": report.deaths,
        "x_saddles": report.x_saddles,
        "o_saddles": report.o_saddles,
        "genus": fmt_number(report.genus),
        "a_prime_shift": fmt_number(report.a_prime_shift),
        "tau_initial": fmt_number(report.tau1),
        "tau_final": fmt_number(report.tau2),
        "tau_prime_initial": None if report.tau_prime1 is None else fmt_number(report.tau_prime1),
        "tau_prime_final": None if report.tau_prime2 is None else fmt_number(report.tau_prime2),
        "bound": {
            "lower": fmt_number(lower),
            "difference": fmt_number(report.tau1 - report.tau2),
            "upper": fmt_number(upper),
            "satisfied": report.bound_satisfied,
        },
    }
    emit("cobordism", _digest([script_path]), result, list(report.warnings), fmt)
    if report.bound_satisfied is False:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_slice_check(args, fmt: str) -> int:
    path = Path(args.grid)
    g = _read_grid(path)
    if not is_tight(g):
        raise ScriptError("slice check requires a tight link grid (one special O per component)")
    l = component_count(g)
    res = tau(g, w_slack=args.window, threads=args.threads, override=args.override_size_cap)
    verdict = slice_obstruction(res.tau, l)
    result = {
        "tau": fmt_number(res.tau),
        "components": l,
        "verdict": verdict.verdict,
        "branch": verdict.branch,
    }
    emit("slice-check", _digest([path]), result, [], fmt)
    return EXIT_VERDICT if verdict.obstructed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floergrid",
        description="Grid-diagram Floer homology, tau invariants, and cobordism checks",
    )
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--window", type=int, default=DEFAULT_WINDOW_SLACK,
                        help="Maslov window slack below the lowest generator grading")
    parser.add_argument("--certify", action="store_true", default=True,
                        help="certify results by recomputing with a widened window (default)")
    parser.add_argument("--no-certify", dest="certify", action="store_false")
    parser.add_argument("--override-size-cap", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a grid file's invariants")
    p.add_argument("grid")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", help="generator table with gradings")
    p.add_argument("grid")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("tau", help="compute the tau invariant")
    p.add_argument("grid")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("moves", help="apply a move script to a grid")
    p.add_argument("grid")
    p.add_argument("script")
    p.add_argument("--check-tau", action="store_true")
    p.set_defaults(func=cmd_moves)

    p = sub.add_parser("cobordism", help="run a cobordism script and check the genus bound")
    p.add_argument("script")
    p.set_defaults(func=cmd_cobordism)

    p = sub.add_parser("slice-check", help="evaluate the slice obstruction")
    p.add_argument("grid")
    p.set_defaults(func=cmd_slice_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format
    try:
        return args.func(args, fmt)
    except (UndeterminedError, WindowError) as exc:
        emit(args.command, "", {"error": str(exc)}, [], fmt)
        return EXIT_WINDOW
    except (GridParseError, GridValidationError, ScriptError, SizeCapError) as exc:
        emit(args.command, "", {"error": str(exc)}, [], fmt)
        return EXIT_USAGE
    except IllegalMoveError as exc:
        emit(args.command, "", {"error": str(exc)}, [], fmt)
        return EXIT_VERDICT
    except GridError as exc:
        emit(args.command, "", {"error": str(exc)}, [], fmt)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
