"""Acceptance suite: one test and one printed pass/fail line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import contextlib
import itertools
import random
import time
from fractions import Fraction

import pytest

import corpus
from naive_oracle import NaiveComplex
from floergrid.cobordism import CobordismScript, run_script, slice_obstruction
from floergrid.floer import (
    ChainElement,
    alexander,
    alexander_term,
    d_minus,
    empty_rectangles,
    maslov,
    maslov_term,
)
from floergrid.grid import component_count, parse_grid, validate
from floergrid.homology import graded_homology, hat_homology_dims, tau
from floergrid.moves import GridMove, apply_move, commutation_certificate, parse_move_script
from floergrid.pentagons import hexagon_homotopy, pentagon_map


@contextlib.contextmanager
def criterion(num, label):
    start = time.time()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num}: FAIL - {label} [{time.time() - start:.1f}s]")
        raise
    print(f"ACCEPTANCE {num}: PASS - {label} [{time.time() - start:.1f}s]")


CORPUS = corpus.build_corpus()


def _generators_for_checks(g, rng):
    if g.n <= 5:
        return list(itertools.permutations(range(g.n)))
    perms = set()
    while len(perms) < 80:
        p = list(range(g.n))
        rng.shuffle(p)
        perms.add(tuple(p))
    return sorted(perms)


def test_criterion_1_differential_squares_to_zero():
    with criterion(1, "d- o d- = 0 across the corpus (n<=5 exhaustive, n=6 sampled)"):
        assert len(CORPUS) >= 50
        assert all(not validate(g) for _, g in CORPUS)
        rng = random.Random(99)
        sampled_n6 = 0
        for name, g in CORPUS:
            perms = _generators_for_checks(g, rng)
            if g.n == 6:
                sampled_n6 += len(perms)
            for perm in perms:
                assert not d_minus(g, d_minus(g, ChainElement.of(perm))), (name, perm)
        assert sampled_n6 >= 200


def test_criterion_2_per_term_grading_laws():
    with criterion(2, "every differential term drops Maslov by 1 and Alexander by the X count"):
        rng = random.Random(7)
        for name, g in CORPUS:
            for perm in _generators_for_checks(g, rng):
                m0, a0 = maslov(g, perm), alexander(g, perm)
                for rect in empty_rectangles(g, perm):
                    assert maslov_term(g, rect.o_hits, rect.to_perm) == m0 - 1, name
                    assert (
                        alexander_term(g, rect.o_hits, rect.to_perm) == a0 - rect.x_count
                    ), name


def test_criterion_3_tau_unknot():
    with criterion(3, "tau(unknot) = 0 on the 2x2 grid and stabilized/commuted variants"):
        assert tau(parse_grid(corpus.UNKNOT_2)).tau == 0
        variants = corpus.unknot_variants(6)
        assert len(variants) >= 5
        for g in variants:
            assert g.n <= 5
            assert tau(g).tau == 0, g


def test_criterion_4_move_invariance():
    with criterion(4, "tau and graded span invariant under random legal isotopy scripts"):
        bases = [
            "unknot-2",
            "unknot-2b",
            "wedge-3",
            "wedge-4",
            "hopf-positive",
            "hopf-negative",
            "unlink-2",
            "trefoil-left",
            "trefoil-right",
        ]
        named = corpus.named_diagrams()
        diagrams = [named[k] for k in bases]
        diagrams.append(corpus.random_link_grids(4, 1, seed=77)[0])
        assert len(diagrams) >= 10
        rng = random.Random(2024)
        for g in diagrams:
            base_res = tau(g)
            base_span = graded_homology(g).span
            for _ in range(20):
                length = rng.randrange(1, 7)
                _, moved = corpus.random_isotopy_script(g, length, rng, max_size=5)
                res = tau(moved)
                assert res.tau == base_res.tau, (g, moved)
                assert graded_homology(moved).span == base_span, (g, moved)


def test_criterion_5_oracle_equivalence():
    with criterion(5, "naive oracle reproduces graded tables, hat dims, and tau for n<=4"):
        checked = 0
        for name, g in CORPUS:
            if g.n > 4:
                continue
            oracle = NaiveComplex(g)
            window = oracle.default_window(4)
            assert graded_homology(g, window).dims == oracle.graded_table(window), name
            assert hat_homology_dims(g, window) == oracle.hat_dims(window), name
            assert tau(g).tau == oracle.tau(window), name
            checked += 1
        assert checked >= 15


def test_criterion_6_known_values():
    with criterion(6, "known knot/link values, certified under window widening"):
        named = corpus.named_diagrams()
        assert tau(named["trefoil-right"]).tau == 1
        assert tau(named["trefoil-left"]).tau == -1
        fig8 = tau(named["figure-eight"])
        assert fig8.tau == 0 and fig8.certified
        assert sum(hat_homology_dims(named["unknot-2"]).values()) == 1
        assert sum(hat_homology_dims(named["unlink-2"]).values()) == 2
        assert sum(hat_homology_dims(named["hopf-positive"]).values()) == 2


def _bound_holds(report):
    lower = 1 - report.genus - report.l1
    upper = report.genus + report.l2 - 1
    return lower <= report.tau1 - report.tau2 <= upper


def test_criterion_7_cobordism_scripts():
    with criterion(7, "genus inequality and tau = tau' + (l-1)/2 on five cobordism scripts"):
        named = corpus.named_diagrams()
        scripts = [
            (
                "hopf-to-unknot saddle",
                CobordismScript(
                    initial=named["hopf-positive"], moves=(GridMove("xsaddle", (1, 1)),)
                ),
            ),
            (
                "unknot stabilization-only",
                CobordismScript(
                    initial=parse_grid(corpus.UNKNOT_2),
                    moves=tuple(parse_move_script("stabilize-row 1 1\ncyclic-row top")),
                ),
            ),
            (
                "trefoil-to-unknot genus 1",
                CobordismScript(
                    initial=named["trefoil-right"],
                    moves=(GridMove("xsaddle", (1, 2)), GridMove("xsaddle", (4, 4))),
                ),
            ),
            (
                "unlink birth/death round trip",
                CobordismScript(
                    initial=named["unlink-2"],
                    moves=(GridMove("birth", (5, 5)), GridMove("death", (5, 5))),
                    final_check=named["unlink-2"],
                ),
            ),
            (
                "one-to-three component split",
                CobordismScript(
                    initial=parse_grid(
                        "size 6\nO 1 5\nO 2 3\nO 3 2 special\nO 4 1\nO 5 6\nO 6 4\n"
                        "X 1 6\nX 2 4\nX 3 1\nX 4 3\nX 5 2\nX 6 5\n"
                    ),
                    moves=tuple(
                        parse_move_script(
                            "osaddle 2 2\ncommute-cols 4\ncommute-cols 3\nosaddle 1 2"
                        )
                    ),
                ),
            ),
            (
                "unknot-to-unlink split",
                CobordismScript(
                    initial=parse_grid(
                        "size 4\nO 1 1\nO 2 3\nO 3 2 special\nO 4 4\n"
                        "X 1 2\nX 2 1\nX 3 4\nX 4 3\n"
                    ),
                    moves=(GridMove("osaddle", (2, 2)),),
                ),
            ),
        ]
        genuinely_checked = 0
        for label, script in scripts:
            report = run_script(script)
            if report.bound_satisfied is None:
                # not-applicable cases: a disconnected traced surface
                # (negative genus formula) or an untight endpoint whose tau
                # is a spatial-graph value; neither can violate the link
                # inequality, which is what this criterion guards
                assert report.genus < 0 or report.tau_prime2 is None, label
            else:
                assert report.bound_satisfied and _bound_holds(report), label
                genuinely_checked += 1
            for tp, tv, g_end in (
                (report.tau_prime1, report.tau1, script.initial),
                (report.tau_prime2, report.tau2, report.final.with_mode(False)),
            ):
                if tp is not None:
                    l = component_count(g_end)
                    assert tv == tp + Fraction(l - 1, 2), label
        assert genuinely_checked >= 4


def test_criterion_8_pentagon_hexagon_identities():
    with criterion(8, "pentagon chain-map and hexagon homotopy identities, exhaustive"):
        pairs = []
        for _, g in CORPUS:
            if g.n != 4:
                continue
            for i in range(1, g.n):
                cert = commutation_certificate(g, i, "cols")
                if cert is not None and not cert.degenerate:
                    pairs.append((g, apply_move(g, GridMove("commute-cols", (i,)))))
                    break
            if len(pairs) >= 3:
                break
        assert len(pairs) >= 3
        for g, h in pairs:
            for perm in itertools.permutations(range(g.n)):
                e = ChainElement.of(perm)
                image = pentagon_map(g, h, e)
                assert not (d_minus(h, image) + pentagon_map(g, h, d_minus(g, e)))
                back = pentagon_map(h, g, image)
                homotopy = d_minus(g, hexagon_homotopy(g, h, e)) + hexagon_homotopy(
                    g, h, d_minus(g, e)
                )
                assert not (e + back + homotopy)
                for exps, target in image.terms:
                    assert maslov(h, target) - 2 * sum(exps) == maslov(g, perm)


def test_criterion_9_slice_obstruction_unknot():
    with criterion("9a", "slice check inconclusive for the unknot"):
        g = parse_grid(corpus.UNKNOT_2)
        assert not slice_obstruction(tau(g).tau, component_count(g)).obstructed


def test_criterion_9_slice_obstruction_unlink():
    with criterion("9b", "slice check inconclusive for the 2-component unlink"):
        g = corpus.named_diagrams()["unlink-2"]
        assert not slice_obstruction(tau(g).tau, component_count(g)).obstructed


def test_criterion_9_slice_obstruction_hopf():
    # Stated expectation: the positive Hopf link is obstructed.  The genus
    # inequality (checked in criterion 7) forces tau(Hopf) <= 0 via the
    # one-saddle cobordism to the unknot, and the engine computes
    # tau(Hopf+) = 0 (cross-checked by the oracle), so the obstruction
    # cannot fire; this faithful check is expected to fail.
    with criterion("9c", "slice check obstructed for the positive Hopf link"):
        g = corpus.named_diagrams()["hopf-positive"]
        verdict = slice_obstruction(tau(g).tau, component_count(g))
        assert verdict.obstructed, (
            f"tau(Hopf+) = {tau(g).tau}: the obstruction does not fire; "
            "this is forced by the genus inequality (criterion 7)"
        )


@pytest.mark.skipif(
    "FLOERGRID_RUN_SLOW" not in __import__("os").environ,
    reason="slow oracle cross-check; set FLOERGRID_RUN_SLOW=1 to run",
)
def test_slow_oracle_cross_check_trefoil_n5():
    """Independent oracle agreement at grid size 5 (several minutes)."""
    g = corpus.named_diagrams()["trefoil-right"]
    oracle = NaiveComplex(g)
    window = oracle.default_window(4)
    assert tau(g).tau == oracle.tau(window)
    assert graded_homology(g, window).dims == oracle.graded_table(window)
