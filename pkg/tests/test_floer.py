"""Generators, gradings, rectangles, and differentials."""

import itertools
import random
from fractions import Fraction

import pytest

import corpus
from naive_oracle import naive_alexander, naive_maslov
from floergrid.floer import (
    ChainElement,
    SizeCapError,
    alexander,
    alexander_relative,
    alexander_term,
    d_graded,
    d_hat,
    d_minus,
    empty_rectangles,
    generators,
    maslov,
    maslov_term,
    pairing,
)
from floergrid.grid import parse_grid


UNKNOT = parse_grid(corpus.UNKNOT_2)
XA = (0, 1)  # identity: points (0,0),(1,1)
XB = (1, 0)


def test_generator_counts():
    assert len(list(generators(UNKNOT))) == 2
    g4 = parse_grid(corpus.UNLINK_2)
    assert len(list(generators(g4))) == 24


def test_size_cap(monkeypatch):
    g = parse_grid(corpus.UNKNOT_2)
    monkeypatch.setenv("FLOERGRID_MAX_N", "1")
    with pytest.raises(SizeCapError):
        list(generators(g))
    assert len(list(generators(g, override=True))) == 2


def test_pairing_single_points():
    assert pairing([(0, 0)], [(1, 1)]) == Fraction(1, 2)
    assert pairing([(0, 0)], []) == 0
    assert pairing([(0, 0)], [(1, 0)]) == 0


def test_pairing_generator_against_o_set():
    o_set = [(Fraction(1, 2), Fraction(3, 2)), (Fraction(3, 2), Fraction(1, 2))]
    assert pairing([(0, 0), (1, 1)], o_set) == 1


def test_pairing_symmetry_and_bilinearity():
    rng = random.Random(2)
    pts = lambda: [((rng.randrange(6), rng.randrange(6)), rng.randrange(-2, 3)) for _ in range(4)]
    for _ in range(20):
        a, b, c = pts(), pts(), pts()
        assert pairing(a, b) == pairing(b, a)
        assert pairing(a, b + c) == pairing(a, b) + pairing(a, c)


def test_maslov_unknot():
    assert maslov(UNKNOT, XA) == 0
    assert maslov(UNKNOT, XB) == -1


def test_maslov_term_extension():
    assert maslov_term(UNKNOT, (0, 2), XA) == -4


def test_alexander_unknot():
    assert alexander(UNKNOT, XA) == 1
    assert alexander(UNKNOT, XB) == 0


def test_alexander_term_extension():
    g = parse_grid(corpus.WEDGE_3)  # column-1 O has weight 2
    for perm in itertools.permutations(range(3)):
        assert alexander_term(g, (1, 0, 0), perm) == alexander(g, perm) - 2


def test_gradings_match_naive_oracle():
    for name in ("unknot-2", "wedge-3", "hopf-positive"):
        g = corpus.named_diagrams()[name]
        for perm in itertools.permutations(range(g.n)):
            assert maslov(g, perm) == naive_maslov(g, perm), name
            assert alexander(g, perm) == naive_alexander(g, perm), name


def test_alexander_relative_examples():
    assert alexander_relative(UNKNOT, XA, XB) == 1
    assert alexander_relative(UNKNOT, XA, XA) == 0


def test_alexander_relative_matches_difference():
    rng = random.Random(5)
    for name in ("unlink-2", "wedge-4", "hopf-negative"):
        g = corpus.named_diagrams()[name]
        perms = list(itertools.permutations(range(g.n)))
        for _ in range(25):
            x, y = rng.choice(perms), rng.choice(perms)
            assert alexander_relative(g, x, y) == alexander(g, x) - alexander(g, y)


def test_empty_rectangles_unknot():
    rects_a = empty_rectangles(UNKNOT, XA)
    assert len(rects_a) == 2
    assert all(r.x_count == 1 and r.o_hits == (0, 0) for r in rects_a)
    assert all(r.to_perm == XB for r in rects_a)
    rects_b = empty_rectangles(UNKNOT, XB)
    assert len(rects_b) == 2
    assert sorted(r.o_hits for r in rects_b) == [(0, 1), (1, 0)]
    assert all(r.x_count == 0 for r in rects_b)


def test_two_rectangles_per_transposition_at_n2():
    for g in (UNKNOT, parse_grid(corpus.UNKNOT_2B)):
        for perm in ((0, 1), (1, 0)):
            assert len(empty_rectangles(g, perm)) == 2


def test_d_minus_unknot():
    assert not d_minus(UNKNOT, ChainElement.of(XA))
    out = d_minus(UNKNOT, ChainElement.of(XB))
    assert out.sorted_terms() == [((0, 1), XA), ((1, 0), XA)]
    assert not d_minus(UNKNOT, ChainElement.zero())


def test_d_hat_unknot():
    # column-1 O is the vertex: its variable dies in the hat quotient
    assert d_hat(UNKNOT, ChainElement.of(XB)).sorted_terms() == [((0, 1), XA)]
    assert not d_hat(UNKNOT, ChainElement.of(XA))
    two = d_hat(UNKNOT, ChainElement.of(XB, exps=(0, 1)))
    assert two.sorted_terms() == [((0, 2), XA)]


def test_d_graded_unknot():
    assert d_graded(UNKNOT, ChainElement.of(XB)).sorted_terms() == [((0, 1), XA)]
    assert not d_graded(UNKNOT, ChainElement.of(XA))


def test_d_graded_drops_x_rectangles():
    for name in ("wedge-3", "hopf-positive"):
        g = corpus.named_diagrams()[name]
        for perm in itertools.permutations(range(g.n)):
            full = d_hat(g, ChainElement.of(perm))
            graded = d_graded(g, ChainElement.of(perm))
            a0 = alexander(g, perm)
            expected = frozenset(
                t for t in full.terms if alexander_term(g, t[0], t[1]) == a0
            )
            assert graded.terms == expected, name


def test_differential_squares_to_zero_spot():
    for name in ("unknot-2", "wedge-3", "unlink-2", "trefoil-left"):
        g = corpus.named_diagrams()[name]
        for perm in itertools.permutations(range(g.n)):
            e = ChainElement.of(perm)
            assert not d_minus(g, d_minus(g, e)), name
            assert not d_hat(g, d_hat(g, e)), name
            assert not d_graded(g, d_graded(g, e)), name


def test_per_term_grading_laws_spot():
    for name in ("unknot-2", "wedge-4", "hopf-negative"):
        g = corpus.named_diagrams()[name]
        for perm in itertools.permutations(range(g.n)):
            m0, a0 = maslov(g, perm), alexander(g, perm)
            for rect in empty_rectangles(g, perm):
                assert maslov_term(g, rect.o_hits, rect.to_perm) == m0 - 1
                assert alexander_term(g, rect.o_hits, rect.to_perm) == a0 - rect.x_count
