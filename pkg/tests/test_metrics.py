import random
from fractions import Fraction

import pytest

from cqrepair import (ArityMismatch, ExampleDistribution, InvalidDistribution,
                      RepeatedHeadVariables, Schema, core_example, distance, edit_dist,
                      edit_dist_leq, enumerate_cqs, mu_dist, parse_cq, parse_example, sdi_dist,
                      sdq_dist, smallest_distinguishing_instance)
from cqrepair.metrics import naive_atom_difference

from oracles import brute_edit_dist, brute_hom, brute_member, random_cq, small_examples

S = Schema(R=2, P=1)
LOOP = parse_cq("q() :- R(x,x) .")
K3 = parse_cq("q() :- R(x1,x2), R(x1,x3), R(x2,x1), R(x2,x3), R(x3,x1), R(x3,x2) .")


def test_edit_distance_against_brute_force():
    rng = random.Random(30)
    for _ in range(120):
        q1 = random_cq(rng, S, 1, rng.randint(1, 4), 4)
        q2 = random_cq(rng, S, 1, rng.randint(1, 4), 4)
        c1, c2 = core_example(q1.example), core_example(q2.example)
        d = edit_dist(q1, q2)
        assert d == brute_edit_dist(q1, q2, c1, c2)
        assert edit_dist(q2, q1) == d
        assert edit_dist_leq(q1, q2, d)
        assert d == 0 or not edit_dist_leq(q1, q2, d - 1)


def test_edit_distance_triangle_inequality():
    rng = random.Random(31)
    for _ in range(60):
        a, b, c = (random_cq(rng, S, 1, rng.randint(1, 3), 3) for _ in range(3))
        assert edit_dist(a, c) <= edit_dist(a, b) + edit_dist(b, c)


def test_edit_distance_works_on_cores():
    q1 = parse_cq("q() :- R(x1,x2), R(x1,x3), R(x2,x4), R(x3,x4) .")
    q2 = parse_cq("q() :- R(x1,x2), R(x1,x3), R(x2,x4), R(x3,x4), A(x2), B(x3) .")
    assert naive_atom_difference(q1, q2) == 2
    assert edit_dist(q1, q2) == 4


def test_edit_distance_needs_repetition_free_heads():
    with pytest.raises(RepeatedHeadVariables):
        edit_dist(parse_cq("q(x,x) :- R(x,y) ."), parse_cq("q(x,y) :- R(x,y) ."))


def brute_sdi(q1, q2, schema):
    best = None
    for e in small_examples(schema, q1.arity, 3, 3):
        if brute_member(e, q1) != brute_member(e, q2):
            n = len(e.facts)
            best = n if best is None else min(best, n)
    return Fraction(0) if best is None else Fraction(1, best)


def test_sdi_against_brute_force():
    # queries of at most two atoms are told apart within three facts over three values
    s = Schema(R=2, P=1)
    qs = list(enumerate_cqs(s, 1, 2))
    rng = random.Random(32)
    for _ in range(25):
        a, b = rng.choice(qs), rng.choice(qs)
        assert sdi_dist(a, b) == brute_sdi(a, b, s)


def test_sdq_against_brute_force():
    qs = list(enumerate_cqs(S, 1, 3))
    small = [q for q in qs if len(q) <= 2]
    rng = random.Random(33)
    for _ in range(60):
        a, b = rng.choice(small), rng.choice(small)
        sizes = [len(p) for p in qs if brute_hom(p.example, a.example) != brute_hom(p.example, b.example)]
        want = Fraction(0) if not sizes else Fraction(1, min(sizes))
        assert sdq_dist(a, b) == want


def test_loop_versus_clique():
    assert sdi_dist(LOOP, K3) == Fraction(1, 6)
    assert sdq_dist(LOOP, K3) == 1
    w = smallest_distinguishing_instance(LOOP, K3)
    assert len(w.facts) == 6


def test_mu_distance():
    mu = ExampleDistribution(((parse_example("R(a,a)."), Fraction(1, 4)),
                              (parse_example("R(a,b). R(b,a)."), Fraction(1, 4)),
                              (parse_example("R(a,b). R(b,c). R(c,a). R(b,a). R(c,b). R(a,c)."),
                               Fraction(1, 2))))
    assert mu_dist(LOOP, K3, mu) == Fraction(1, 2)
    assert distance("mu", LOOP, LOOP, mu) == 0
    with pytest.raises(InvalidDistribution):
        distance("mu", LOOP, K3)


def test_bad_distributions():
    e = parse_example("R(a,a).")
    with pytest.raises(InvalidDistribution):
        ExampleDistribution(((e, Fraction(1, 2)),))
    with pytest.raises(InvalidDistribution):
        ExampleDistribution(((e, Fraction(0)), (e, Fraction(1))))
    with pytest.raises(InvalidDistribution):
        ExampleDistribution(())


def test_equivalent_queries_have_distance_zero():
    a = parse_cq("q(x) :- R(x,y) .")
    b = parse_cq("q(x) :- R(x,y), R(x,z) .")
    for m in ("edit", "sdi", "sdq"):
        assert distance(m, a, b) == 0


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        sdi_dist(parse_cq("q(x) :- R(x,y) ."), LOOP)
