import random

import pytest

from cqrepair import (EmptyList, EmptySchema, Schema, canonical_example, conjunction, contained,
                      direct_product, maps_to, maximally_constrained, member,
                      minimally_constrained_set, normalize_head, parse_cq, parse_labeled,
                      product_all, quotient, restore_head)
from cqrepair.model import DataExample, atom

from oracles import brute_hom, brute_member, random_cq, random_example

S = Schema(R=2, P=1)


def test_product_lemma():
    # e -> a x b  iff  e -> a and e -> b
    rng = random.Random(11)
    for _ in range(150):
        a = random_example(rng, S, 1, 3, 3)
        b = random_example(rng, S, 1, 3, 3)
        e = random_example(rng, S, 1, rng.randint(1, 3), 3)
        p = direct_product(a, b)
        assert brute_hom(e, p) == (brute_hom(e, a) and brute_hom(e, b))


def test_product_projections():
    rng = random.Random(12)
    for _ in range(50):
        es = [random_example(rng, S, 1, 3, 3) for _ in range(3)]
        p = product_all(es)
        for e in es:
            assert maps_to(p, e)


def test_product_errors():
    with pytest.raises(EmptyList):
        product_all([])


def test_conjunction_law():
    # e in q1∧q2  iff  e in q1 and e in q2
    rng = random.Random(13)
    for _ in range(150):
        q1 = random_cq(rng, S, 1, rng.randint(1, 2), 3)
        q2 = random_cq(rng, S, 1, rng.randint(1, 2), 3)
        c = conjunction(q1, q2)
        assert contained(c, q1) and contained(c, q2)
        for _ in range(4):
            e = random_example(rng, S, 1, 4, 3)
            assert brute_member(e, c) == (brute_member(e, q1) and brute_member(e, q2))


def test_conjunction_merges_head_equalities():
    q1 = parse_cq("q(x,x) :- P(x) .")
    q2 = parse_cq("q(x,y) :- R(x,y) .")
    c = conjunction(q1, q2)
    assert c.head[0] == c.head[1]
    assert len(c) == 2


def test_maximally_and_minimally_constrained():
    s = Schema(R=2, P=1)
    top = maximally_constrained(s, 1)
    assert str(top) == "q(x) :- P(x), R(x,x) ."
    mins = minimally_constrained_set(s, 1)
    assert len(mins) == 3  # P(x), R(x,y), R(y,x)
    rng = random.Random(14)
    for _ in range(50):
        q = random_cq(rng, s, 1, rng.randint(1, 3), 3)
        assert contained(top, q)
        assert any(contained(q, m) for m in mins)
    with pytest.raises(EmptySchema):
        maximally_constrained(Schema(), 1)


def test_quotient():
    e = DataExample(frozenset({atom("R", "a", "b"), atom("R", "b", "c")}), ("a",))
    q = quotient(e, [("a", "c")])
    assert len(q.values) == 2
    assert maps_to(e, q)


def test_normalize_head_round_trip():
    q = parse_cq("q(x,x,y) :- R(x,y) .")
    E = parse_labeled("+example\nR(a,b).\ntuple: (a,a,b)\n-example\nR(c,d). R(d,c).\ntuple: (c,d,d)\n")
    qh, Eh, back = normalize_head(q, E)
    assert qh.repetition_free and qh.arity == 2
    assert Eh.arity == 2
    assert member(Eh.positives[0], qh)
    # the negative has its first two positions identified, so c and d merge
    assert len(Eh.negatives[0].values) == 1
    assert restore_head(qh, back) == q


def test_canonical_example_is_body():
    q = parse_cq("q(x) :- R(x,y) .")
    assert canonical_example(q).facts == q.body
