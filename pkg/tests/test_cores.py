import random

from cqrepair import Schema, core_cq, core_example, equivalent, is_core, maps_to, parse_cq

from oracles import brute_core_size, random_cq, rewrite_equivalent

S = Schema(R=2, P=1)


def test_core_size_matches_brute_force():
    rng = random.Random(9)
    for _ in range(150):
        q = random_cq(rng, S, 1, rng.randint(1, 5), 4)
        c = core_example(q.example)
        assert len(c.facts) == brute_core_size(q.example)
        assert c.facts <= q.example.facts
        assert maps_to(q.example, c) and maps_to(c, q.example)
        assert is_core(c)


def test_core_of_equivalent_rewrite_is_isomorphic():
    from cqrepair import isomorphic
    rng = random.Random(10)
    for _ in range(60):
        q = random_cq(rng, S, 1, rng.randint(1, 3), 3)
        p = rewrite_equivalent(rng, q)
        assert isomorphic(core_cq(p), core_cq(q))


def test_known_cores():
    assert len(core_cq(parse_cq("q(x) :- R(x,y), R(x,z) ."))) == 1
    # a 4-cycle with a free vertex is already a core
    c4 = parse_cq("q(x) :- R(x,y), R(y,z), R(z,u), R(u,x) .")
    assert len(core_cq(c4)) == 4
    # a Boolean symmetric path folds onto one symmetric edge
    b4 = parse_cq("q() :- R(x,y), R(y,x), R(y,z), R(z,y) .")
    assert len(core_cq(b4)) == 2
    assert equivalent(core_cq(b4), b4)
