import random

import pytest

from cqrepair import (LabeledExampleSet, NoFittingExists, RepeatedHeadVariables, Schema, core_cq,
                      edit_bounded_fitting, edit_dist, edit_repair_construct, edit_repair_exists,
                      edit_repair_verify, enumerate_cqs, equivalent, fits_all, generic_dist_repair,
                      parse_cq, parse_labeled)
from cqrepair.distrepair import conforming_witness

from oracles import brute_core_size, brute_edit_repairs, random_cq, random_example


def same_set(got, want):
    want = [parse_cq(w) if isinstance(w, str) else w for w in want]
    return len(got) == len(want) and all(any(equivalent(g, w) for g in got) for w in want)


def test_path_specialization():
    E = parse_labeled("-example\nR(a,b). R(b,c).\ntuple: (a)\n+example\nR(a,b). R(b,c). R(c,d).\ntuple: (a)\n")
    q = parse_cq("q(x) :- R(x,y), R(y,z) .")
    r = edit_repair_construct(q, E, "specialize")
    assert same_set(r.queries, ["q(x) :- R(x,y), R(y,z), R(z,u) ."])
    assert r.items[0].distance == 1
    assert not r.bound_limited


def test_movies_generalizations():
    E = parse_labeled("+example\nRelease(B,y25,DE). Release(B,y25,FR). Release(N,y25,DE). "
                      "Release(N,y24,FR). FR(FR). DE(DE).\ntuple: (N)\n")
    q = parse_cq("q(x) :- Release(x,y,f), FR(f), Release(x,y,d), DE(d) .")
    r = edit_repair_construct(q, E, "generalize")
    assert len(r.queries) == 2 and all(i.distance == 1 for i in r.items)
    for c in r.queries:
        assert fits_all(c, E.positives) and edit_dist(q, c) == 1


def test_two_labels_generalizations():
    E = parse_labeled("+example\nR(a,b). R(a,c). P1(b). Q1(b). P2(c). Q2(c).\n")
    q = parse_cq("q() :- R(x,y), R(x,z), P1(y), P2(y), Q1(z), Q2(z) .")
    r = edit_repair_construct(q, E, "generalize")
    assert same_set(r.queries, [f"q() :- R(x,y), R(x,z), {p}(y), {s}(z) ."
                                for p in ("P1", "P2") for s in ("Q1", "Q2")])


def test_verify_and_exists():
    E = parse_labeled("+example\nR(a,b). R(a,c). R(b,d). R(c,d). P(b). W(c).\n")
    q = parse_cq("q() :- R(x,y), R(x,z), R(y,u), R(z,u), P(y), Q(z) .")
    q1 = parse_cq("q() :- R(x,y), R(x,z), R(y,u), R(z,u), P(y), W(z) .")
    q2 = parse_cq("q() :- R(x,y), R(x,z), R(y,u), R(z,u), P(y) .")
    assert edit_repair_verify(q, E, q1)
    assert not edit_repair_verify(q, E, q2)
    assert edit_dist(q, q2) == 3
    assert edit_repair_exists(q, E)
    assert edit_bounded_fitting(q, E, 1) is None
    assert edit_bounded_fitting(q, E, 2) is not None


def test_no_fitting():
    E = parse_labeled("+example\nR(a,a).\ntuple: (a)\n-example\nR(b,b).\ntuple: (b)\n")
    q = parse_cq("q(x) :- R(x,y) .")
    assert not edit_repair_exists(q, E)
    with pytest.raises(NoFittingExists):
        edit_repair_construct(q, E)
    with pytest.raises(RepeatedHeadVariables):
        edit_repair_construct(parse_cq("q(x,x) :- R(x,y) ."),
                              parse_labeled("+example\nR(a,b).\ntuple: (a,a)\n"))


def test_unknown_mode():
    with pytest.raises(ValueError):
        edit_repair_exists(parse_cq("q(x) :- R(x,y) ."), LabeledExampleSet(), "sideways")


@pytest.mark.parametrize("mode", ["repair", "generalize", "specialize"])
def test_edit_repairs_against_brute_force(mode):
    s = Schema(R=2, P=1)
    rng = random.Random({"repair": 50, "generalize": 51, "specialize": 52}[mode])
    pool = list(enumerate_cqs(s, 1, 4))
    checked = 0
    for _ in range(2000):
        q = random_cq(rng, s, 1, rng.randint(1, 2), 2)
        E = LabeledExampleSet([random_example(rng, s, 1, rng.randint(1, 3), 3)],
                              [random_example(rng, s, 1, rng.randint(1, 3), 3)], s)
        if conforming_witness(q, E, mode, s) is None:
            continue
        r = edit_repair_construct(q, E, mode, s)
        d = r.items[0].distance
        if d == 0 or len(core_cq(q)) + d > 4:
            continue  # trivial, or outside the brute-force horizon
        bd, bq = brute_edit_repairs(q, E.positives, E.negatives, mode, pool, len(core_cq(q)))
        assert bd == d
        assert same_set(r.queries, [c for c in bq if len(c) == brute_core_size(c.example)])
        checked += 1
        if checked == 15:
            break
    assert checked == 15


def test_generic_sdi_tie_warning():
    E = parse_labeled("-example\nR(a,b).\ntuple: (a)\n+example\nR(a,a).\ntuple: (a)\n")
    q = parse_cq("q(x) :- R(x,y) .")
    r = generic_dist_repair("sdi", q, E, 2)
    assert len(r.queries) == 10
    assert all(i.distance == 1 for i in r.items)
    assert r.warnings and "tie" in r.warnings[0]
    assert r.bound_limited


def test_generic_returns_query_when_it_fits():
    E = parse_labeled("+example\nR(a,b).\ntuple: (a)\n")
    q = parse_cq("q(x) :- R(x,y) .")
    r = generic_dist_repair("sdq", q, E, 2)
    assert len(r.queries) == 1 and r.items[0].distance == 0 and not r.bound_limited
