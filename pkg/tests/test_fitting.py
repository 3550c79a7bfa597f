import random

import pytest

from cqrepair import (EmptyPositives, LabeledExampleSet, Schema, bounded_size_fitting,
                      enumerate_cqs, fitting_below_exists, fitting_exists, most_specific_fitting,
                      parse_labeled, repetition_free_fitting_exists,
                      wmg_fitting_construct, wmg_fitting_verify)

from oracles import brute_hom, brute_member, random_cq, random_example

S = Schema(R=2, P=1)
ALL = list(enumerate_cqs(S, 1, 3))


def brute_fits(q, E):
    return all(brute_member(e, q) for e in E.positives) and \
        not any(brute_member(e, q) for e in E.negatives)


def random_set(rng, npos, nneg):
    return LabeledExampleSet([random_example(rng, S, 1, rng.randint(1, 4), 3) for _ in range(npos)],
                             [random_example(rng, S, 1, rng.randint(1, 4), 3) for _ in range(nneg)], S)


def test_fitting_exists_against_brute_force():
    rng = random.Random(20)
    for _ in range(120):
        E = random_set(rng, rng.randint(1, 2), rng.randint(1, 3))
        found = any(brute_fits(q, E) for q in ALL)
        ex = fitting_exists(E, S)
        if found:
            assert ex
        if ex:
            m = most_specific_fitting(E)
            assert m is not None and brute_fits(m, E)
        else:
            assert most_specific_fitting(E) is None


def test_most_specific_is_below_every_fitting():
    rng = random.Random(21)
    for _ in range(60):
        E = random_set(rng, 2, 1)
        m = most_specific_fitting(E)
        if m is None:
            continue
        for q in ALL:
            if brute_fits(q, E):
                assert brute_hom(q.example, m.example)


def test_fitting_exists_without_positives():
    E = parse_labeled("schema: R/2\n-example\nR(a,a).\ntuple: (a)\n")
    assert not fitting_exists(E)
    E = parse_labeled("schema: R/2, P/1\n-example\nR(a,a).\ntuple: (a)\n")
    assert fitting_exists(E)
    with pytest.raises(EmptyPositives):
        most_specific_fitting(E)


def test_repetition_free_fitting():
    E = parse_labeled("+example\nR(a,a).\ntuple: (a,a)\n"
                      "-example\nR(b,b). R(b,c). R(c,b). R(c,c).\ntuple: (b,c)\n")
    assert fitting_exists(E)
    # the negative is complete, so every repetition-free query selects it
    assert not repetition_free_fitting_exists(E)


def test_bounded_size_fitting():
    E = parse_labeled("+example\nR(a,b). R(b,c).\ntuple: (a)\n-example\nR(d,e).\ntuple: (d)\n")
    q = bounded_size_fitting(E, 3)
    assert q is not None and len(q) == 2 and brute_fits(q, E)
    assert bounded_size_fitting(E, 1) is None


def test_fitting_below_exists_against_brute_force():
    rng = random.Random(22)
    for _ in range(80):
        q = random_cq(rng, S, 1, rng.randint(1, 2), 2)
        E = random_set(rng, 1, rng.randint(1, 2))
        below = [c for c in ALL if brute_hom(q.example, c.example) and brute_fits(c, E)]
        got = fitting_below_exists(q, E, S)
        if below:
            assert got
        if not all(brute_member(e, q) for e in E.positives):
            assert not got


def test_wmg_verify_against_brute_force():
    rng = random.Random(23)
    n = 0
    for _ in range(200):
        E = random_set(rng, 1, rng.randint(1, 2))
        fitting = [q for q in ALL if brute_fits(q, E)]
        if not fitting:
            continue
        q = rng.choice(fitting)
        # c strictly contains q: e_c maps into e_q but not back
        better = [c for c in fitting if brute_hom(c.example, q.example)
                  and not brute_hom(q.example, c.example)]
        v = wmg_fitting_verify(q, E, 3, S)
        assert (v.status == "no") == bool(better)
        n += 1
    assert n > 50


def test_wmg_construct_results_are_maximal():
    E = parse_labeled("+example\nR(a,b). P(b).\ntuple: (a)\n-example\nR(c,c).\ntuple: (c)\n")
    res = wmg_fitting_construct(E, 2)
    assert res
    for q in res:
        assert wmg_fitting_verify(q, E, 2).status != "no"
