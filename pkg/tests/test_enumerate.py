from itertools import combinations, product

import pytest

from cqrepair import Schema, count_cqs, enumerate_cqs, maps_to, set_partitions
from cqrepair.model import Atom, DataExample, atom

from oracles import brute_iso


def brute_classes(schema, k, max_size, repetition_free=False):
    """Isomorphism classes of safe CQs per size, by exhaustive generation."""
    maxar = max(schema.values())
    out = []
    for n in range(1, max_size + 1):
        nv = k + n * maxar
        vals = [str(i) for i in range(nv)]
        atoms = [Atom(r, a) for r, ar in sorted(schema.items()) for a in product(vals, repeat=ar)]
        heads = [tuple(str(i) for i in range(k))] if repetition_free else \
            [tuple(str(p) for p in pat) for pat in set_partitions(k)]
        reps = []
        for body in combinations(atoms, n):
            used = {v for a in body for v in a.args}
            for h in heads:
                if not set(h) <= used:
                    continue
                e = DataExample(frozenset(body), h)
                if not any(len(r.values) == len(e.values) and brute_iso(r, e) for r in reps):
                    reps.append(e)
        out.append(reps)
    return out


@pytest.mark.parametrize("schema,k,n", [
    (Schema(R=2), 1, 2),
    (Schema(R=2), 0, 2),
    (Schema(P=1, R=2), 1, 2),
    (Schema(P=1, Q=1), 2, 2),
])
def test_counts_match_brute_force(schema, k, n):
    assert count_cqs(schema, k, n) == [len(c) for c in brute_classes(schema, k, n)]


def test_repetition_free_counts():
    s = Schema(R=2)
    assert count_cqs(s, 2, 2, repetition_free=True) == \
        [len(c) for c in brute_classes(s, 2, 2, repetition_free=True)]


def test_within_filter():
    s = Schema(R=2)
    target = DataExample(frozenset({atom("R", "a", "b"), atom("R", "b", "a")}), ("a",))
    got = list(enumerate_cqs(s, 1, 3, within=[target]))
    allq = list(enumerate_cqs(s, 1, 3))
    assert [str(q) for q in got] == [str(q) for q in allq if maps_to(q.example, target)]


def test_order_is_by_size():
    sizes = [len(q) for q in enumerate_cqs(Schema(R=2), 1, 3)]
    assert sizes == sorted(sizes)


def test_set_partitions():
    assert len(list(set_partitions(3))) == 5
    assert len(list(set_partitions(4))) == 15
    assert list(set_partitions(0)) == [()]
