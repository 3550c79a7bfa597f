"""Homomorphism cores of examples and queries."""
from __future__ import annotations

from .hom import find_homomorphism
from .model import CQ, Atom, DataExample


def _image(e: DataExample, h) -> DataExample:
    return DataExample(frozenset(Atom(f.relation, tuple(h[v] for v in f.args)) for f in e.facts),
                       e.tuple)


def core_example(e: DataExample) -> DataExample:
    """A core of e obtained as a subinstance; the tuple is kept as is.

    Repeatedly looks for an endomorphism whose image avoids one
    non-distinguished value (tried in sorted order) and restricts to its
    image until no such endomorphism exists.
    """
    cached = e.__dict__.get("_core")
    if cached is not None:
        return cached
    cur = e
    fixed = set(e.tuple)
    while True:
        for v in sorted(cur.adom - fixed):
            h = find_homomorphism(cur, cur, forbidden={v})
            if h is not None:
                cur = _image(cur, h)
                break
        else:
            break
    cur.__dict__["_core"] = cur
    e.__dict__["_core"] = cur
    return cur


def is_core(e) -> bool:
    e = e.example if isinstance(e, CQ) else e
    fixed = set(e.tuple)
    for v in sorted(e.adom - fixed):
        if find_homomorphism(e, e, forbidden={v}) is not None:
            return False
    return True


def core_cq(q: CQ) -> CQ:
    """The core of q; keeps q's variable names (it is a subquery)."""
    c = core_example(q.example)
    if c.facts == q.body:
        return q
    return CQ(q.head, c.facts, q.name, q.schema)
