"""Exhaustive enumeration of CQs up to isomorphism, by increasing size.

Queries are grown one atom at a time. A partial query may still have head
variables that occur in no atom; it is kept as long as enough atoms remain
to cover them, and only safe queries are emitted. Each level is
deduplicated by canonical certificate. The optional ``within`` examples
act as a filter that is closed under removing atoms: a partial query is
dropped as soon as its canonical example does not map into one of them.
"""
from __future__ import annotations

from typing import Iterator

from .canon import canonical_labeling, naming_from_labels
from .hom import maps_to
from .limits import check_deadline
from .model import CQ, Atom, DataExample, Schema


def set_partitions(k: int):
    """Restricted growth strings of length k (one per set partition)."""
    if k == 0:
        yield ()
        return

    def rec(prefix, m):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for c in range(m + 1):
            yield from rec(prefix + [c], max(m, c + 1))

    yield from rec([0], 1)


def _arg_tuples(n: int, ar: int):
    """Argument tuples over variables 0..n-1 plus fresh ones used in order."""
    def rec(prefix, nxt):
        if len(prefix) == ar:
            yield tuple(prefix)
            return
        for v in range(nxt + 1):
            yield from rec(prefix + [v], max(nxt, v + 1) if v == nxt else nxt)
    yield from rec([], n)


def _to_cq(head, body, labeling, schema) -> CQ:
    names = naming_from_labels(head, labeling)
    return CQ(tuple(names[v] for v in head),
              frozenset(Atom(a.relation, tuple(names[v] for v in a.args)) for a in body),
              "q", schema)


def enumerate_cqs(schema: Schema, k: int, max_size: int, within=(), repetition_free: bool = False,
                  min_size: int = 1) -> Iterator[CQ]:
    """Yield one CQ per isomorphism class of safe CQs with 1..max_size atoms.

    Output is ordered by size, then by canonical certificate.
    """
    rels = sorted(schema.items())
    maxar = max((a for _, a in rels), default=0)
    within = list(within)
    if repetition_free:
        patterns = [tuple(range(k))]
    else:
        patterns = list(set_partitions(k))
    level = []
    for pat in patterns:
        e = DataExample(frozenset(), pat)
        if within and not all(maps_to(e, w) for w in within):
            continue
        level.append((pat, frozenset(), (max(pat) + 1) if pat else 0))
    for size in range(1, max_size + 1):
        nxt = []
        seen = set()
        remaining = max_size - size
        for head, body, n in level:
            hv = set(head)
            for rel, ar in rels:
                for args in _arg_tuples(n, ar):
                    a = Atom(rel, args)
                    if a in body:
                        continue
                    nb = body | {a}
                    covered = {v for b in nb for v in b.args}
                    if len(hv - covered) > remaining * maxar:
                        continue
                    e = DataExample(nb, head)
                    cert, lab = canonical_labeling(e)
                    if cert in seen:
                        continue
                    seen.add(cert)
                    check_deadline()
                    if within and not all(maps_to(e, w) for w in within):
                        continue
                    nn = max(n, max(args) + 1)
                    nxt.append((cert, head, nb, nn, lab, hv <= covered))
        nxt.sort(key=lambda t: t[0])
        level = [(h, b, n) for _, h, b, n, _, _ in nxt]
        if size >= min_size:
            for cert, head, body, n, lab, safe in nxt:
                if safe:
                    yield _to_cq(head, body, lab, schema)
        if not level:
            return


def count_cqs(schema: Schema, k: int, max_size: int, **kw) -> list:
    """Number of yielded CQs per size (index 0 = size 1)."""
    counts = [0] * max_size
    for q in enumerate_cqs(schema, k, max_size, **kw):
        counts[len(q) - 1] += 1
    return counts
