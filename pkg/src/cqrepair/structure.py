"""Structural constructions on queries and examples: canonical examples and
queries, conjunction, direct products, extremal queries, head normalization."""
from __future__ import annotations

from itertools import product

from .canon import certificate, existential_name, head_names
from .errors import ArityMismatch, EmptyList, EmptySchema, SafetyViolation
from .model import CQ, Atom, DataExample, LabeledExampleSet, Schema, VarMapping


def canonical_example(q: CQ) -> DataExample:
    """The body read as facts over variable-values, with the head as tuple."""
    return q.example


def canonical_cq(e: DataExample, name: str = "q", schema: Schema | None = None) -> CQ:
    """Read an example as a query; values become variables.

    Raises SafetyViolation if a distinguished value occurs in no fact.
    """
    missing = [v for v in e.tuple if v not in e.adom]
    if missing:
        raise SafetyViolation(f"distinguished value(s) {', '.join(sorted(set(missing)))} occur in no fact")
    first = {}
    for i, v in enumerate(e.tuple):
        first.setdefault(v, i)
    names = dict(zip(e.tuple, head_names([first[v] for v in e.tuple])))
    rest = sorted(e.adom - set(names))
    for i, v in enumerate(rest):
        names[v] = existential_name(i)
    return CQ(tuple(names[v] for v in e.tuple),
              frozenset(Atom(f.relation, tuple(names[a] for a in f.args)) for f in e.facts),
              name, schema)


def _fresh(base: str, taken: set) -> str:
    cand = base + "′"
    while cand in taken:
        cand += "′"
    return cand


def rename_apart(q1: CQ, q2: CQ) -> CQ:
    """Rename q2's variables so that none clashes with a variable of q1."""
    taken = set(q1.variables) | set(q2.variables)
    ren = {}
    for v in sorted(q2.variables):
        if v in q1.variables:
            ren[v] = _fresh(v, taken)
            taken.add(ren[v])
    return q2.rename(ren)


def conjunction(q1: CQ, q2: CQ) -> CQ:
    """q1 ∧ q2: bodies unioned, head positions identified by the smallest
    equivalence relation containing the equalities of either head."""
    if q1.arity != q2.arity:
        raise ArityMismatch(f"arity {q1.arity} vs {q2.arity}")
    q2r = rename_apart(q1, q2)
    parent = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    for a, b in zip(q1.head, q2r.head):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    # representative for each class: the q1 variable at its first position
    rep = {}
    for v in q1.head:
        rep.setdefault(find(v), v)
    ren = {v: rep[find(v)] for v in list(q1.head) + list(q2r.head)}
    body = {Atom(a.relation, tuple(ren.get(x, x) for x in a.args)) for a in q1.body | q2r.body}
    head = tuple(ren[v] for v in q1.head)
    schema = None
    if q1.schema is not None and q2.schema is not None:
        schema = q1.schema.union(q2.schema)
    return CQ(head, frozenset(body), q1.name, schema)


def pair_name(values) -> str:
    return "⟨" + ",".join(values) + "⟩"


def product_all(es) -> DataExample:
    """Direct product of a non-empty list of examples (n-ary, flat names)."""
    es = list(es)
    if not es:
        raise EmptyList("product of an empty list of examples")
    if len(es) == 1:
        return es[0]
    k = es[0].arity
    if any(e.arity != k for e in es):
        raise ArityMismatch("examples of different arities")
    by_rel = []
    for e in es:
        d = {}
        for f in e.facts:
            d.setdefault(f.relation, []).append(f.args)
        by_rel.append(d)
    rels = set(by_rel[0])
    for d in by_rel[1:]:
        rels &= set(d)
    facts = set()
    for rel in rels:
        for combo in product(*(sorted(d[rel]) for d in by_rel)):
            ar = len(combo[0])
            if any(len(t) != ar for t in combo):
                raise ArityMismatch(f"relation {rel} used with different arities")
            facts.add(Atom(rel, tuple(pair_name([t[i] for t in combo]) for i in range(ar))))
    tup = tuple(pair_name([e.tuple[i] for e in es]) for i in range(k))
    return DataExample(frozenset(facts), tup)


def direct_product(e1: DataExample, e2: DataExample) -> DataExample:
    if e1.arity != e2.arity:
        raise ArityMismatch(f"arity {e1.arity} vs {e2.arity}")
    return product_all([e1, e2])


def maximally_constrained(schema: Schema, k: int) -> CQ:
    """q(x,...,x) :- R1(x,...,x), ..., Rn(x,...,x)."""
    if not len(schema):
        raise EmptySchema("schema has no relations")
    body = frozenset(Atom(r, ("x",) * a) for r, a in schema.items())
    return CQ(("x",) * k, body, "q", schema)


def minimally_constrained_set(schema: Schema, k: int) -> list:
    """All CQs with one atom R(y.., x_i, z..) per head position, fresh y, z."""
    if not len(schema):
        raise EmptySchema("schema has no relations")
    rels = list(schema.items())
    out, seen = [], set()
    if k == 0:
        for r, a in rels:
            q = CQ((), frozenset({Atom(r, tuple(existential_name(i) for i in range(a)))}), "q", schema)
            out.append(q)
        return out
    head = tuple(head_names(list(range(k))))
    slots = [(r, p, a) for r, a in rels for p in range(a)]
    for choice in product(slots, repeat=k):
        body, n = [], 0
        for i, (r, p, a) in enumerate(choice):
            args = []
            for j in range(a):
                if j == p:
                    args.append(head[i])
                else:
                    args.append(existential_name(n))
                    n += 1
            body.append(Atom(r, tuple(args)))
        q = CQ(head, frozenset(body), "q", schema)
        c = certificate(q)
        if c not in seen:
            seen.add(c)
            out.append(q)
    return out


def quotient(e: DataExample, pairs) -> DataExample:
    """Identify the given value pairs (and close under equivalence)."""
    parent = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
    ren = {v: find(v) for v in e.values}
    return e.rename(ren)


def head_pattern(head) -> tuple:
    """For each head position, the index of its variable's first occurrence."""
    first = {}
    return tuple(first.setdefault(v, i) for i, v in enumerate(head))


def normalize_head(q: CQ, E: LabeledExampleSet):
    """Reduce to a repetition-free head.

    Returns (q_hat, E_hat, back) where back maps every original head
    position to a position of q_hat's head.
    """
    pat = head_pattern(q.head)
    keep = [i for i, f in enumerate(pat) if f == i]
    where = {i: n for n, i in enumerate(keep)}
    back = VarMapping({i: where[pat[i]] for i in range(len(pat))})
    q_hat = CQ(tuple(q.head[i] for i in keep), q.body, q.name, q.schema)

    def fix(e: DataExample) -> DataExample:
        pairs = [(e.tuple[i], e.tuple[pat[i]]) for i in range(len(pat)) if pat[i] != i]
        qe = quotient(e, pairs)
        return DataExample(qe.facts, tuple(qe.tuple[i] for i in keep))

    E_hat = LabeledExampleSet(tuple(fix(e) for e in E.positives),
                              tuple(fix(e) for e in E.negatives), E.schema_hint)
    return q_hat, E_hat, back


def restore_head(q_hat: CQ, back: VarMapping) -> CQ:
    """Inverse of normalize_head on queries: re-expand the head."""
    head = tuple(q_hat.head[back[i]] for i in range(len(back)))
    return CQ(head, q_hat.body, q_hat.name, q_hat.schema)


def restore_answer(t: tuple, back: VarMapping) -> tuple:
    return tuple(t[back[i]] for i in range(len(back)))
