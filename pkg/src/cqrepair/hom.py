"""Homomorphism search and the query semantics built on it.

The search is a small CSP solver: source values are variables, their
domains start as the values of the target that occur in the same
(relation, position) slots, distinguished-tuple bindings are applied
first, and after each assignment the domains of neighbouring values are
narrowed to what the target facts still support (forward checking).
Variables are picked by smallest remaining domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import ArityMismatch, SchemaMismatch
from .limits import check_deadline
from .model import CQ, DataExample, LabeledExampleSet, VarMapping


class _Index:
    """Lookup tables over a target example."""

    def __init__(self, e: DataExample):
        self.by_rel = {}
        self.by_slot = {}
        self.proj = {}
        for f in e.facts:
            self.by_rel.setdefault(f.relation, []).append(f.args)
            for pos, v in enumerate(f.args):
                self.by_slot.setdefault((f.relation, pos, v), []).append(f.args)
                self.proj.setdefault((f.relation, pos), set()).add(v)


_INDEX_CACHE = {}


def _index(e: DataExample) -> _Index:
    idx = e.__dict__.get("_hom_index")
    if idx is None:
        idx = _Index(e)
        e.__dict__["_hom_index"] = idx
    return idx


def _src_structure(e: DataExample):
    s = e.__dict__.get("_hom_src")
    if s is None:
        facts = sorted(e.facts)
        occ = {v: [] for v in e.values}
        for i, f in enumerate(facts):
            for v in set(f.args):
                occ[v].append(i)
        s = (facts, occ)
        e.__dict__["_hom_src"] = s
    return s


def _supports(args, rel_tuples, idx, rel, dom, assigned):
    """Target tuples compatible with the partial assignment of a source atom."""
    cands = None
    for pos, v in enumerate(args):
        if v in assigned:
            lst = idx.by_slot.get((rel, pos, assigned[v]), ())
            if cands is None or len(lst) < len(cands):
                cands = lst
    if cands is None:
        cands = rel_tuples
    out = []
    for t in cands:
        ok = True
        seen = {}
        for pos, v in enumerate(args):
            tv = t[pos]
            if v in assigned:
                if assigned[v] != tv:
                    ok = False
                    break
            else:
                prev = seen.get(v)
                if prev is None:
                    if tv not in dom[v]:
                        ok = False
                        break
                    seen[v] = tv
                elif prev != tv:
                    ok = False
                    break
        if ok:
            out.append(t)
    return out


def iter_homomorphisms(src: DataExample, dst: DataExample, fixed=None, forbidden=None,
                       use_tuple: bool = True) -> Iterator[dict]:
    """Yield every homomorphism src -> dst as a dict (deterministic order).

    fixed: extra forced bindings; forbidden: target values that may not be
    used; use_tuple=False ignores the distinguished tuples.
    """
    if use_tuple and src.arity != dst.arity:
        raise ArityMismatch(f"arity {src.arity} vs {dst.arity}")
    idx = _index(dst)
    facts, occ = _src_structure(src)
    forbidden = set(forbidden or ())
    dom = {}
    for v in occ:
        d = None
        for i in occ[v]:
            f = facts[i]
            for pos, a in enumerate(f.args):
                if a == v:
                    p = idx.proj.get((f.relation, pos))
                    if p is None:
                        return
                    d = set(p) if d is None else d & p
        if d is None:
            d = set(dst.values)
        if forbidden:
            d -= forbidden
        dom[v] = d
    forced = {}
    if use_tuple:
        for s, t in zip(src.tuple, dst.tuple):
            if forced.setdefault(s, t) != t:
                return
    for s, t in (fixed or {}).items():
        if s not in dom:
            continue
        if forced.setdefault(s, t) != t:
            return
    for s, t in forced.items():
        if t not in dom[s]:
            return
        dom[s] = {t}
    if any(not d for d in dom.values()):
        return
    yield from _search(facts, occ, idx, dom, {}, len(dom))


def _search(facts, occ, idx, dom, assigned, n):
    if len(assigned) == n:
        yield dict(assigned)
        return
    check_deadline()
    best, bsize = None, None
    for v, d in dom.items():
        if v not in assigned:
            sz = len(d)
            if bsize is None or sz < bsize or (sz == bsize and v < best):
                best, bsize = v, sz
                if sz <= 1:
                    break
    v = best
    for val in sorted(dom[v]):
        assigned[v] = val
        new_dom = _propagate(facts, occ, idx, dom, assigned, v, val)
        if new_dom is not None:
            yield from _search(facts, occ, idx, new_dom, assigned, n)
        del assigned[v]


def _propagate(facts, occ, idx, dom, assigned, v, val):
    new_dom = dict(dom)
    new_dom[v] = {val}
    for i in occ[v]:
        f = facts[i]
        rel_tuples = idx.by_rel.get(f.relation, ())
        sup = _supports(f.args, rel_tuples, idx, f.relation, new_dom, assigned)
        if not sup:
            return None
        for pos, w in enumerate(f.args):
            if w in assigned:
                continue
            allowed = {t[pos] for t in sup}
            cur = new_dom[w]
            if not cur <= allowed:
                cur = cur & allowed
                if not cur:
                    return None
                new_dom[w] = cur
    return new_dom


def find_homomorphism(src: DataExample, dst: DataExample, fixed=None, forbidden=None,
                      use_tuple: bool = True) -> VarMapping | None:
    """Return a homomorphism src -> dst mapping tuple to tuple, or None."""
    for h in iter_homomorphisms(src, dst, fixed, forbidden, use_tuple):
        return VarMapping(h)
    return None


def maps_to(src: DataExample, dst: DataExample, **kw) -> bool:
    return find_homomorphism(src, dst, **kw) is not None


def hom_equivalent(a: DataExample, b: DataExample) -> bool:
    return maps_to(a, b) and maps_to(b, a)


def _ex(x) -> DataExample:
    return x.example if isinstance(x, CQ) else x


# ------------------------------------------------------------------ semantics

def member(e: DataExample, q: CQ) -> bool:
    """e is in the extension of q iff e_q -> e."""
    if e.arity != q.arity:
        raise ArityMismatch(f"example arity {e.arity} vs query arity {q.arity}")
    return maps_to(q.example, e)


def evaluate(q: CQ, facts) -> set:
    """All answer tuples of q on an instance (a fact set)."""
    if isinstance(facts, DataExample):
        facts = facts.facts
    inst = DataExample(frozenset(facts), ())
    if q.schema is not None:
        for f in inst.facts:
            if f.relation in q.schema and q.schema[f.relation] != len(f.args):
                raise SchemaMismatch(
                    f"instance uses {f.relation}/{len(f.args)}, query schema has "
                    f"{f.relation}/{q.schema[f.relation]}")
    for a in q.body:
        for f in inst.facts:
            if f.relation == a.relation and len(f.args) != len(a.args):
                raise SchemaMismatch(f"relation {a.relation} has arity {len(a.args)} in the "
                                     f"query and {len(f.args)} in the instance")
    src = DataExample(q.body, ())
    out = set()
    for h in iter_homomorphisms(src, inst, use_tuple=False):
        out.add(tuple(h[v] for v in q.head))
    return out


def contained(q1: CQ, q2: CQ) -> bool:
    """q1 ⊆ q2 iff e_q2 -> e_q1."""
    if q1.arity != q2.arity:
        raise ArityMismatch(f"arity {q1.arity} vs {q2.arity}")
    return maps_to(q2.example, q1.example)


def equivalent(q1: CQ, q2: CQ) -> bool:
    return contained(q1, q2) and contained(q2, q1)


def strictly_contained(q1: CQ, q2: CQ) -> bool:
    return contained(q1, q2) and not contained(q2, q1)


@dataclass
class FitReport:
    fits: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.fits


def fits(q: CQ, E: LabeledExampleSet) -> FitReport:
    """Check every example; violations are (index, expected, actual) triples."""
    viol = []
    for i, (label, e) in enumerate(E.examples):
        got = "+" if member(e, q) else "-"
        if got != label:
            viol.append((i, label, got))
    return FitReport(not viol, viol)


def fits_all(q, positives=(), negatives=()) -> bool:
    """Fast boolean fitting check over explicit example lists."""
    eq = _ex(q)
    for e in positives:
        if not maps_to(eq, e):
            return False
    for e in negatives:
        if maps_to(eq, e):
            return False
    return True
