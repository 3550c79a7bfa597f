"""Fitting existence, most-specific and weakly most-general fittings,
bounded fitting search."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cart

from .canon import certificate, canonical_form
from .cores import core_cq, core_example, is_core
from .enumerate import enumerate_cqs, set_partitions
from .errors import EmptyPositives
from .hom import fits_all, maps_to, member
from .model import CQ, Atom, DataExample, LabeledExampleSet, Schema, common_schema
from .structure import canonical_cq, head_pattern, product_all


@dataclass(frozen=True)
class BoundedVerdict:
    """Answer of a possibly bound-limited decision procedure.

    status is "yes" or "no" when exact, "unknown" when the search found
    nothing up to ``bound`` (reported as yes-at-bound).
    """
    status: str
    bound: int | None = None
    witness: CQ | None = None
    note: str = ""
    inconclusive: bool = False

    @property
    def exact(self) -> bool:
        return self.status in ("yes", "no")

    @property
    def label(self) -> str:
        if self.inconclusive:
            return f"inconclusive-at-bound({self.bound})"
        if self.status == "unknown":
            return f"yes-at-bound({self.bound})"
        return self.status

    def __str__(self):
        return self.label


YES = "yes"
NO = "no"
UNKNOWN = "unknown"


def full_example(schema: Schema, pattern) -> DataExample:
    """All facts over one value per head class plus one extra value.

    Every CQ whose head equalities are exactly ``pattern`` maps into it,
    so it is the least CQ (w.r.t. containment) with that head shape.
    """
    classes = sorted(set(pattern))
    vals = [f"h{c}" for c in classes] + ["z*"]
    facts = frozenset(Atom(r, args) for r, a in schema.items() for args in cart(vals, repeat=a))
    return DataExample(facts, tuple(f"h{c}" for c in pattern))


def _schema(E: LabeledExampleSet, *extra) -> Schema:
    return common_schema(E, *extra)


def fitting_exists(E: LabeledExampleSet, schema: Schema | None = None, arity: int | None = None) -> bool:
    """Exact: is there any CQ fitting E?"""
    if E.positives:
        p = product_all(E.positives)
        if not p.is_safe():
            return False
        return not any(maps_to(p, n) for n in E.negatives)
    if not E.negatives:
        return True
    s = _schema(E, schema)
    if not len(s):
        return False
    k = E.arity
    for pat in set_partitions(k):
        K = full_example(s, pat)
        if not any(maps_to(K, n) for n in E.negatives):
            return True
    return False


def least_repetition_free(E: LabeledExampleSet, schema: Schema | None = None,
                          arity: int | None = None) -> DataExample | None:
    """Canonical example of the most specific repetition-free CQ fitting E+
    (None if that query is unsafe). Every repetition-free CQ that fits E+
    maps into it."""
    s = _schema(E, schema)
    k = E.arity if E.arity is not None else arity
    if k is None:
        raise ValueError("arity unknown: pass arity= for an empty example set")
    if not len(s):
        return None
    K = full_example(s, tuple(range(k)))
    p = product_all(list(E.positives) + [K])
    return p if p.is_safe() else None


def repetition_free_fitting_exists(E: LabeledExampleSet, schema: Schema | None = None,
                                   arity: int | None = None) -> bool:
    p = least_repetition_free(E, schema, arity)
    return p is not None and not any(maps_to(p, n) for n in E.negatives)


def most_specific_fitting(E: LabeledExampleSet) -> CQ | None:
    """Core of the canonical CQ of the product of the positives, if it fits."""
    if not E.positives:
        raise EmptyPositives("most-specific fitting needs at least one positive example")
    p = product_all(E.positives)
    if not p.is_safe() or any(maps_to(p, n) for n in E.negatives):
        return None
    return canonical_form(canonical_cq(core_example(p)))


def bounded_size_fitting(E: LabeledExampleSet, n: int, schema: Schema | None = None,
                         arity: int | None = None) -> CQ | None:
    """First CQ (in enumeration order) with at most n atoms that fits E."""
    s = _schema(E, schema)
    k = E.arity if E.arity is not None else arity
    if k is None:
        raise ValueError("arity unknown: pass arity= for an empty example set")
    for q in enumerate_cqs(s, k, n, within=E.positives):
        if fits_all(q, (), E.negatives):
            return q
    return None


def fitting_candidates(E: LabeledExampleSet, bound: int, schema: Schema | None = None,
                       arity: int | None = None, within=(), cores_only: bool = True,
                       repetition_free: bool = False):
    """All enumerated CQs up to ``bound`` atoms fitting E (cores only by default)."""
    s = _schema(E, schema)
    k = E.arity if E.arity is not None else arity
    if k is None:
        raise ValueError("arity unknown: pass arity= for an empty example set")
    out = []
    for q in enumerate_cqs(s, k, bound, within=list(E.positives) + list(within),
                           repetition_free=repetition_free):
        if not fits_all(q, (), E.negatives):
            continue
        if cores_only and not is_core(q):
            continue
        out.append(q)
    return out


def maximal_elements(qs) -> list:
    """Elements with no strictly more general element in the list."""
    out = []
    for c in qs:
        rel_c = {a.relation for a in c.body}
        dominated = False
        for d in qs:
            if d is c:
                continue
            if not {a.relation for a in d.body} <= rel_c:
                continue
            if maps_to(d.example, c.example) and not maps_to(c.example, d.example):
                dominated = True
                break
        if not dominated:
            out.append(c)
    return out


def dedupe_equivalent(qs) -> list:
    """One representative per equivalence class (canonical cores), order kept."""
    seen, out = set(), []
    for q in qs:
        c = canonical_form(core_cq(q))
        key = certificate(c)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def order_key(q: CQ):
    from .syntax import serialize_cq
    return (len(q), serialize_cq(q))


def wmg_fitting_verify(q: CQ, E: LabeledExampleSet, size_bound: int,
                       schema: Schema | None = None) -> BoundedVerdict:
    """Weak most-generality of q for E: exact 'no' or yes-at-bound."""
    if not fits_all(q, E.positives, E.negatives):
        return BoundedVerdict(NO, size_bound, None, "query does not fit the examples")
    s = _schema(E, q, schema)
    for c in enumerate_cqs(s, q.arity, size_bound, within=[q.example] + list(E.positives)):
        if fits_all(c, (), E.negatives) and not maps_to(q.example, c.example):
            return BoundedVerdict(NO, size_bound, c, "a strictly more general fitting CQ exists")
    return BoundedVerdict(UNKNOWN, size_bound)


def wmg_fitting_construct(E: LabeledExampleSet, size_bound: int, schema: Schema | None = None,
                          arity: int | None = None) -> list:
    """Fitting CQs up to the bound that are maximal among the enumerated ones."""
    cands = fitting_candidates(E, size_bound, schema, arity)
    return sorted(dedupe_equivalent(maximal_elements(cands)), key=order_key)


def _coarser_patterns(head):
    """Set partitions of head positions that keep every equality of ``head``."""
    base = head_pattern(head)
    for pat in set_partitions(len(head)):
        if all(pat[i] == pat[base[i]] for i in range(len(head))):
            yield pat


def fitting_below_exists(q: CQ, E: LabeledExampleSet, schema: Schema | None = None,
                         repetition_free: bool = False) -> bool:
    """Exact: is there a CQ q' with q' ⊆ q that fits E?

    For each admissible head shape the least CQ of that shape fitting E+
    is the product of the positives with the full example of the shape;
    its conjunction with q is the least candidate below q.
    """
    if not fits_all(q, E.positives):
        return False
    s = _schema(E, q, schema)
    pats = [tuple(range(q.arity))] if repetition_free else list(_coarser_patterns(q.head))
    for pat in pats:
        p = product_all(list(E.positives) + [full_example(s, pat)])
        if not p.is_safe():
            continue
        if not any(member(n, q) and maps_to(p, n) for n in E.negatives):
            return True
    return False
