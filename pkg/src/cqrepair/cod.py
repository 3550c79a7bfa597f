"""Repairs under the containment-of-difference pre-order.

q1 is at least as good as q2 (relative to q) when the symmetric difference
of q and q1 is contained in that of q and q2. All decisions reduce to a
handful of containment and homomorphism checks on canonical examples.
"""
from __future__ import annotations

from .canon import canonical_form, certificate
from .cores import core_cq
from .enumerate import enumerate_cqs
from .errors import ArityMismatch, RepeatedHeadVariables
from .fitting import (NO, UNKNOWN, YES, BoundedVerdict, dedupe_equivalent, fitting_below_exists,
                      fitting_candidates, fitting_exists, maximal_elements, most_specific_fitting,
                      order_key)
from .hom import contained, equivalent, fits_all, maps_to, member
from .model import CQ, LabeledExampleSet, Schema, common_schema
from .results import RepairResult, ResultItem
from .structure import conjunction, minimally_constrained_set, product_all


def _fits(q: CQ, E: LabeledExampleSet) -> bool:
    return fits_all(q, E.positives, E.negatives)


def _check_arity(*qs):
    if len({q.arity for q in qs}) > 1:
        raise ArityMismatch("queries of different arities: " + ", ".join(str(q.arity) for q in qs))


def cod_leq(q: CQ, q1: CQ, q2: CQ) -> bool:
    """[[q]] xor [[q1]] is contained in [[q]] xor [[q2]].

    A violation is an example in q and q2 but not q1, or in q1 but in
    neither q nor q2. The first is excluded by q∧q2 ⊆ q1. For the second,
    a CQ is contained in a union of CQs iff it is contained in one of them.
    """
    _check_arity(q, q1, q2)
    return contained(conjunction(q, q2), q1) and (contained(q1, q) or contained(q1, q2))


# ----------------------------------------------------------- generalizations

def cod_generalization_construct(q: CQ, E: LabeledExampleSet) -> CQ | None:
    """The unique (up to equivalence) generalization, or None."""
    return most_specific_fitting(E.with_positive(q.example))


def cod_generalization_verify(q: CQ, E: LabeledExampleSet, q2: CQ) -> bool:
    if not _fits(q2, E) or not contained(q, q2):
        return False
    g = cod_generalization_construct(q, E)
    return g is not None and equivalent(g, q2)


def cod_generalization_exists(q: CQ, E: LabeledExampleSet) -> bool:
    return cod_generalization_construct(q, E) is not None


# ----------------------------------------------------------- specializations

def _result(qs, bound_limited, bound) -> RepairResult:
    qs = sorted(dedupe_equivalent(qs), key=order_key)
    return RepairResult([ResultItem(c) for c in qs], bound_limited, bound)


def _specializations(q: CQ, E: LabeledExampleSet, size_bound: int, schema) -> list:
    s = common_schema(q, E, schema)
    relevant = LabeledExampleSet(E.positives, [n for n in E.negatives if member(n, q)], E.schema_hint)
    out = []
    for q2 in fitting_candidates(relevant, size_bound, s, q.arity, cores_only=False):
        c = core_cq(conjunction(q, q2))
        if _fits(c, E):
            out.append(c)
    return maximal_elements(dedupe_equivalent(out))


def cod_specialization_construct(q: CQ, E: LabeledExampleSet, size_bound: int,
                                 schema: Schema | None = None) -> RepairResult:
    """Maximal fitting CQs of the form q∧q'' with |q''| <= size_bound.

    Exact when q fails a positive (no specialization) or q fits E (only q).
    Otherwise bound-limited.
    """
    if not q.repetition_free:
        raise RepeatedHeadVariables("normalize the head first (normalize_head)")
    if not fits_all(q, E.positives):
        return RepairResult([], False, size_bound)
    if _fits(q, E):
        return _result([q], False, size_bound)
    return _result(_specializations(q, E, size_bound, schema), True, size_bound)


def cod_specialization_verify(q: CQ, E: LabeledExampleSet, q2: CQ, size_bound: int,
                              schema: Schema | None = None) -> BoundedVerdict:
    """Exact no, or yes-at-bound: no CQ of at most size_bound atoms lies
    strictly between q2 and q and fits E."""
    if not _fits(q2, E):
        return BoundedVerdict(NO, size_bound, None, "candidate does not fit the examples")
    if not contained(q2, q):
        return BoundedVerdict(NO, size_bound, None, "candidate is not contained in the query")
    if equivalent(q2, q):
        return BoundedVerdict(YES, size_bound, None, "candidate is equivalent to the query")
    s = common_schema(q, E, q2, schema)
    for c in enumerate_cqs(s, q.arity, size_bound, within=[q2.example] + list(E.positives)):
        if fits_all(c, (), E.negatives) and contained(c, q) and not maps_to(q2.example, c.example):
            return BoundedVerdict(NO, size_bound, c, "a closer fitting CQ lies between candidate and query")
    return BoundedVerdict(UNKNOWN, size_bound)


def _stable(r1: RepairResult, r2: RepairResult) -> bool:
    return {certificate(x) for x in r1.queries} == {certificate(x) for x in r2.queries}


def cod_specialization_exists(q: CQ, E: LabeledExampleSet, size_bound: int,
                              schema: Schema | None = None) -> BoundedVerdict:
    """Exact no when nothing below q fits E, exact yes when q fits E.

    Otherwise the construction is run at size_bound and size_bound+1. If
    the set is non-empty, stable, and each member survives verification at
    size_bound+1 the answer is yes-at-bound, else it is inconclusive.
    """
    s = common_schema(q, E, schema)
    if not fitting_below_exists(q, E, s, repetition_free=q.repetition_free):
        return BoundedVerdict(NO, size_bound, None, "no fitting CQ is contained in the query")
    if _fits(q, E):
        return BoundedVerdict(YES, size_bound, q, "the query fits")
    r1 = cod_specialization_construct(q, E, size_bound, s)
    r2 = cod_specialization_construct(q, E, size_bound + 1, s)
    if r1.items and _stable(r1, r2):
        if all(cod_specialization_verify(q, E, c, size_bound + 1, s).status != NO for c in r1.queries):
            return BoundedVerdict(UNKNOWN, size_bound, r1.queries[0], "stable at the next bound")
    return BoundedVerdict(UNKNOWN, size_bound, None, "candidates change with the bound",
                          inconclusive=True)


def wmg_as_specialization(q: CQ, E: LabeledExampleSet, size_bound: int = 3,
                          schema: Schema | None = None) -> BoundedVerdict:
    """Weak most-generality of q checked as: q is a specialization of every
    minimally constrained CQ that contains it."""
    if not _fits(q, E):
        return BoundedVerdict(NO, size_bound, None, "query does not fit the examples")
    s = common_schema(q, E, schema)
    for top in minimally_constrained_set(s, q.arity):
        if top.arity != q.arity or not contained(q, top):
            continue
        v = cod_specialization_verify(top, E, q, size_bound, s)
        if v.status == NO:
            return BoundedVerdict(NO, size_bound, v.witness, v.note)
    return BoundedVerdict(UNKNOWN, size_bound)


# ------------------------------------------------------------------- repairs

def positive_repair_condition(q: CQ, positives, q2: CQ, boolean: bool = False) -> bool:
    """Repair test for positive examples only (q2 must fit them).

    If q fits the positives, only CQs equivalent to q qualify. Otherwise
    q2 qualifies iff Π(E+) × e_{q∧q2} maps into e_{q2}; for Boolean CQs
    the equivalent test (Π(E+) × e_q) → e_{q2} → Π(E+) can be used.
    """
    positives = list(positives)
    if fits_all(q, positives):
        return equivalent(q, q2)
    if not fits_all(q2, positives):
        return False
    p = product_all(positives)
    if boolean:
        if q.arity != 0:
            raise ValueError("the Boolean form needs arity 0")
        return maps_to(product_all([p, q.example]), q2.example) and maps_to(q2.example, p)
    return maps_to(product_all([p, conjunction(q, q2).example]), q2.example)


def hat_negatives(E: LabeledExampleSet) -> LabeledExampleSet:
    """E with every negative n replaced by n × Π(E+).

    Among CQs that fit E+ these negatives reject exactly the same CQs.
    """
    if not E.positives:
        return E
    p = product_all(E.positives)
    return LabeledExampleSet(E.positives, [product_all([n, p]) for n in E.negatives], E.schema_hint)


def cod_repair_verify(q: CQ, E: LabeledExampleSet, q2: CQ, size_bound: int,
                      schema: Schema | None = None) -> BoundedVerdict:
    """Exact when q fits E or q fails a positive; bound-limited otherwise."""
    if not _fits(q2, E):
        return BoundedVerdict(NO, size_bound, None, "candidate does not fit the examples")
    if _fits(q, E):
        ok = equivalent(q, q2)
        return BoundedVerdict(YES if ok else NO, size_bound, None, "the query fits")
    if not fits_all(q, E.positives):
        ok = positive_repair_condition(q, E.positives, q2)
        return BoundedVerdict(YES if ok else NO, size_bound, None, "positive-example condition")
    # q fits E+: repairs are the specializations w.r.t. the product negatives
    return cod_specialization_verify(q, hat_negatives(E), q2, size_bound, schema)


def _repair_once(q: CQ, E: LabeledExampleSet, size_bound: int, s: Schema) -> RepairResult:
    if not fits_all(q, E.positives):
        cands = [c for c in fitting_candidates(E, size_bound, s, q.arity)
                 if positive_repair_condition(q, E.positives, c)]
        return _result(cands, True, size_bound)
    return cod_specialization_construct(q, hat_negatives(E), size_bound, s)


def cod_repair_construct(q: CQ, E: LabeledExampleSet, size_bound: int, schema: Schema | None = None,
                         check_growth: bool = True) -> RepairResult:
    """All repairs found with candidates of at most size_bound atoms.

    When check_growth is set the search is repeated at size_bound+1 and
    infinite_family is raised if new repairs show up.
    """
    s = common_schema(q, E, schema)
    if _fits(q, E):
        return _result([q], False, size_bound)
    res = _repair_once(q, E, size_bound, s)
    if check_growth and res.bound_limited:
        more = _repair_once(q, E, size_bound + 1, s)
        if len(more) > len(res):
            res.infinite_family = True
            res.warnings.append(f"more repairs appear at size {size_bound + 1}; "
                                "the set of repairs may be infinite")
    return res


def cod_repair_exists(q: CQ, E: LabeledExampleSet, size_bound: int,
                      schema: Schema | None = None) -> BoundedVerdict:
    s = common_schema(q, E, schema)
    if not fitting_exists(E, s, q.arity):
        return BoundedVerdict(NO, size_bound, None, "no CQ fits the examples")
    if _fits(q, E):
        return BoundedVerdict(YES, size_bound, q, "the query fits")
    g = cod_generalization_construct(q, E)
    if g is not None:
        return BoundedVerdict(YES, size_bound, g, "the generalization is a repair")
    if not fits_all(q, E.positives):
        r = _repair_once(q, E, size_bound, s)
        if r.items:
            return BoundedVerdict(YES, size_bound, r.queries[0], "repair found")
        return BoundedVerdict(UNKNOWN, size_bound, None, "no repair up to the bound", inconclusive=True)
    return cod_specialization_exists(q, hat_negatives(E), size_bound, s)


def cod_generalization_as_repair(q: CQ, E: LabeledExampleSet, size_bound: int = 4) -> CQ | None:
    """The repair of (q, E plus e_q as a positive), through the repair
    verifier; it must coincide with the generalization."""
    E2 = E.with_positive(q.example)
    cand = most_specific_fitting(E2)
    if cand is None:
        return None
    v = cod_repair_verify(q, E2, cand, size_bound)
    return canonical_form(cand) if v.status == YES else None
