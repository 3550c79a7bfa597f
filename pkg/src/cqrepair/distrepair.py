"""Distance-based repairs: exact edit-distance repairs by iterative
deepening over edits of core(q), and bounded search for the other metrics."""
from __future__ import annotations

from itertools import combinations

from .canon import canonical_form, certificate
from .cores import core_cq, core_example, is_core
from .errors import NoFittingExists, RepeatedHeadVariables
from .fitting import (dedupe_equivalent, fitting_candidates, least_repetition_free,
                      most_specific_fitting, order_key)
from .hom import contained, fits_all, maps_to
from .limits import check_deadline
from .metrics import distance, edit_dist
from .model import CQ, Atom, DataExample, LabeledExampleSet, Schema, common_schema
from .results import RepairResult, ResultItem
from .structure import canonical_cq, conjunction

MODES = ("repair", "generalize", "specialize")


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")


def conforms(q: CQ, q2: CQ, mode: str) -> bool:
    if mode == "generalize":
        return contained(q, q2)
    if mode == "specialize":
        return contained(q2, q)
    return True


def conforming_witness(q: CQ, E: LabeledExampleSet, mode: str = "repair",
                       schema: Schema | None = None) -> CQ | None:
    """Some repetition-free CQ that fits E and respects the mode's containment
    requirement, or None if there is none (exact)."""
    _check_mode(mode)
    s = common_schema(q, E, schema)
    if mode == "generalize":
        return most_specific_fitting(E.with_positive(q.example))
    if mode == "specialize" and not fits_all(q, E.positives):
        return None
    p = least_repetition_free(E, s, q.arity)
    if p is None:
        return None
    w = canonical_cq(p, "q", s)
    if mode == "specialize":
        w = conjunction(q, w)
    if not fits_all(w, (), E.negatives):
        return None
    return canonical_form(core_cq(w))


# ------------------------------------------------------------ candidate edits

class _Editor:
    """Generates C - D + A with |D| + |A| = d for the core C of q.

    Only cores are emitted. Every core at edit distance d from C is, up to
    renaming, of that form; the positive-example (and, when generalizing,
    the containment) test is closed under removing atoms and prunes early.
    """

    def __init__(self, q: CQ, E: LabeledExampleSet, mode: str, schema: Schema):
        if not q.repetition_free:
            raise RepeatedHeadVariables("edit distance needs a repetition-free head")
        self.q = q
        self.E = E
        self.mode = mode
        self.C = core_example(q.example)
        self.facts = sorted(self.C.facts)
        self.head = self.C.tuple
        self.vars = sorted(self.C.values)
        self.rels = sorted(schema.items())
        self.schema = schema
        self.targets = list(E.positives) + ([self.C] if mode == "generalize" else [])

    def _ok_partial(self, facts) -> bool:
        e = DataExample(frozenset(facts), self.head)
        return all(maps_to(e, t) for t in self.targets)

    def _final(self, facts) -> CQ | None:
        if not facts:
            return None
        covered = {v for f in facts for v in f.args}
        if not set(self.head) <= covered:
            return None
        e = DataExample(frozenset(facts), self.head)
        if any(maps_to(e, n) for n in self.E.negatives):
            return None
        if not is_core(e):
            return None
        if self.mode == "specialize" and not maps_to(self.C, e):
            return None
        return canonical_form(CQ(self.head, e.facts, "q", self.schema))

    def _atoms(self, nfresh):
        pool = self.vars + [_fresh(i) for i in range(nfresh + _max_arity(self.rels))]
        for rel, ar in self.rels:
            for args in _tuples(pool, ar, nfresh, len(self.vars)):
                yield Atom(rel, args)

    def candidates(self, d: int):
        seen = set()
        for i in range(min(d, len(self.facts)) + 1):
            for D in combinations(self.facts, i):
                check_deadline()
                base = frozenset(self.facts) - set(D)
                if not self._ok_partial(base):
                    continue
                for facts in self._add(base, d - i, 0, frozenset()):
                    key = certificate(DataExample(facts, self.head))
                    if key in seen:
                        continue
                    seen.add(key)
                    c = self._final(facts)
                    if c is not None:
                        yield c

    def _add(self, cur, j, nfresh, added):
        if j == 0:
            yield cur
            return
        for a in self._atoms(nfresh):
            if a in self.C.facts or a in cur:
                continue
            nxt = cur | {a}
            if not self._ok_partial(nxt):
                continue
            used = sum(1 for v in {v for b in added | {a} for v in b.args} if v.startswith("?"))
            yield from self._add(nxt, j - 1, used, added | {a})


def _fresh(i: int) -> str:
    return f"?f{i}"  # not a legal variable name, so never clashes with q


def _max_arity(rels) -> int:
    return max((a for _, a in rels), default=0)


def _tuples(pool, ar, nfresh, nbase):
    """Argument tuples in which fresh variables are introduced in order."""
    def rec(prefix, nf):
        if len(prefix) == ar:
            yield tuple(prefix)
            return
        for v in pool[:nbase + nf + 1]:
            nnf = nf + 1 if v == _fresh(nf) else nf
            yield from rec(prefix + [v], nnf)
    yield from rec([], nfresh)


def _ceiling(q: CQ, witness: CQ) -> int:
    return len(core_example(q.example).facts) + len(core_example(witness.example).facts)


def edit_bounded_fitting(q: CQ, E: LabeledExampleSet, d: int, mode: str = "repair",
                         schema: Schema | None = None) -> CQ | None:
    """A fitting CQ within edit distance d of q that respects the mode, if any."""
    _check_mode(mode)
    if d < 0:
        return None
    ed = _Editor(q, E, mode, common_schema(q, E, schema))
    for dd in range(d + 1):
        for c in ed.candidates(dd):
            return c
    return None


def edit_repair_construct(q: CQ, E: LabeledExampleSet, mode: str = "repair",
                          schema: Schema | None = None, ceiling: int | None = None) -> RepairResult:
    """All edit-distance repairs (generalizations, specializations) of q.

    Raises NoFittingExists if nothing conforming fits E.
    """
    _check_mode(mode)
    s = common_schema(q, E, schema)
    w = conforming_witness(q, E, mode, s)
    if w is None:
        raise NoFittingExists(f"no repetition-free CQ fits the examples ({mode})")
    top = _ceiling(q, w) if ceiling is None else ceiling
    ed = _Editor(q, E, mode, s)
    for d in range(top + 1):
        found = dedupe_equivalent(list(ed.candidates(d)))
        if found:
            found.sort(key=order_key)
            return RepairResult([ResultItem(c, d) for c in found], False, None)
    raise NoFittingExists(f"no conforming fitting CQ within edit distance {top}")


def edit_repair_verify(q: CQ, E: LabeledExampleSet, q2: CQ, mode: str = "repair",
                       schema: Schema | None = None) -> bool:
    _check_mode(mode)
    if not q2.repetition_free:
        raise RepeatedHeadVariables("edit distance needs a repetition-free head")
    if not fits_all(q2, E.positives, E.negatives) or not conforms(q, q2, mode):
        return False
    d = edit_dist(q, q2)
    return edit_bounded_fitting(q, E, d - 1, mode, schema) is None


def edit_repair_exists(q: CQ, E: LabeledExampleSet, mode: str = "repair",
                       schema: Schema | None = None) -> bool:
    return conforming_witness(q, E, mode, schema) is not None


# ------------------------------------------------------------- other metrics

def generic_dist_repair(metric: str, q: CQ, E: LabeledExampleSet, candidate_size_bound: int,
                        mode: str = "repair", mu=None, schema: Schema | None = None) -> RepairResult:
    """Distance-minimal fitting CQs among those with at most the given size."""
    _check_mode(mode)
    s = common_schema(q, E, schema)
    if fits_all(q, E.positives, E.negatives):
        return RepairResult([ResultItem(canonical_form(core_cq(q)), distance(metric, q, q, mu))], False)
    scored = []
    for c in fitting_candidates(E, candidate_size_bound, s, q.arity):
        if conforms(q, c, mode):
            scored.append((distance(metric, q, c, mu), c))
    res = RepairResult([], True, candidate_size_bound)
    if not scored:
        return res
    best = min(x for x, _ in scored)
    winners = sorted((c for x, c in scored if x == best), key=order_key)
    res.items = [ResultItem(c, best) for c in winners]
    if len(winners) >= 2:
        res.warnings.append(f"{len(winners)} candidates tie at distance {best}; "
                            f"the {metric} order does not discriminate between them")
    return res

