"""Semantic distances between CQs: edit distance on cores, smallest
distinguishing instance / query, and disagreement probability."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cores import core_example
from .enumerate import set_partitions
from .errors import ArityMismatch, InvalidDistribution, RepeatedHeadVariables
from .hom import contained, maps_to, member
from .limits import check_deadline
from .model import CQ, Atom, DataExample
from .structure import quotient


def _check_pair(q1: CQ, q2: CQ, repetition_free: bool = False):
    if q1.arity != q2.arity:
        raise ArityMismatch(f"arity {q1.arity} vs {q2.arity}")
    if repetition_free:
        for q in (q1, q2):
            if not q.repetition_free:
                raise RepeatedHeadVariables(
                    f"edit distance needs repetition-free heads; {q} repeats a head variable")


# ------------------------------------------------------------------ edit distance

class _EditSearch:
    """Maximise the number of shared facts between two cores over injective
    partial matchings of existential variables (head variables are fixed)."""

    def __init__(self, c1: DataExample, c2: DataExample):
        self.c1 = c1
        ren = dict(zip(c2.tuple, c1.tuple))
        # keep c2's existentials apart from c1's names
        for v in c2.adom - set(c2.tuple):
            ren[v] = ("e2", v)
        self.c2_atoms = [Atom(f.relation, tuple(ren[v] for v in f.args)) for f in c2.facts]
        self.c1_facts = c1.facts
        self.c1_ex = sorted(c1.adom - set(c1.tuple))
        ex2 = {v for a in self.c2_atoms for v in a.args if isinstance(v, tuple)}
        deg = {v: sum(v in a.args for a in self.c2_atoms) for v in ex2}
        self.order = sorted(ex2, key=lambda v: (-deg[v], repr(v)))
        self.atoms_of = {v: [i for i, a in enumerate(self.c2_atoms) if v in a.args] for v in ex2}
        self.c1_count = {}
        for f in self.c1_facts:
            self.c1_count[f.relation] = self.c1_count.get(f.relation, 0) + 1
        self.best = -1
        self.target = None

    def _image(self, a, m):
        return Atom(a.relation, tuple(m.get(v, v) for v in a.args))

    def run(self, target=None) -> int:
        """Largest common-fact count; stops early once ``target`` is reached."""
        self.target = target
        m = {}
        n_ex = {i: sum(1 for v in set(a.args) if isinstance(v, tuple)) for i, a in enumerate(self.c2_atoms)}
        matched = 0
        status = {}
        for i, a in enumerate(self.c2_atoms):
            if n_ex[i] == 0:
                ok = a in self.c1_facts
                status[i] = "hit" if ok else "miss"
                matched += ok
        self._rec(0, m, set(), matched, status)
        return self.best

    def _upper(self, matched_by_rel, status):
        ub = 0
        pending = {}
        for i, a in enumerate(self.c2_atoms):
            if i not in status:
                pending[a.relation] = pending.get(a.relation, 0) + 1
        rels = set(pending) | set(matched_by_rel)
        for r in rels:
            ub += min(self.c1_count.get(r, 0), matched_by_rel.get(r, 0) + pending.get(r, 0))
        return ub

    def _rec(self, depth, m, used, matched, status):
        if self.target is not None and self.best >= self.target:
            return
        check_deadline()
        by_rel = {}
        for i, s in status.items():
            if s == "hit":
                r = self.c2_atoms[i].relation
                by_rel[r] = by_rel.get(r, 0) + 1
        if self._upper(by_rel, status) <= self.best:
            return
        if depth == len(self.order):
            if matched > self.best:
                self.best = matched
            return
        v = self.order[depth]
        for cand in [c for c in self.c1_ex if c not in used] + [None]:
            m[v] = cand
            new_status = dict(status)
            gained = 0
            for i in self.atoms_of[v]:
                if i in new_status:
                    continue
                a = self.c2_atoms[i]
                if any(m.get(w, w) is None for w in a.args):
                    new_status[i] = "miss"
                    continue
                if all((not isinstance(w, tuple)) or w in m for w in a.args):
                    hit = self._image(a, m) in self.c1_facts
                    new_status[i] = "hit" if hit else "miss"
                    gained += hit
            if cand is not None:
                used.add(cand)
            self._rec(depth + 1, m, used, matched + gained, new_status)
            if cand is not None:
                used.discard(cand)
            del m[v]
            if self.target is not None and self.best >= self.target:
                return


def _edit_cores(q1: CQ, q2: CQ):
    _check_pair(q1, q2, repetition_free=True)
    return core_example(q1.example), core_example(q2.example)


def edit_dist(q1: CQ, q2: CQ) -> int:
    """Fewest fact insertions/deletions turning core(q2) into core(q1),
    minimised over renamings that send q2's head to q1's head."""
    c1, c2 = _edit_cores(q1, q2)
    common = _EditSearch(c1, c2).run()
    return len(c1.facts) + len(c2.facts) - 2 * common


def edit_dist_leq(q1: CQ, q2: CQ, n: int) -> bool:
    c1, c2 = _edit_cores(q1, q2)
    total = len(c1.facts) + len(c2.facts)
    if total <= n:
        return True
    need = -(-(total - n) // 2)  # common >= ceil((total - n) / 2)
    if need > min(len(c1.facts), len(c2.facts)):
        return False
    return _EditSearch(c1, c2).run(target=need) >= need


def naive_atom_difference(q1: CQ, q2: CQ) -> int:
    """Size of the symmetric difference of the bodies, no coring, no renaming."""
    return len(q1.body ^ q2.body)


# ------------------------------------------------ smallest distinguishing instance

def smallest_distinguishing_instance(q1: CQ, q2: CQ) -> DataExample | None:
    """A smallest example in exactly one of the two extensions (None if equivalent).

    A smallest instance on which q1 returns an answer that q2 does not can
    be taken to be a homomorphic image of core(e_q1), so it suffices to
    scan the quotients of the two cores.
    """
    _check_pair(q1, q2)
    best = None
    for a, b in ((q1, q2), (q2, q1)):
        if contained(a, b):
            continue
        c = core_example(a.example)
        vals = sorted(c.values)
        for part in set_partitions(len(vals)):
            check_deadline()
            pairs = [(vals[i], vals[part.index(part[i])]) for i in range(len(vals))]
            img = quotient(c, pairs)
            if best is not None and len(img.facts) >= len(best.facts):
                continue
            if not maps_to(b.example, img):
                best = img
    return best


def sdi_dist(q1: CQ, q2: CQ) -> Fraction:
    """1/n for the smallest distinguishing instance size n; 0 if equivalent."""
    w = smallest_distinguishing_instance(q1, q2)
    if w is None:
        return Fraction(0)
    return Fraction(1, len(w.facts))


# -------------------------------------------------- smallest distinguishing query

def smallest_distinguishing_query(q1: CQ, q2: CQ) -> CQ | None:
    """A smallest CQ mapping into exactly one of e_q1, e_q2 (None if equivalent).

    If p maps into e_a but not e_b, its image inside core(e_a) does too and
    is no larger, so safe sub-bodies of the cores are enough.
    """
    _check_pair(q1, q2)
    best = None
    for a, b in ((q1, q2), (q2, q1)):
        c = core_example(a.example)
        if maps_to(c, b.example):
            continue
        facts = sorted(c.facts)
        hv = set(c.tuple)
        limit = len(facts) if best is None else len(best) - 1
        found = None
        for size in range(1, limit + 1):
            for sub in combinations(facts, size):
                check_deadline()
                if not hv <= {v for f in sub for v in f.args}:
                    continue
                s = DataExample(frozenset(sub), c.tuple)
                if not maps_to(s, b.example):
                    found = CQ(c.tuple, s.facts, "p")
                    break
            if found is not None:
                break
        if found is not None and (best is None or len(found) < len(best)):
            best = found
    return best


def sdq_dist(q1: CQ, q2: CQ) -> Fraction:
    """1/n for the smallest distinguishing CQ size n; 0 if equivalent."""
    p = smallest_distinguishing_query(q1, q2)
    if p is None:
        return Fraction(0)
    return Fraction(1, len(p))


# ------------------------------------------------------------------- dist_mu

@dataclass(frozen=True)
class ExampleDistribution:
    """A finitely supported probability distribution over data examples."""
    support: tuple

    def __post_init__(self):
        sup = tuple((e, Fraction(p)) for e, p in self.support)
        if not sup:
            raise InvalidDistribution("empty support")
        if any(p <= 0 for _, p in sup):
            raise InvalidDistribution("probabilities must be positive")
        total = sum(p for _, p in sup)
        if total != 1:
            raise InvalidDistribution(f"probabilities sum to {total}, not 1")
        if len({e.arity for e, _ in sup}) > 1:
            raise InvalidDistribution("examples of different arities")
        object.__setattr__(self, "support", sup)


def mu_dist(q1: CQ, q2: CQ, mu: ExampleDistribution) -> Fraction:
    """Probability mass of examples on which q1 and q2 disagree."""
    _check_pair(q1, q2)
    if not isinstance(mu, ExampleDistribution):
        mu = ExampleDistribution(tuple(mu))
    total = Fraction(0)
    for e, p in mu.support:
        if member(e, q1) != member(e, q2):
            total += p
    return total


METRICS = ("edit", "sdi", "sdq", "mu")


def distance(metric: str, q1: CQ, q2: CQ, mu: ExampleDistribution | None = None):
    if metric == "edit":
        return edit_dist(q1, q2)
    if metric == "sdi":
        return sdi_dist(q1, q2)
    if metric == "sdq":
        return sdq_dist(q1, q2)
    if metric == "mu":
        if mu is None:
            raise InvalidDistribution("the mu metric needs a distribution")
        return mu_dist(q1, q2, mu)
    raise ValueError(f"unknown metric {metric!r}")


def dist_preorder_leq(metric, q: CQ, q1: CQ, q2: CQ, mu: ExampleDistribution | None = None) -> bool:
    """q1 is at least as close to q as q2 under the given metric."""
    if callable(metric):
        return metric(q, q1) <= metric(q, q2)
    return distance(metric, q, q1, mu) <= distance(metric, q, q2, mu)
