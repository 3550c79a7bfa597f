"""Canonical labeling of data examples (and hence CQs) up to isomorphism.

Colour refinement plus individualization: values start coloured by the
set of tuple positions they occupy, colours are refined by the facts a
value takes part in, and remaining ties are broken by trying every member
of the first non-singleton cell. The certificate is the lexicographically
least relabeled structure over all leaves, so two examples get the same
certificate iff they are isomorphic by a map that fixes the tuple.
"""
from __future__ import annotations

from .model import CQ, DataExample

EXISTENTIAL_NAMES = ("y", "z", "u", "v", "w")


def _occurrences(e: DataExample):
    occ = {v: [] for v in e.values}
    for f in e.facts:
        for pos, v in enumerate(f.args):
            occ[v].append((f.relation, pos, f.args))
    return occ


def _rank(sig: dict) -> dict:
    keys = sorted(set(sig.values()))
    rank = {k: i for i, k in enumerate(keys)}
    return {v: rank[s] for v, s in sig.items()}


def _refine(colors: dict, occ: dict) -> dict:
    ncol = len(set(colors.values()))
    while True:
        sig = {}
        for v, c in colors.items():
            sig[v] = (c, tuple(sorted((rel, pos, tuple(colors[a] for a in args))
                                      for rel, pos, args in occ[v])))
        new = _rank(sig)
        n = len(set(new.values()))
        if n == ncol:
            return new
        colors, ncol = new, n


def _form(e: DataExample, colors: dict):
    return (tuple(colors[v] for v in e.tuple),
            tuple(sorted((f.relation, tuple(colors[a] for a in f.args)) for f in e.facts)))


def canonical_labeling(e: DataExample):
    """Return (certificate, labeling) where labeling maps values to 0..n-1."""
    occ = _occurrences(e)
    init = {}
    for v in e.values:
        pos = tuple(i for i, t in enumerate(e.tuple) if t == v)
        init[v] = (0, pos) if pos else (1, ())
    colors = _refine(_rank(init), occ)
    best = [None, None]

    def search(colors):
        cells = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            form = _form(e, colors)
            if best[0] is None or form < best[0]:
                best[0], best[1] = form, dict(colors)
            return
        seen_forms = set()
        for v in sorted(target):
            ind = {u: (c, 0 if u == v else 1) for u, c in colors.items()}
            refined = _refine(_rank(ind), occ)
            # cheap symmetry pruning: identical refined colour classes give
            # identical subtrees
            key = _form(e, refined) if len(set(refined.values())) == len(refined) else None
            if key is not None:
                if key in seen_forms:
                    continue
                seen_forms.add(key)
            search(refined)

    search(colors)
    cert = (len(e.values),) + best[0]
    return cert, best[1]


def certificate(obj) -> tuple:
    e = obj.example if isinstance(obj, CQ) else obj
    return canonical_labeling(e)[0]


def isomorphic(a, b) -> bool:
    ea = a.example if isinstance(a, CQ) else a
    eb = b.example if isinstance(b, CQ) else b
    if len(ea.facts) != len(eb.facts) or len(ea.values) != len(eb.values) or ea.arity != eb.arity:
        return False
    return certificate(ea) == certificate(eb)


def head_names(head_labels) -> list:
    """Names for head positions: ``x`` for unary heads, ``x1..xk`` otherwise."""
    k = len(head_labels)
    first = {}
    names = []
    for i, lab in enumerate(head_labels):
        if lab not in first:
            first[lab] = "x" if k == 1 else f"x{i + 1}"
        names.append(first[lab])
    return names


def existential_name(i: int) -> str:
    if i < len(EXISTENTIAL_NAMES):
        return EXISTENTIAL_NAMES[i]
    return f"y{i - len(EXISTENTIAL_NAMES) + 1}"


def naming_from_labels(tuple_values, labeling: dict) -> dict:
    """Map each value to a variable name given a canonical labeling."""
    names = {}
    for v, n in zip(tuple_values, head_names([labeling[v] for v in tuple_values])):
        names[v] = n
    rest = sorted((lab, v) for v, lab in labeling.items() if v not in names)
    for i, (_, v) in enumerate(rest):
        names[v] = existential_name(i)
    return names


def canonical_form(q: CQ) -> CQ:
    """Rename q's variables canonically; isomorphic queries become identical."""
    _, lab = canonical_labeling(q.example)
    return q.rename(naming_from_labels(q.head, lab))


def relabel_example(e: DataExample) -> DataExample:
    _, lab = canonical_labeling(e)
    return e.rename({v: str(l) for v, l in lab.items()})
