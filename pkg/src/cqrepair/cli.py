"""Command-line interface: eval, repair, distance, oracle.

Exit codes: 0 yes / success, 1 no, 2 parse error, 3 schema error,
4 yes-at-bound, 5 invalid flags, 6 timeout, 7 inconclusive at the bound.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import cod, distrepair
from .enumerate import enumerate_cqs
from .errors import (ArityMismatch, EmptyList, EmptyPositives, EmptySchema, InvalidDistribution,
                     NoFittingExists, ParseError, RepeatedHeadVariables, SafetyViolation,
                     SchemaMismatch, SearchTimeout, UnknownRelation)
from .fitting import (NO, UNKNOWN, YES, BoundedVerdict, fitting_candidates, fitting_below_exists,
                      fitting_exists, most_specific_fitting, order_key, wmg_fitting_construct)
from .hom import evaluate, fits_all
from .limits import thread_cap, time_limit
from .metrics import ExampleDistribution, distance
from .model import CQ, LabeledExampleSet, Schema, common_schema
from .results import RepairResult, ResultItem
from .structure import normalize_head, restore_head
from .syntax import (from_json, parse_cq, parse_instance, parse_labeled, parse_mu, parse_schema,
                     serialize_cq, to_json)

EXIT_YES, EXIT_NO, EXIT_PARSE, EXIT_SCHEMA, EXIT_AT_BOUND, EXIT_FLAGS, EXIT_TIMEOUT, EXIT_INCONCLUSIVE = (
    0, 1, 2, 3, 4, 5, 6, 7)


class FlagError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _is_json(path: str) -> bool:
    return path.endswith(".json")


def load_examples(path: str, schema: Schema | None = None):
    """Returns (E, query or None) from a text or JSON examples file."""
    if _is_json(path):
        s, q, E = from_json(_read(path))
        return E, q
    return parse_labeled(_read(path), schema), None


def load_query(path: str, schema: Schema | None = None) -> CQ:
    if _is_json(path):
        _, q, _ = from_json(_read(path))
        if q is None:
            raise ParseError(f"{path} holds no query")
        return q
    return parse_cq(_read(path), schema)


def _load_pair(args):
    E, q_json = load_examples(args.examples)
    q = load_query(args.query, E.schema_hint) if args.query != "-" else q_json
    if q is None:
        raise ParseError("no query given")
    common_schema(q, E)  # raises SchemaMismatch on conflicting arities
    if E.arity is not None and E.arity != q.arity:
        raise ArityMismatch(f"query has arity {q.arity}, examples have arity {E.arity}")
    return q, E


# ----------------------------------------------------------------------- output

def _fmt_dist(d):
    return None if d is None else str(d)


def _print_result(res: RepairResult, args, q: CQ, E: LabeledExampleSet) -> int:
    if args.json:
        doc = to_json(E, q)
        doc["results"] = [{"query": serialize_cq(it.query), "distance": _fmt_dist(it.distance),
                           "bound_limited": res.bound_limited} for it in res.items]
        doc["bound_limited"] = res.bound_limited
        doc["bound"] = res.bound
        doc["infinite_family"] = res.infinite_family
        doc["warnings"] = list(res.warnings)
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        if res.bound_limited:
            print(f"# bound-limited (size bound {res.bound})")
        for w in res.warnings:
            print(f"# warning: {w}")
        for it in res.items:
            line = serialize_cq(it.query)
            if it.distance is not None:
                line += f"  # distance {it.distance}"
            print(line)
    return EXIT_YES if res.items else EXIT_NO


def _print_verdict(v, args) -> int:
    if isinstance(v, bool):
        v = BoundedVerdict(YES if v else NO)
    if args.json:
        doc = {"answer": v.label, "status": v.status, "bound": v.bound, "note": v.note,
               "witness": serialize_cq(v.witness) if v.witness is not None else None}
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        if v.status == UNKNOWN:
            print(f"# bound-limited (size bound {v.bound})")
        print(v.label)
        if v.note:
            print(f"# {v.note}")
        if v.witness is not None:
            print(f"# witness: {serialize_cq(v.witness)}")
    if v.inconclusive:
        return EXIT_INCONCLUSIVE
    return {YES: EXIT_YES, NO: EXIT_NO, UNKNOWN: EXIT_AT_BOUND}[v.status]


# ---------------------------------------------------------------------- commands

def cmd_eval(args) -> int:
    q = load_query(args.query)
    facts = parse_instance(_read(args.instance))
    common_schema(q, Schema.of_atoms(facts))
    for t in sorted(evaluate(q, facts)):
        print(", ".join(t) if t else "()")
    return EXIT_YES


def _cod_normalized(q, E, fn):
    """Apply fn to the head-normalized problem and re-expand the results."""
    if q.repetition_free:
        return fn(q, E)
    q_hat, E_hat, back = normalize_head(q, E)
    res = fn(q_hat, E_hat)
    if isinstance(res, RepairResult):
        res.items = [ResultItem(restore_head(it.query, back), it.distance, it.status) for it in res.items]
    elif isinstance(res, BoundedVerdict) and res.witness is not None:
        res = BoundedVerdict(res.status, res.bound, restore_head(res.witness, back), res.note, res.inconclusive)
    return res


def _cod(args, q, E, cand):
    n = args.size_bound
    if args.mode == "generalize":
        if args.action == "construct":
            g = cod.cod_generalization_construct(q, E)
            return RepairResult([ResultItem(g)] if g is not None else [], False, None)
        if args.action == "verify":
            return cod.cod_generalization_verify(q, E, cand)
        return cod.cod_generalization_exists(q, E)
    if args.mode == "specialize":
        if args.action == "construct":
            return _cod_normalized(q, E, lambda a, b: cod.cod_specialization_construct(a, b, n))
        if args.action == "verify":
            return cod.cod_specialization_verify(q, E, cand, n)
        return _cod_normalized(q, E, lambda a, b: cod.cod_specialization_exists(a, b, n))
    if args.action == "construct":
        return _cod_normalized(q, E, lambda a, b: cod.cod_repair_construct(a, b, n))
    if args.action == "verify":
        return cod.cod_repair_verify(q, E, cand, n)
    return _cod_normalized(q, E, lambda a, b: cod.cod_repair_exists(a, b, n))


def _edit(args, q, E, cand):
    if args.action == "construct":
        try:
            return distrepair.edit_repair_construct(q, E, args.mode, ceiling=args.distance_bound)
        except NoFittingExists as exc:
            res = RepairResult([], False, None)
            res.warnings.append(str(exc))
            return res
    if args.action == "verify":
        return distrepair.edit_repair_verify(q, E, cand, args.mode)
    if args.distance_bound is not None:
        return distrepair.edit_bounded_fitting(q, E, args.distance_bound, args.mode) is not None
    return distrepair.edit_repair_exists(q, E, args.mode)


def _conforming_exists(q, E, mode) -> bool:
    if mode == "generalize":
        return cod.cod_generalization_exists(q, E)
    if mode == "specialize":
        return fitting_below_exists(q, E)
    return fitting_exists(E, None, q.arity)


def _generic(args, q, E, cand, mu):
    n, metric = args.size_bound, args.preorder
    if args.action == "construct":
        return distrepair.generic_dist_repair(metric, q, E, n, args.mode, mu)
    if args.action == "verify":
        if not fits_all(cand, E.positives, E.negatives) or not distrepair.conforms(q, cand, args.mode):
            return BoundedVerdict(NO, n, None, "candidate does not fit or violates the mode")
        d = distance(metric, q, cand, mu)
        for c in fitting_candidates(E, n, None, q.arity):
            if distrepair.conforms(q, c, args.mode) and distance(metric, q, c, mu) < d:
                return BoundedVerdict(NO, n, c, "a closer fitting CQ exists")
        return BoundedVerdict(UNKNOWN, n)
    if not _conforming_exists(q, E, args.mode):
        return BoundedVerdict(NO, n, None, "no conforming fitting CQ exists")
    if metric == "mu" or (metric == "sdi" and args.mode == "repair"):
        return BoundedVerdict(YES, n, None, "a fitting CQ exists, so a closest one exists")
    res = distrepair.generic_dist_repair(metric, q, E, n, args.mode, mu)
    if res.items:
        return BoundedVerdict(UNKNOWN, n, res.items[0].query)
    return BoundedVerdict(UNKNOWN, n, None, "no conforming CQ up to the bound", inconclusive=True)


def cmd_repair(args) -> int:
    if args.action == "verify" and not args.candidate:
        raise FlagError("--action verify requires --candidate")
    if args.preorder == "mu" and not args.mu_file:
        raise FlagError("--preorder mu requires --mu-file")
    if args.size_bound < 1:
        raise FlagError("--size-bound must be at least 1")
    if args.distance_bound is not None and args.distance_bound < 0:
        raise FlagError("--distance-bound must be non-negative")
    if args.distance_bound is not None and args.preorder != "edit":
        raise FlagError("--distance-bound applies to --preorder edit only")
    q, E = _load_pair(args)
    cand = load_query(args.candidate, E.schema_hint) if args.candidate else None
    if cand is not None and cand.arity != q.arity:
        raise ArityMismatch(f"candidate has arity {cand.arity}, query has arity {q.arity}")
    mu = None
    if args.mu_file:
        mu = ExampleDistribution(tuple(parse_mu(_read(args.mu_file), Path(args.mu_file).parent)))
    with time_limit(args.timeout):
        if args.preorder == "cod":
            out = _cod(args, q, E, cand)
        elif args.preorder == "edit":
            out = _edit(args, q, E, cand)
        else:
            out = _generic(args, q, E, cand, mu)
    if isinstance(out, RepairResult):
        return _print_result(out, args, q, E)
    return _print_verdict(out, args)


def cmd_distance(args) -> int:
    if args.metric == "mu" and not args.mu_file:
        raise FlagError("--metric mu requires --mu-file")
    q1 = load_query(args.q1)
    q2 = load_query(args.q2)
    common_schema(q1, q2)
    mu = None
    if args.mu_file:
        mu = ExampleDistribution(tuple(parse_mu(_read(args.mu_file), Path(args.mu_file).parent)))
    with time_limit(args.timeout):
        d = distance(args.metric, q1, q2, mu)
    if args.json:
        print(json.dumps({"metric": args.metric, "distance": str(d)}))
    else:
        print(d)
    return EXIT_YES


_EXAMPLE_HEADER = re.compile(r"^\s*[+-]\s*example\b", re.M)


def cmd_oracle(args) -> int:
    text = _read(args.source)
    E = None
    if _is_json(args.source):
        s, _, E = from_json(text)
        s = common_schema(s, E)
    elif _EXAMPLE_HEADER.search(text):
        E = parse_labeled(text)
        s = E.schema()
    else:
        s = parse_schema(text)
    if not len(s):
        raise EmptySchema("the schema has no relations")
    k = args.arity if args.arity is not None else (E.arity if E is not None else None)
    if k is None:
        raise FlagError("--arity is required when no examples are given")
    if E is not None and E.arity is not None and E.arity != k:
        raise ArityMismatch(f"--arity {k} but the examples have arity {E.arity}")
    E = E if E is not None else LabeledExampleSet((), (), s)
    with time_limit(args.timeout):
        if args.task == "enumerate":
            qs = list(enumerate_cqs(s, k, args.max_size))
        elif args.task == "fit":
            qs = sorted(fitting_candidates(E, args.max_size, s, k), key=order_key)
        elif args.task == "most-specific":
            if not E.positives:
                raise EmptyPositives("most-specific needs at least one positive example")
            m = most_specific_fitting(E)
            qs = [] if m is None else [m]
        else:
            qs = wmg_fitting_construct(E, args.max_size, s, k)
    limited = args.task in ("fit", "wmg")
    res = RepairResult([ResultItem(x) for x in qs], limited, args.max_size if limited else None)
    if args.json:
        print(json.dumps({"schema": dict(s.items()), "queries": [serialize_cq(x) for x in qs],
                          "bound_limited": limited}, indent=2, ensure_ascii=False))
        return EXIT_YES if qs else EXIT_NO
    return _print_result(res, argparse.Namespace(json=False), None, E)


# ---------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cqrepair", description="Repair conjunctive queries against labeled examples.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a query on an instance")
    e.add_argument("query")
    e.add_argument("instance")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("repair", help="construct, verify or decide repairs")
    r.add_argument("query", help="query file ('-' to take it from a JSON examples file)")
    r.add_argument("examples")
    r.add_argument("--preorder", choices=["cod", "edit", "sdi", "sdq", "mu"], default="cod")
    r.add_argument("--mode", choices=list(distrepair.MODES), default="repair")
    r.add_argument("--action", choices=["construct", "verify", "exists"], default="construct")
    r.add_argument("--size-bound", type=int, default=4)
    r.add_argument("--distance-bound", type=int)
    r.add_argument("--candidate")
    r.add_argument("--mu-file")
    r.add_argument("--timeout", type=float, default=60.0)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_repair)

    d = sub.add_parser("distance", help="distance between two queries")
    d.add_argument("q1")
    d.add_argument("q2")
    d.add_argument("--metric", choices=["edit", "sdi", "sdq", "mu"], default="edit")
    d.add_argument("--mu-file")
    d.add_argument("--timeout", type=float, default=60.0)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_distance)

    o = sub.add_parser("oracle", help="enumeration and fitting oracles")
    o.add_argument("task", choices=["enumerate", "fit", "most-specific", "wmg"])
    o.add_argument("source", help="schema file (R/2, P/1) or labeled examples file")
    o.add_argument("--arity", type=int)
    o.add_argument("--max-size", type=int, default=3)
    o.add_argument("--timeout", type=float, default=60.0)
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return p


_PARSE_ERRORS = (ParseError, SafetyViolation, InvalidDistribution)
_SCHEMA_ERRORS = (SchemaMismatch, UnknownRelation, ArityMismatch, EmptySchema, RepeatedHeadVariables,
                  EmptyList, EmptyPositives)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            thread_cap()
        except ValueError as exc:
            raise FlagError(str(exc)) from None
        if getattr(args, "timeout", 1) <= 0:
            raise FlagError("--timeout must be positive")
        return args.func(args)
    except FlagError as exc:
        print(f"cqrepair: error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except _PARSE_ERRORS as exc:
        print(f"cqrepair: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _SCHEMA_ERRORS as exc:
        print(f"cqrepair: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except SearchTimeout as exc:
        print(f"cqrepair: timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
