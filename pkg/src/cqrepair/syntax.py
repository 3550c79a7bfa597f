"""Text and JSON formats for queries, instances, examples and distributions.

Query:      q(x, y) :- R(x, z), S(z, y) .
Instance:   R(a, b).  one or more facts per line
Example:    a fact block followed by ``tuple: (a, b)``
Collection: sections headed ``+example`` / ``-example``; an optional
            ``schema: R/2, P/1`` line declares relations up front.
Comments start with ``#`` or ``%`` and run to the end of the line.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import ConstantNotSupported, InvalidDistribution, ParseError, SchemaMismatch
from .model import CQ, Atom, DataExample, LabeledExampleSet, Schema

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
VARIABLE = re.compile(r"[a-z_][A-Za-z0-9_′']*\Z")

_PUNCT = {"(", ")", ",", "."}


def _strip_comments(text: str) -> str:
    out = []
    for line in text.splitlines():
        for mark in ("#", "%"):
            i = _comment_start(line, mark)
            if i >= 0:
                line = line[:i]
        out.append(line)
    return "\n".join(out)


def _comment_start(line: str, mark: str) -> int:
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'" and not (i and (line[i - 1].isalnum() or line[i - 1] in "_′'")):
            quote = ch  # a prime after a name is not a quote
        elif ch == mark:
            return i
    return -1


def tokenize(text: str) -> list:
    """Split into (kind, text) tokens; kinds are word, quoted, punct, neck."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith(":-", i):
            toks.append(("neck", ":-"))
            i += 2
        elif ch in _PUNCT:
            toks.append(("punct", ch))
            i += 1
        elif ch in "\"'":
            j = text.find(ch, i + 1)
            if j < 0:
                raise ParseError(f"unterminated quote at offset {i}")
            toks.append(("quoted", text[i:j + 1]))
            i = j + 1
        elif ch == "⟨":
            depth, j = 0, i
            while j < n:
                if text[j] == "⟨":
                    depth += 1
                elif text[j] == "⟩":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j >= n:
                raise ParseError(f"unbalanced ⟨ at offset {i}")
            toks.append(("word", text[i:j + 1]))
            i = j + 1
        else:
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_′'-"):
                j += 1
            if j == i:
                raise ParseError(f"unexpected character {ch!r} at offset {i}")
            toks.append(("word", text[i:j]))
            i = j
    return toks


class _Cursor:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, text=None, kind=None):
        k, t = self.peek()
        if k is None:
            raise ParseError(f"unexpected end of input, expected {text or kind}")
        if text is not None and t != text:
            raise ParseError(f"expected {text!r}, got {t!r}")
        if kind is not None and k != kind:
            raise ParseError(f"expected {kind}, got {t!r}")
        self.i += 1
        return t

    def at_end(self):
        return self.i >= len(self.toks)


def _args(cur: _Cursor) -> list:
    cur.take("(")
    args = []
    if cur.peek()[1] == ")":
        cur.take(")")
        return args
    while True:
        k, t = cur.peek()
        if k not in ("word", "quoted"):
            raise ParseError(f"expected an argument, got {t!r}")
        cur.take()
        args.append(t)
        if cur.peek()[1] == ",":
            cur.take(",")
            continue
        cur.take(")")
        return args


def _check_variable(tok: str):
    if tok[0] in "\"'" or tok[0].isdigit() or tok[0].isupper():
        raise ConstantNotSupported(
            f"{tok!r} looks like a constant; queries may only use variables "
            "(simulate constants with unary predicates)")
    if not VARIABLE.match(tok):
        raise ParseError(f"invalid variable name {tok!r}")


def _relation(cur: _Cursor) -> str:
    name = cur.take(kind="word")
    if not IDENT.match(name):
        raise ParseError(f"invalid relation name {name!r}")
    return name


def parse_cq(text: str, schema: Schema | None = None) -> CQ:
    """Parse ``name(v1,...,vk) :- A1, ..., An .``"""
    cur = _Cursor(tokenize(_strip_comments(text)))
    name = _relation(cur)
    head = _args(cur)
    for v in head:
        _check_variable(v)
    cur.take(":-")
    body = []
    while True:
        rel = _relation(cur)
        args = _args(cur)
        if not args:
            raise ParseError(f"atom {rel}() has no arguments; nullary relations are not supported")
        for v in args:
            _check_variable(v)
        body.append(Atom(rel, tuple(args)))
        if cur.peek()[1] == ",":
            cur.take(",")
            continue
        break
    if cur.peek()[1] == ".":
        cur.take(".")
    if not cur.at_end():
        raise ParseError(f"trailing input after query: {cur.peek()[1]!r}")
    own = Schema.of_atoms(body)
    if schema is not None:
        schema.check_atoms(body)
    return CQ(tuple(head), frozenset(body), name, schema if schema is not None else own)


def _value(tok: str) -> str:
    if tok[0] in "\"'":
        return tok[1:-1]
    return tok


def parse_facts(text: str, schema: Schema | None = None) -> frozenset:
    cur = _Cursor(tokenize(_strip_comments(text)))
    facts = []
    while not cur.at_end():
        rel = _relation(cur)
        args = _args(cur)
        if not args:
            raise ParseError(f"fact {rel}() has no arguments; nullary relations are not supported")
        facts.append(Atom(rel, tuple(_value(a) for a in args)))
        if cur.peek()[1] == ".":
            cur.take(".")
    Schema.of_atoms(facts)
    if schema is not None:
        schema.check_atoms(facts)
    return frozenset(facts)


parse_instance = parse_facts

_TUPLE_LINE = re.compile(r"^\s*tuple\s*:\s*(.*)$")


def _parse_tuple(spec: str) -> tuple:
    cur = _Cursor(tokenize(spec))
    if cur.peek()[1] != "(":
        raise ParseError(f"tuple must be parenthesized, got {spec.strip()!r}")
    vals = tuple(_value(a) for a in _args(cur))
    if not cur.at_end():
        raise ParseError(f"trailing input after tuple: {spec.strip()!r}")
    return vals


def parse_example(text: str, schema: Schema | None = None) -> DataExample:
    """A fact block followed by ``tuple: (...)``. Missing tuple line = Boolean."""
    lines = _strip_comments(text).splitlines()
    fact_lines, tup = [], None
    for line in lines:
        m = _TUPLE_LINE.match(line)
        if m:
            if tup is not None:
                raise ParseError("example has two tuple lines")
            tup = _parse_tuple(m.group(1))
        elif line.strip():
            if tup is not None:
                raise ParseError("facts after the tuple line")
            fact_lines.append(line)
    facts = parse_facts("\n".join(fact_lines), schema)
    tup = tup if tup is not None else ()
    adom = {v for f in facts for v in f.args}
    missing = [v for v in tup if v not in adom]
    if missing:
        raise ParseError(f"tuple value(s) {', '.join(missing)} occur in no fact")
    return DataExample(facts, tup)


def parse_schema(text: str) -> Schema:
    """``R/2, P/1`` (commas or whitespace or newlines as separators)."""
    rels = {}
    for part in re.split(r"[,\s]+", _strip_comments(text).strip()):
        if not part:
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)/(\d+)", part)
        if not m:
            raise ParseError(f"bad schema entry {part!r}; expected Name/arity")
        name, ar = m.group(1), int(m.group(2))
        if ar == 0:
            raise ParseError(f"relation {name} has arity 0; nullary relations are not supported")
        if rels.setdefault(name, ar) != ar:
            raise SchemaMismatch(f"relation {name} declared twice with different arities")
    return Schema(rels)


_SECTION = re.compile(r"^\s*([+-])\s*example\b.*$")
_SCHEMA_LINE = re.compile(r"^\s*schema\s*:(.*)$")


def parse_labeled(text: str, schema: Schema | None = None) -> LabeledExampleSet:
    pos, neg = [], []
    declared = None
    label, block = None, []

    def flush():
        if label is None:
            if any(l.strip() for l in block):
                raise ParseError("facts before the first +example/-example header")
            return
        e = parse_example("\n".join(block), schema)
        (pos if label == "+" else neg).append(e)

    for line in _strip_comments(text).splitlines():
        m = _SCHEMA_LINE.match(line)
        if m and label is None:
            declared = parse_schema(m.group(1))
            continue
        m = _SECTION.match(line)
        if m:
            flush()
            label, block = m.group(1), []
        else:
            block.append(line)
    flush()
    hint = declared
    if schema is not None:
        hint = schema if hint is None else hint.union(schema)
    E = LabeledExampleSet(tuple(pos), tuple(neg), hint)
    if hint is not None:
        for _, e in E.examples:
            hint.check_atoms(e.facts)
    return E


# ---------------------------------------------------------------- serialization

def _fmt_value(v: str) -> str:
    if re.fullmatch(r"[A-Za-z0-9_′'-]+", v) or (v.startswith("⟨") and v.endswith("⟩")):
        return v
    return json.dumps(v)


def serialize_atoms(atoms) -> str:
    return ", ".join(f"{a.relation}({','.join(_fmt_value(v) for v in a.args)})"
                     for a in sorted(atoms))


def serialize_cq(q: CQ) -> str:
    head = ",".join(q.head)
    return f"{q.name}({head}) :- {serialize_atoms(q.body)} ."


def serialize_example(e: DataExample) -> str:
    lines = [f"{a.relation}({','.join(_fmt_value(v) for v in a.args)})." for a in sorted(e.facts)]
    lines.append(f"tuple: ({', '.join(_fmt_value(v) for v in e.tuple)})")
    return "\n".join(lines)


def serialize_schema(s: Schema) -> str:
    return ", ".join(f"{r}/{a}" for r, a in s.items())


def serialize_labeled(E: LabeledExampleSet) -> str:
    parts = []
    if E.schema_hint is not None and len(E.schema_hint):
        parts.append(f"schema: {serialize_schema(E.schema_hint)}")
    for label, e in E.examples:
        parts.append(f"{label}example")
        parts.append(serialize_example(e))
    return "\n".join(parts) + "\n"


def serialize(obj) -> str:
    if isinstance(obj, CQ):
        return serialize_cq(obj)
    if isinstance(obj, DataExample):
        return serialize_example(obj)
    if isinstance(obj, LabeledExampleSet):
        return serialize_labeled(obj)
    if isinstance(obj, Schema):
        return serialize_schema(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ------------------------------------------------------------------------- JSON

def example_to_json(e: DataExample, label: str | None = None) -> dict:
    d = {"facts": [[f.relation, *f.args] for f in sorted(e.facts)], "tuple": list(e.tuple)}
    if label is not None:
        d = {"label": label, **d}
    return d


def to_json(E: LabeledExampleSet | None = None, q: CQ | None = None,
            schema: Schema | None = None) -> dict:
    out = {}
    if schema is None:
        from .model import common_schema
        schema = common_schema(q, E)
    out["schema"] = dict(schema.items())
    if q is not None:
        out["query"] = serialize_cq(q)
    if E is not None:
        out["examples"] = [example_to_json(e, label) for label, e in E.examples]
    return out


def _example_from_json(d: dict, schema: Schema | None) -> DataExample:
    try:
        facts = frozenset(Atom(str(f[0]), tuple(str(v) for v in f[1:])) for f in d["facts"])
        tup = tuple(str(v) for v in d.get("tuple", []))
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed example object: {exc}") from None
    if any(len(f.args) == 0 for f in facts):
        raise ParseError("nullary facts are not supported")
    Schema.of_atoms(facts)
    if schema is not None:
        schema.check_atoms(facts)
    adom = {v for f in facts for v in f.args}
    if any(v not in adom for v in tup):
        raise ParseError("tuple value occurs in no fact")
    return DataExample(facts, tup)


def from_json(data) -> tuple:
    """Return (schema, query or None, LabeledExampleSet)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("JSON document must be an object")
    schema = None
    if "schema" in data:
        try:
            schema = Schema({str(k): int(v) for k, v in data["schema"].items()})
        except (AttributeError, ValueError, TypeError) as exc:
            raise ParseError(f"malformed schema: {exc}") from None
        if any(a == 0 for a in schema.values()):
            raise ParseError("nullary relations are not supported")
    q = parse_cq(data["query"], schema) if data.get("query") else None
    pos, neg = [], []
    for d in data.get("examples", []):
        label = d.get("label") if isinstance(d, dict) else None
        if label not in ("+", "-"):
            raise ParseError(f"example label must be '+' or '-', got {label!r}")
        (pos if label == "+" else neg).append(_example_from_json(d, schema))
    return schema, q, LabeledExampleSet(tuple(pos), tuple(neg), schema)


# ---------------------------------------------------------------- distributions

_MU_LINE = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+))?\s*:\s*(\S.*?)\s*$")


def parse_mu(text: str, base: Path | None = None, schema: Schema | None = None) -> list:
    """Lines ``p/q : <example-file>``; returns [(DataExample, Fraction)]."""
    support = []
    for line in _strip_comments(text).splitlines():
        if not line.strip():
            continue
        m = _MU_LINE.match(line)
        if not m:
            raise ParseError(f"bad distribution line {line.strip()!r}")
        p = Fraction(int(m.group(1)), int(m.group(2) or 1)) if (m.group(2) or "1") != "0" else None
        if p is None:
            raise InvalidDistribution("zero denominator")
        path = Path(m.group(3))
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            text_e = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read example file {path}: {exc}") from None
        support.append((parse_example(text_e, schema), p))
    return support
