"""Core data types: schemas, atoms, queries, data examples."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import ArityMismatch, SafetyViolation, SchemaMismatch, UnknownRelation


class Atom(NamedTuple):
    """A relational atom R(args). Also used for facts, with values as args."""
    relation: str
    args: tuple

    def __str__(self):
        return f"{self.relation}({','.join(self.args)})"


def atom(relation: str, *args) -> Atom:
    return Atom(relation, tuple(args))


class Schema(Mapping):
    """Immutable mapping relation-name -> arity."""

    def __init__(self, relations=None, **kw):
        items = dict(relations or {})
        items.update(kw)
        for name, ar in items.items():
            if not isinstance(ar, int) or ar < 0:
                raise ValueError(f"bad arity for {name}: {ar!r}")
        self._rel = dict(sorted(items.items()))
        self._hash = hash(tuple(self._rel.items()))

    def __getitem__(self, name):
        return self._rel[name]

    def __iter__(self):
        return iter(self._rel)

    def __len__(self):
        return len(self._rel)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Schema):
            return self._rel == other._rel
        return NotImplemented

    def __repr__(self):
        return "Schema(" + ", ".join(f"{r}/{a}" for r, a in self._rel.items()) + ")"

    @property
    def max_arity(self) -> int:
        return max(self._rel.values(), default=0)

    def union(self, other: "Schema") -> "Schema":
        merged = dict(self._rel)
        for r, a in other.items():
            if r in merged and merged[r] != a:
                raise SchemaMismatch(f"relation {r} used with arities {merged[r]} and {a}")
            merged[r] = a
        return Schema(merged)

    def check_atoms(self, atoms: Iterable[Atom]):
        for a in atoms:
            if a.relation not in self._rel:
                raise UnknownRelation(f"relation {a.relation} not in schema")
            if len(a.args) != self._rel[a.relation]:
                raise ArityMismatch(
                    f"{a.relation} has arity {self._rel[a.relation]}, got {len(a.args)} arguments")

    @classmethod
    def of_atoms(cls, atoms: Iterable[Atom]) -> "Schema":
        out = {}
        for a in atoms:
            if out.setdefault(a.relation, len(a.args)) != len(a.args):
                raise SchemaMismatch(f"relation {a.relation} used with inconsistent arities")
        return cls(out)


@dataclass(frozen=True)
class DataExample:
    """A finite set of facts together with a distinguished tuple of values."""
    facts: frozenset
    tuple: tuple = ()

    def __post_init__(self):
        if not isinstance(self.facts, frozenset):
            object.__setattr__(self, "facts", frozenset(self.facts))
        if not isinstance(self.tuple, tuple):
            object.__setattr__(self, "tuple", tuple(self.tuple))

    @property
    def arity(self) -> int:
        return len(self.tuple)

    @cached_property
    def adom(self) -> frozenset:
        return frozenset(v for f in self.facts for v in f.args)

    @cached_property
    def values(self) -> frozenset:
        return self.adom | frozenset(self.tuple)

    @cached_property
    def schema(self) -> Schema:
        return Schema.of_atoms(self.facts)

    def __len__(self):
        return len(self.facts)

    def is_safe(self) -> bool:
        return all(v in self.adom for v in self.tuple)

    def rename(self, mapping) -> "DataExample":
        m = mapping.get
        return DataExample(
            frozenset(Atom(f.relation, tuple(m(v, v) for v in f.args)) for f in self.facts),
            tuple(m(v, v) for v in self.tuple))

    def __str__(self):
        facts = " ".join(f"{f}." for f in sorted(self.facts))
        return f"{{{facts}}} tuple: ({', '.join(self.tuple)})"


@dataclass(frozen=True)
class CQ:
    """A conjunctive query: head variable tuple plus a set of body atoms.

    Equality is syntactic (same variable names); use equivalence or
    isomorphism checks for semantic comparisons.
    """
    head: tuple
    body: frozenset
    name: str = field(default="q", compare=False)
    schema: Schema | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.body, frozenset):
            object.__setattr__(self, "body", frozenset(self.body))
        if not isinstance(self.head, tuple):
            object.__setattr__(self, "head", tuple(self.head))
        used = {v for a in self.body for v in a.args}
        missing = [v for v in self.head if v not in used]
        if missing:
            raise SafetyViolation(f"head variable(s) {', '.join(sorted(set(missing)))} occur in no atom")
        if self.schema is not None:
            self.schema.check_atoms(self.body)

    @property
    def arity(self) -> int:
        return len(self.head)

    def __len__(self):
        return len(self.body)

    @cached_property
    def variables(self) -> frozenset:
        return frozenset(v for a in self.body for v in a.args)

    @cached_property
    def existentials(self) -> frozenset:
        return self.variables - frozenset(self.head)

    @cached_property
    def example(self) -> DataExample:
        """The canonical example e_q."""
        return DataExample(self.body, self.head)

    @property
    def repetition_free(self) -> bool:
        return len(set(self.head)) == len(self.head)

    def relations(self) -> Schema:
        return Schema.of_atoms(self.body)

    def rename(self, mapping) -> "CQ":
        m = mapping.get
        return CQ(tuple(m(v, v) for v in self.head),
                  frozenset(Atom(a.relation, tuple(m(v, v) for v in a.args)) for a in self.body),
                  self.name, self.schema)

    def with_schema(self, schema: Schema | None) -> "CQ":
        return CQ(self.head, self.body, self.name, schema)

    def __str__(self):
        from .syntax import serialize_cq
        return serialize_cq(self)


@dataclass(frozen=True)
class LabeledExampleSet:
    positives: tuple = ()
    negatives: tuple = ()
    schema_hint: Schema | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "positives", tuple(self.positives))
        object.__setattr__(self, "negatives", tuple(self.negatives))
        ar = {e.arity for e in self.positives + self.negatives}
        if len(ar) > 1:
            raise ArityMismatch(f"examples of different arities: {sorted(ar)}")

    @property
    def arity(self):
        for e in self.positives + self.negatives:
            return e.arity
        return None

    @property
    def examples(self):
        return [("+", e) for e in self.positives] + [("-", e) for e in self.negatives]

    def schema(self) -> Schema:
        s = self.schema_hint or Schema()
        for e in self.positives + self.negatives:
            s = s.union(e.schema)
        return s

    def with_positive(self, e: DataExample) -> "LabeledExampleSet":
        return LabeledExampleSet(self.positives + (e,), self.negatives, self.schema_hint)

    def __len__(self):
        return len(self.positives) + len(self.negatives)


@dataclass(frozen=True)
class VarMapping:
    """A value-to-value mapping (a homomorphism or a renaming)."""
    entries: dict = field(default_factory=dict)

    def __getitem__(self, v):
        return self.entries[v]

    def get(self, v, default=None):
        return self.entries.get(v, default)

    def __contains__(self, v):
        return v in self.entries

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items(), key=repr)))

    def is_injective(self) -> bool:
        return len(set(self.entries.values())) == len(self.entries)


def common_schema(*parts) -> Schema:
    """Union of the relations used by queries, examples and example sets."""
    s = Schema()
    for p in parts:
        if p is None:
            continue
        if isinstance(p, Schema):
            s = s.union(p)
        elif isinstance(p, CQ):
            s = s.union(p.schema or p.relations())
        elif isinstance(p, DataExample):
            s = s.union(p.schema)
        elif isinstance(p, LabeledExampleSet):
            s = s.union(p.schema())
        else:
            raise TypeError(f"cannot take schema of {type(p).__name__}")
    return s
