import pytest

from cqrepair import (ArityMismatch, DataExample, LabeledExampleSet, SafetyViolation, Schema,
                      SchemaMismatch, atom, canonical_cq, canonical_example, parse_cq)
from cqrepair.model import common_schema


def test_canonical_example_of_cycle():
    q = parse_cq("q(x) :- R(x,y), R(y,z), R(z,u), R(u,x) .")
    e = canonical_example(q)
    assert e.tuple == ("x",)
    assert len(e.facts) == 4
    assert e.adom == {"x", "y", "z", "u"}


def test_canonical_cq_examples():
    q = canonical_cq(DataExample(frozenset({atom("P", "a")}), ("a",)))
    assert str(q) == "q(x) :- P(x) ."
    b = canonical_cq(DataExample(frozenset({atom("R", "b", "b")}), ()))
    assert len(b) == 1 and b.head == ()
    with pytest.raises(SafetyViolation):
        canonical_cq(DataExample(frozenset({atom("P", "a"), atom("Q", "b")}), ("b", "c")))


def test_canonical_round_trip_is_isomorphic():
    from cqrepair import isomorphic
    q = parse_cq("q(x,y) :- R(x,z), R(z,y), P(z) .")
    assert isomorphic(canonical_cq(canonical_example(q)), q)


def test_schema_union_conflict():
    with pytest.raises(SchemaMismatch):
        Schema(R=2).union(Schema(R=3))
    assert common_schema(parse_cq("q(x) :- R(x,y) ."), Schema(P=1)) == Schema(R=2, P=1)


def test_labeled_set_arity():
    e1 = DataExample(frozenset({atom("R", "a", "b")}), ("a",))
    assert LabeledExampleSet([e1], []).arity == 1
    assert LabeledExampleSet().arity is None
    with pytest.raises(ArityMismatch):
        LabeledExampleSet([e1], [DataExample(frozenset({atom("R", "a", "b")}), ())])


def test_repetition_free_flag():
    assert parse_cq("q(x,y) :- R(x,y) .").repetition_free
    assert not parse_cq("q(x,x) :- R(x,y) .").repetition_free
