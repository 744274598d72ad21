"""Hypothesis property tests for the pure syntax layer."""

from hypothesis import given, settings, strategies as st

from eliq import Role, parse_cq, parse_ontology, serialize_cq, serialize_ontology
from eliq.syntax import CONCEPT_TOP, ELIConcept, Ontology, atom, conj, exists

names = st.sampled_from(["A", "B", "C"])
roles = st.builds(Role, st.sampled_from(["r", "s"]), st.booleans())


def concepts(depth=3):
    base = st.one_of(st.just(CONCEPT_TOP), st.builds(atom, names))
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.builds(exists, roles, sub),
            st.builds(lambda a, b: conj([a, b]), sub, sub),
        ),
        max_leaves=8,
    )


@given(concepts(), concepts(), concepts())
def test_conjunction_is_associative_commutative_idempotent(a, b, c):
    assert conj([a, b]) == conj([b, a])
    assert conj([conj([a, b]), c]) == conj([a, conj([b, c])])
    assert conj([a, a]) == conj([a])


@given(concepts())
def test_concept_serialization_round_trips(c):
    text = f"top sub {c}"
    parsed = parse_ontology(text)
    assert parsed.concept_inclusions[0][1] == c


@given(st.lists(st.tuples(st.sampled_from(["sub", "rsub"]), names, names), max_size=6))
def test_ontology_round_trip(statements):
    lines = []
    for kind, a, b in statements:
        if kind == "sub":
            lines.append(f"{a} sub {b}")
        else:
            lines.append(f"{a.lower()}r rsub {b.lower()}r")
    o = parse_ontology("\n".join(lines))
    assert parse_ontology(serialize_ontology(o)) == o


@given(concepts())
@settings(max_examples=60)
def test_concept_query_views_commute(c):
    from eliq.syntax import concept_to_eliq, eliq_to_concept

    q = concept_to_eliq(c)
    assert q.is_eliq()
    assert parse_cq(serialize_cq(q)) == q
    # the two views are mutually inverse on normalized concepts
    assert concept_to_eliq(eliq_to_concept(q)) == q
