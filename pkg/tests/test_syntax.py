import random

import pytest

from eliq import (
    CQ,
    Dialect,
    Ontology,
    Role,
    concept_to_eliq,
    dialect_of,
    eliq_to_concept,
    make_cq,
    parse_cq,
    parse_ontology,
)
from eliq.errors import NotAnEliqError
from eliq.syntax import atom, conj, exists


def test_role_double_inversion():
    r = Role("r")
    assert r.inverse().inverse() == r
    assert str(Role("r", True)) == "r-"


def test_conj_is_flattened_and_sorted():
    a, b, c = atom("A"), atom("B"), atom("C")
    left = conj([a, conj([b, c])])
    right = conj([conj([c, a]), b])
    assert left == right
    assert conj([a]) == a
    assert conj([]) == conj([]).parts == () or conj([]).kind == "top"


def test_inverse_atoms_normalized():
    q = make_cq("x0", [], [(Role("r", True), "x0", "y")])
    assert ("r", "y", "x0") in q.role_atoms


def test_is_eliq_rejects_loops_multiedges_cycles():
    assert not make_cq("x", [], [("r", "x", "x")]).is_eliq()
    assert not make_cq("x", [], [("r", "x", "y"), ("s", "x", "y")]).is_eliq()
    assert not make_cq(
        "x", [], [("r", "x", "y"), ("r", "y", "z"), ("r", "z", "x")]
    ).is_eliq()
    assert make_cq("x", [("A", "x")], []).is_eliq()
    assert make_cq("x", [], [("r", "x", "y"), ("r", "z", "y")]).is_eliq()


def test_concept_query_correspondence_worked_example():
    # A & some r- . (some s . B & some r . A) as a 4-variable query
    c = conj(
        [
            atom("A"),
            exists(
                Role("r", True),
                conj([exists(Role("s"), atom("B")), exists(Role("r"), atom("A"))]),
            ),
        ]
    )
    q = concept_to_eliq(c)
    assert len(q.variables()) == 4
    assert q.concepts_at(q.answer_var) == {"A"}
    # one incoming r at the answer variable
    assert sum(1 for _, _, y in q.role_atoms if y == q.answer_var) == 1
    assert eliq_to_concept(q) == c


def test_top_concept_round_trip():
    q = concept_to_eliq(conj([]))
    assert q.concept_atoms == frozenset()
    assert q.variables() == {"x0"}
    assert eliq_to_concept(q).kind == "top"


def test_eliq_to_concept_rejects_cycles():
    q = make_cq("x", [], [("r", "x", "y"), ("s", "y", "x")])
    with pytest.raises(NotAnEliqError):
        eliq_to_concept(q)


def test_concept_round_trip_random():
    # conjunction has set semantics, so identical twin subtrees collapse on
    # the first pass; after that the round trip is the identity (up to the
    # canonical variable naming)
    rng = random.Random(42)
    from eliq.gen import random_eliq
    from eliq.reasoner import equivalent

    for i in range(1000):
        q = random_eliq(rng, ["A", "B", "C"], ["r", "s"], 8)
        c = eliq_to_concept(q)
        back = concept_to_eliq(c)
        assert eliq_to_concept(back) == c
        assert concept_to_eliq(eliq_to_concept(back)) == back
        if i % 50 == 0:
            assert equivalent(Ontology(), q, back)


def test_to_abox_round_trip(ex1_query):
    a = ex1_query.to_abox()
    assert a.to_cq("x0") == ex1_query


class TestDialect:
    def test_thm4_is_unrestricted_f(self, thm4_ontology):
        assert dialect_of(thm4_ontology) is Dialect.F

    def test_func_only_is_restricted(self, ex3_ontology):
        assert dialect_of(ex3_ontology) is Dialect.F_RESTRICTED

    def test_both_kinds_is_rf(self):
        o = parse_ontology("r rsub s\nfunc r\n")
        assert dialect_of(o) is Dialect.RF

    def test_core_and_r(self, ex1_ontology):
        assert dialect_of(Ontology()) is Dialect.CORE
        assert dialect_of(ex1_ontology) is Dialect.R

    def test_adding_functionality_is_monotone(self):
        rng = random.Random(3)
        from eliq.gen import random_ontology

        for _ in range(50):
            o = random_ontology(rng, ["A", "B"], ["r", "s"], rng.randint(1, 5), dialect="r")
            extended = Ontology(
                o.concept_inclusions,
                o.role_inclusions,
                o.concept_disjointness,
                o.role_disjointness,
                o.functional | {Role("r")},
            )
            before, after = dialect_of(o), dialect_of(extended)
            if before in (Dialect.R, Dialect.RF):
                assert after is Dialect.RF
            else:
                assert after in (Dialect.F, Dialect.F_RESTRICTED)
