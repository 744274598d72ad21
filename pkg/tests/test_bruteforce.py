import pytest

from eliq import (
    bruteforce_frontier_check,
    bruteforce_min_frontier_aq,
    contained,
    frontier_r,
    parse_cq,
    serialize_cq,
)
from eliq.bruteforce import ConjunctiveOntology, fixture, thm10_qstar
from eliq.errors import EliqError


def test_example_frontier_passes(ex1_ontology, ex1_query):
    frontier = frontier_r(ex1_ontology, ex1_query)
    result = bruteforce_frontier_check(ex1_ontology, ex1_query, frontier, 4)
    assert result.ok
    assert result.candidates_checked > 100


def test_missing_member_is_caught(ex1_ontology, ex1_query, ex1_golden_members):
    # without the drop-A member, the generalization B(x0) is uncovered
    p2 = ex1_golden_members[1]
    result = bruteforce_frontier_check(ex1_ontology, ex1_query, [p2], 2)
    assert not result.ok
    assert serialize_cq(result.counterexample) == "q(x0) :- B(x0)"


def test_query_itself_is_not_a_frontier():
    from eliq import Ontology

    q = parse_cq("q(x0) :- A(x0)")
    result = bruteforce_frontier_check(Ontology(), q, [q], 1)
    assert not result.ok
    assert result.counterexample == q
    assert "Condition 2" in result.reason


# ---------------------------------------------------------------------------
# Conjunctions of atomic queries
# ---------------------------------------------------------------------------


def test_conjunctive_saturation():
    o, q = fixture("thm3_conjunctive", 2)
    assert isinstance(o, ConjunctiveOntology)
    assert o.saturate(frozenset({"A1", "A1p"})) == frozenset({"A1", "A1p", "A2", "A2p"})
    assert o.saturate(frozenset({"A1"})) == frozenset({"A1"})


def test_minimum_frontier_sizes_are_exponential():
    for n, expected in ((2, 4), (3, 8)):
        o, q = fixture("thm3_conjunctive", n)
        sig = frozenset(a for a, _ in q.concept_atoms)
        assert bruteforce_min_frontier_aq(o, sig, sig) == expected


def test_minimum_frontier_trivial_case():
    o = ConjunctiveOntology(())
    assert bruteforce_min_frontier_aq(o, frozenset({"A"}), frozenset({"A"})) == 1


# ---------------------------------------------------------------------------
# Fixture families
# ---------------------------------------------------------------------------


def test_unknown_fixture_rejected():
    with pytest.raises(EliqError):
        fixture("unknown_family", 1)


def test_detour_fixture_shape():
    o, q2 = fixture("thm4_dllitef", 2)
    assert q2.answer_var == "x1"
    assert ("A", "xp1") in q2.concept_atoms
    assert ("s", "x2", "y") in q2.role_atoms and ("s", "xp2", "y") in q2.role_atoms
    assert q2.is_eliq()


def test_detour_fixture_containment_sanity(thm4_ontology):
    base = parse_cq("q(x) :- A(x)")
    for i in (1, 2, 3):
        _, qi = fixture("thm4_dllitef", i)
        assert contained(thm4_ontology, base, qi)
        assert not contained(thm4_ontology, qi, base)


def test_disjointness_fixture():
    o, q = fixture("thm9_disjointness", 1)
    assert len(o.concept_disjointness) == 1
    assert q.concept_atoms == frozenset({("A1", "x0")})


def test_hypothesis_family_sanity():
    o, _ = fixture("thm10_hypotheses", 2)
    qstar = thm10_qstar()
    for n in (2, 3, 5):
        _, qn = fixture("thm10_hypotheses", n)
        assert qn.is_eliq()
        assert contained(o, qstar, qn)


def test_hypothesis_family_requires_prime_index():
    with pytest.raises(ValueError):
        fixture("thm10_hypotheses", 4)
