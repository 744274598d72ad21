import random

import pytest

from eliq import (
    Ontology,
    bruteforce_frontier_check,
    contained,
    equivalent,
    frontier_r,
    generalize_r,
    minimal_core,
    minimize_eliq,
    parse_cq,
    parse_ontology,
    prune_equivalents,
    saturate,
)
from eliq.errors import UnsatisfiableError, UnsupportedDialectError
from eliq.frontier_base import size_ceiling_ok
from eliq.gen import random_ontology, random_satisfiable_eliq


def test_example_one_golden(ex1_ontology, ex1_query, ex1_golden_members):
    frontier = frontier_r(ex1_ontology, ex1_query)
    assert len(frontier.members) == 2
    for golden in ex1_golden_members:
        assert sum(1 for m in frontier.members if equivalent(ex1_ontology, m, golden)) == 1


def test_example_two_golden(ex2_ontology, ex2_query, ex2_golden_member):
    frontier = frontier_r(ex2_ontology, ex2_query)
    core = minimal_core(ex2_ontology, list(frontier.members))
    assert len(core) == 1
    assert equivalent(ex2_ontology, core[0], ex2_golden_member)


def test_empty_ontology_atom_query():
    frontier = frontier_r(Ontology(), parse_cq("q(x0) :- A(x0)"))
    assert [m.concept_atoms | m.role_atoms for m in frontier.members] == [frozenset()]


def test_generalize_drop_cases(ex1_ontology, ex1_query):
    q = minimize_eliq(ex1_ontology, ex1_query)
    cands = generalize_r(ex1_ontology, q, "x0")
    assert sorted(c.provenance for c in cands) == ["drop:A@x0", "drop:B@x0"]
    dropped = {c.provenance: c.query.concepts_at("x0") for c in cands}
    assert dropped["drop:A@x0"] == {"B"}
    assert dropped["drop:B@x0"] == {"A"}


def test_generalize_blocked_by_incident_role():
    # a leaf whose only atom is implied by the incoming role cannot drop it
    o = parse_ontology("some r- sub A\n")
    q = saturate(o, parse_cq("q(x0) :- r(x0,y), A(y)"))
    assert generalize_r(o, q, "y") == []


def test_generalize_subquery_case(ex2_ontology, ex2_query):
    q = minimize_eliq(ex2_ontology, ex2_query)
    f0_y = generalize_r(ex2_ontology, q, "y")
    assert len(f0_y) == 1 and f0_y[0].query.concept_atoms == frozenset()
    f0_root = generalize_r(ex2_ontology, q, "x0")
    assert len(f0_root) == 1
    (cand,) = f0_root
    # a bare r-child (the generalized subquery) plus an s-copy keeping A
    children = {}
    for rname, x, y in cand.query.role_atoms:
        children.setdefault(rname, []).append(cand.query.concepts_at(y))
    assert children["r"] == [frozenset()]
    assert children["s"] == [frozenset({"A"})]


def test_wrong_dialect_rejected(ex3_ontology):
    with pytest.raises(UnsupportedDialectError):
        frontier_r(ex3_ontology, parse_cq("q(x) :- A(x)"))


def test_unsatisfiable_query_rejected():
    o = parse_ontology("disj A B\n")
    with pytest.raises(UnsatisfiableError):
        frontier_r(o, parse_cq("q(x) :- A(x), B(x)"))


def test_conditions_and_completeness_random():
    rng = random.Random(127)
    for _ in range(25):
        o = random_ontology(rng, ["A", "B"], ["r", "s"], rng.randint(1, 4), dialect="r")
        q = random_satisfiable_eliq(rng, o, ["A", "B"], ["r", "s"], 3)
        frontier = frontier_r(o, q)  # Conditions 1-2 are machine-checked inside
        for member in frontier.members:
            assert contained(o, q, member)
            assert not contained(o, member, q)
        assert bruteforce_frontier_check(o, q, frontier, 4).ok
        assert size_ceiling_ok(q, o, list(frontier.members))


def test_minimal_core_unique_up_to_equivalence(ex1_ontology, ex1_query):
    a = frontier_r(ex1_ontology, ex1_query)
    b = frontier_r(ex1_ontology, ex1_query, _tie_reverse=True)
    core_a = minimal_core(ex1_ontology, list(a.members))
    core_b = minimal_core(ex1_ontology, list(b.members))
    assert len(core_a) == len(core_b)
    for m in core_a:
        assert any(equivalent(ex1_ontology, m, n) for n in core_b)


def test_prune_drops_equivalent_members(ex1_ontology, ex1_query):
    frontier = frontier_r(ex1_ontology, ex1_query, prune=True)
    pruned = prune_equivalents(ex1_ontology, list(frontier.members))
    assert len(pruned) == len(frontier.members)
