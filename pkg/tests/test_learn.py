import random
from collections import Counter

import pytest

from eliq import (
    ABox,
    Ontology,
    SimulatedOracle,
    combined_signature,
    contained,
    default_budget,
    equivalent,
    learn,
    learn_with_normal_form,
    make_cq,
    minimize_cq,
    parse_cq,
    parse_ontology,
    query_satisfiable,
    seed_query,
    treeify,
)
from eliq.bruteforce import fixture
from eliq.errors import SeedRequiredError, UnsupportedDialectError
from eliq.gen import random_ontology, random_satisfiable_eliq
from eliq.learn import rewrite_abox
from eliq.normalform import FRESH_PREFIX


# ---------------------------------------------------------------------------
# Seeds
# ---------------------------------------------------------------------------


def test_loop_seed():
    o = parse_ontology("A sub some r\n")
    seed = seed_query(o)
    assert seed.concept_atoms == frozenset({("A", "x0")})
    assert seed.role_atoms == frozenset({("r", "x0", "x0")})


def test_clique_seed_for_role_disjointness():
    o = parse_ontology("rdisj r s\nA sub B\n")
    seed = seed_query(o)
    assert len(seed.variables()) == 5  # two usable roles -> 2m+1 vertices
    outdeg = Counter()
    indeg = Counter()
    pairs = set()
    for r, x, y in seed.role_atoms:
        outdeg[(r, x)] += 1
        indeg[(r, y)] += 1
        pair = frozenset((x, y))
        assert pair not in pairs  # edge-disjoint cycles: no multi-edges
        pairs.add(pair)
    assert set(outdeg.values()) == {1} and set(indeg.values()) == {1}
    for v in seed.variables():
        assert seed.concepts_at(v) == {"A", "B"}
    assert query_satisfiable(o, seed)


def test_seed_contained_in_every_satisfiable_target():
    o = parse_ontology("rdisj r s\n")
    seed = seed_query(o, (frozenset({"A"}), frozenset({"r", "s"})))
    rng = random.Random(83)
    for _ in range(50):
        target = random_satisfiable_eliq(rng, o, ["A"], ["r", "s"], 4)
        assert contained(o, seed, target)


def test_concept_disjointness_requires_explicit_seed():
    with pytest.raises(SeedRequiredError):
        seed_query(parse_ontology("disj A B\n"))


# ---------------------------------------------------------------------------
# minimize / treeify
# ---------------------------------------------------------------------------


def test_minimize_removes_redundant_edge():
    target = parse_cq("q(x0) :- A(x0)")
    oracle = SimulatedOracle(Ontology(), target)
    q = parse_cq("q(x0) :- A(x0), r(x0,y)")
    assert minimize_cq(Ontology(), oracle, q) == parse_cq("q(x0) :- A(x0)")
    assert oracle.query_count == 1


def test_minimize_keeps_needed_loop():
    target = parse_cq("q(x0) :- r(x0,y), A(y)")
    oracle = SimulatedOracle(Ontology(), target)
    seed = parse_cq("q(x0) :- A(x0), r(x0,x0)")
    assert minimize_cq(Ontology(), oracle, seed) == seed


def test_minimize_idempotent():
    rng = random.Random(91)
    for _ in range(25):
        o = random_ontology(rng, ["A", "B"], ["r"], rng.randint(1, 3), dialect="r")
        target = random_satisfiable_eliq(rng, o, ["A", "B"], ["r"], 3)
        oracle = SimulatedOracle(o, target)
        seed = seed_query(o, combined_signature(o, target))
        once = minimize_cq(o, oracle, seed)
        before = oracle.query_count
        again = minimize_cq(o, oracle, once)
        assert again == once
        # the second pass only re-probes rejected removals
        assert oracle.query_count - before == len(once.role_atoms)


def test_treeify_unrolls_loop():
    target = parse_cq("q(x0) :- A(x0), r(x0,y)")
    oracle = SimulatedOracle(Ontology(), target)
    out = treeify(Ontology(), oracle, parse_cq("q(x0) :- A(x0), r(x0,x0)"))
    assert out.is_eliq()
    assert len(out.variables()) == 2
    assert contained(Ontology(), out, target)


def test_treeify_returns_acyclic_input_after_minimize():
    target = parse_cq("q(x0) :- A(x0), r(x0,y)")
    oracle = SimulatedOracle(Ontology(), target)
    q = parse_cq("q(x0) :- A(x0), r(x0,y)")
    assert treeify(Ontology(), oracle, q) == q


def test_treeify_always_produces_trees():
    rng = random.Random(97)
    for _ in range(50):
        o = random_ontology(rng, ["A", "B"], ["r", "s"], rng.randint(1, 3),
                            dialect=rng.choice(["r", "f"]), normal_form=True)
        target = random_satisfiable_eliq(rng, o, ["A", "B"], ["r", "s"], 4)
        oracle = SimulatedOracle(o, target)
        seed = seed_query(o, combined_signature(o, target))
        out = treeify(o, oracle, seed)
        assert out.is_eliq()
        assert contained(o, out, target)


# ---------------------------------------------------------------------------
# The learning loop
# ---------------------------------------------------------------------------


def test_learn_example(ex1_ontology):
    target = parse_cq("q(x0) :- A(x0), B(x0)")
    oracle = SimulatedOracle(ex1_ontology, target)
    seed = seed_query(ex1_ontology, combined_signature(ex1_ontology, target))
    trace = learn(ex1_ontology, oracle, seed, default_budget(2, ex1_ontology))
    assert trace.outcome == "success"
    assert equivalent(ex1_ontology, trace.final, target)
    assert trace.membership_queries <= 30


def test_learn_seed_equivalent_target_is_immediate():
    o = parse_ontology("A sub B\n")
    target = parse_cq("q(x0) :- A(x0), B(x0), r(x0,y), A(y), B(y)")
    # the treeified seed is already equivalent: no frontier member is accepted
    oracle = SimulatedOracle(o, target)
    seed = seed_query(o, combined_signature(o, target))
    trace = learn(o, oracle, seed, default_budget(2, o))
    assert trace.outcome == "success"
    assert len(trace.hypotheses) >= 1
    assert equivalent(o, trace.final, target)


def test_learn_trace_progress_invariants(ex1_ontology):
    target = parse_cq("q(x0) :- A(x0), B(x0), r(x0,y), B(y)")
    oracle = SimulatedOracle(ex1_ontology, target)
    seed = seed_query(ex1_ontology, combined_signature(ex1_ontology, target))
    budget = default_budget(len(target.variables()), ex1_ontology)
    trace = learn(ex1_ontology, oracle, seed, budget)
    assert trace.outcome == "success"
    assert trace.membership_queries <= budget
    n_target = len(target.variables())
    for h in trace.hypotheses:
        assert contained(ex1_ontology, h, target)
        assert len(h.variables()) <= n_target
    for a, b in zip(trace.hypotheses, trace.hypotheses[1:]):
        assert contained(ex1_ontology, a, b)
        assert not contained(ex1_ontology, b, a)
        assert len(a.variables()) <= len(b.variables())


def test_learn_rejects_unrestricted_functionality(thm4_ontology):
    oracle = SimulatedOracle(thm4_ontology, parse_cq("q(x) :- A(x)"))
    with pytest.raises(UnsupportedDialectError) as err:
        learn(thm4_ontology, oracle, parse_cq("q(x) :- A(x)"), 100)
    assert err.value.reason == "not_f_restricted"


def test_learn_rejects_thm10_fixture_at_the_gate():
    o, q = fixture("thm10_hypotheses", 2)
    oracle = SimulatedOracle(o, q)
    with pytest.raises(UnsupportedDialectError):
        learn(o, oracle, q, 100)


def test_thm9_regime_has_no_auto_seed():
    o, _ = fixture("thm9_disjointness", 1)
    with pytest.raises(SeedRequiredError):
        seed_query(o)


def test_budget_exceeded_is_an_outcome():
    o = parse_ontology("A sub some r\n")
    target = parse_cq("q(x0) :- A(x0), r(x0,y), r(y,z), A(z)")
    oracle = SimulatedOracle(o, target)
    seed = seed_query(o, combined_signature(o, target))
    trace = learn(o, oracle, seed, budget=2)
    assert trace.outcome == "budget_exceeded"
    assert trace.membership_queries <= 2


def test_learn_batch_random():
    rng = random.Random(103)
    for i in range(20):
        dialect = "r" if i % 2 == 0 else "f"
        o = random_ontology(rng, ["A", "B"], ["r", "s"], rng.randint(1, 4),
                            dialect=dialect, normal_form=True)
        target = random_satisfiable_eliq(rng, o, ["A", "B"], ["r", "s"], 5)
        oracle = SimulatedOracle(o, target)
        seed = seed_query(o, combined_signature(o, target))
        budget = default_budget(len(target.variables()), o)
        trace = learn(o, oracle, seed, budget)
        assert trace.outcome == "success"
        assert equivalent(o, trace.final, target)
        assert trace.membership_queries <= budget


# ---------------------------------------------------------------------------
# Reduction to normal form
# ---------------------------------------------------------------------------


def test_rewrite_abox_plain():
    o = parse_ontology("A sub some r . (B & some s)\n")
    from eliq.normalform import normalize

    on, fmap = normalize(o)
    xname = next(n for n, c in fmap.items() if c.kind == "and")
    abox = ABox(frozenset({(xname, "b"), ("A", "b")}), frozenset())
    rewritten = rewrite_abox(abox, fmap, frozenset())
    assert all(not c.startswith(FRESH_PREFIX) for c, _ in rewritten.concept_assertions)
    assert ("A", "b") in rewritten.concept_assertions
    assert ("B", "b") in rewritten.concept_assertions
    assert any(r == "s" and x == "b" for r, x, _ in rewritten.role_assertions)


def test_rewrite_abox_respects_functionality():
    from eliq.syntax import Role, atom, exists

    fmap = {"_X1": exists(Role("r"), atom("B"))}
    abox = ABox(frozenset({("_X1", "b")}), frozenset({("r", "b", "c")}))
    rewritten = rewrite_abox(abox, fmap, frozenset({("r", False)}))
    # the existing r-successor is reused instead of adding a second one
    assert ("B", "c") in rewritten.concept_assertions
    assert sum(1 for r, x, _ in rewritten.role_assertions if r == "r" and x == "b") == 1


def test_normal_form_reduction_end_to_end():
    o = parse_ontology("A sub some r . (B & some s)\n")
    target = parse_cq("q(x0) :- r(x0,y), B(y)")

    class Instrumented(SimulatedOracle):
        def answer(self, abox, ind):
            assert all(
                not c.startswith(FRESH_PREFIX) for c, _ in abox.concept_assertions
            ), "surrogate names leaked to the oracle"
            return super().answer(abox, ind)

    oracle = Instrumented(o, target)
    seed = seed_query(o, combined_signature(o, target))
    trace = learn_with_normal_form(o, oracle, seed, default_budget(2, o))
    assert trace.outcome == "success"
    assert equivalent(o, trace.final, target)


def test_normal_form_reduction_forwards_functional_aboxes():
    o = parse_ontology("A sub some r . (B & some s)\nfunc r\n")
    target = parse_cq("q(x0) :- A(x0), r(x0,y)")

    forwarded = []

    class Recording(SimulatedOracle):
        def answer(self, abox, ind):
            forwarded.append(abox)
            return super().answer(abox, ind)

    oracle = Recording(o, target)
    seed = seed_query(o, combined_signature(o, target))
    trace = learn_with_normal_form(o, oracle, seed, default_budget(2, o))
    assert trace.outcome == "success"
    assert equivalent(o, trace.final, target)
    for abox in forwarded:
        assert all(not c.startswith(FRESH_PREFIX) for c, _ in abox.concept_assertions)
        succ = Counter()
        for r, x, _ in abox.role_assertions:
            if r == "r":
                succ[x] += 1
        assert all(v == 1 for v in succ.values())


def test_normal_form_reduction_matches_prenormalized_learning():
    rng = random.Random(113)
    from eliq.normalform import normalize

    for i in range(10):
        dialect = "r" if i % 2 == 0 else "f"
        o = random_ontology(rng, ["A", "B"], ["r", "s"], rng.randint(1, 3), dialect=dialect)
        from eliq.syntax import Dialect, dialect_of

        if dialect_of(o) not in (Dialect.CORE, Dialect.R, Dialect.F_RESTRICTED):
            continue
        target = random_satisfiable_eliq(rng, o, ["A", "B"], ["r", "s"], 4)
        seed = seed_query(o, combined_signature(o, target))
        budget = default_budget(len(target.variables()), o)

        trace_nf = learn_with_normal_form(o, SimulatedOracle(o, target), seed, budget)
        on, _ = normalize(o)
        trace_pre = learn(on, SimulatedOracle(on, target), seed, budget)
        assert trace_nf.outcome == trace_pre.outcome == "success"
        assert equivalent(o, trace_nf.final, target)
        assert equivalent(on, trace_pre.final, target)
