import json
import random

from eliq import Ontology, normalize, parse_abox, parse_ontology, universal_prefix
from eliq.engine import context_for, rkey
from eliq.gen import random_abox, random_ontology
from eliq.reasoner import abox_satisfiable

import pytest

from eliq.errors import UnsatisfiableError, UnsupportedDialectError


def test_empty_ontology_prefix_is_the_abox():
    a = parse_abox("A(a)\nr(a,b)\n")
    p = universal_prefix(Ontology(), a, 5)
    assert p.trace_nodes == ()
    assert ("A", "a") in p.base.concept_assertions
    assert ("r", "a", "b") in p.base.role_assertions


def test_prefix_requires_normal_form(thm4_ontology):
    with pytest.raises(ValueError):
        universal_prefix(thm4_ontology, parse_abox("A(a)\n"), 2)


def test_prefix_rejects_combined_dialect():
    o = parse_ontology("r rsub s\nfunc s\n")
    with pytest.raises(UnsupportedDialectError):
        universal_prefix(o, parse_abox("A(a)\n"), 1)


def test_prefix_rejects_unsatisfiable_abox():
    o = parse_ontology("disj A B\n")
    with pytest.raises(UnsatisfiableError):
        universal_prefix(o, parse_abox("A(a)\nB(a)\n"), 1)


def test_detour_ontology_builds_an_r_chain(thm4_ontology):
    on, _ = normalize(thm4_ontology)
    p = universal_prefix(on, parse_abox("A(a)\n"), 3)
    by_depth = {}
    for t in p.trace_nodes:
        by_depth.setdefault(len(t.steps), []).append(t)
    # at every depth there is exactly one r-extension and one s-leaf
    for depth in (1, 2, 3):
        roles = sorted(str(t.steps[-1][0]) for t in by_depth[depth])
        assert roles == ["r", "s"]
    # the r-chain nodes all carry an s-successor at the next depth
    labels = p.labels_of()
    for t in p.trace_nodes:
        if str(t.steps[-1][0]) == "s":
            assert labels[str(t)] == frozenset()


def test_example_prefix_closes_edges_under_role_inclusions(ex1_ontology):
    p = universal_prefix(ex1_ontology, parse_abox("A(a)\nB(a)\n"), 2)
    assert len(p.trace_nodes) == 1
    (t,) = p.trace_nodes
    role, label = t.steps[0]
    assert str(role) == "r" and label == frozenset()
    # the r-edge to the witness also appears as an s-edge
    assert ("r", "a", str(t)) in p.edges
    assert ("s", "a", str(t)) in p.edges


def test_prefix_json_is_stable(ex1_ontology):
    a = parse_abox("A(a)\nB(a)\n")
    one = universal_prefix(ex1_ontology, a, 2).to_json()
    two = universal_prefix(ex1_ontology, a, 2).to_json()
    assert one == two
    payload = json.loads(one)
    assert {n["id"] for n in payload["nodes"]} >= {"a"}


def _edges_of(prefix):
    out = {}
    for r, x, y in prefix.edges:
        out.setdefault((x, r), set()).add(y)
    return out


def test_prefix_soundness_invariant():
    """Inner prefix nodes satisfy every concept inclusion, and functional
    roles are partial functions on the whole prefix."""
    rng = random.Random(101)
    from eliq.syntax import concept_to_eliq
    from eliq.reasoner import certain_answer
    from eliq.syntax import ABox

    for _ in range(25):
        dialect = rng.choice(["r", "f"])
        o = random_ontology(rng, ["A", "B"], ["r", "s"], rng.randint(1, 4), dialect=dialect, normal_form=True)
        a = random_abox(rng, ["A", "B"], ["r", "s"], 2, rng.randint(1, 4))
        if not abox_satisfiable(o, a):
            continue
        depth = 3
        p = universal_prefix(o, a, depth)
        labels = p.labels_of()
        prefix_abox = ABox(
            frozenset((c, n) for n, ls in labels.items() for c in ls),
            frozenset(p.edges),
        )
        # functionality on the whole prefix
        succ = {}
        for r, x, y in p.edges:
            succ.setdefault((x, r, False), set()).add(y)
            succ.setdefault((y, r, True), set()).add(x)
        for fr in o.functional:
            for (x, rname, inv), targets in succ.items():
                if rname == fr.name and inv == fr.inverted:
                    assert len(targets) <= 1
        # concept inclusions hold at nodes of distance < depth
        inner = {n for n in labels if n in a.ind()} | {
            str(t) for t in p.trace_nodes if len(t.steps) < depth
        }
        for lhs, rhs in o.concept_inclusions:
            holds_lhs = _basic_holds_in(prefix_abox, lhs)
            q_rhs = concept_to_eliq(rhs)
            for node in inner:
                if node in holds_lhs:
                    assert certain_answer(Ontology(), prefix_abox, q_rhs, node), (
                        f"{lhs} sub {rhs} fails at {node}"
                    )


def _basic_holds_in(abox, b):
    if b.kind == "top":
        return set(abox.ind())
    if b.kind == "name":
        return {i for c, i in abox.concept_assertions if c == b.name}
    role = b.role
    if role.inverted:
        return {y for _, x, y in abox.role_assertions if _ == role.name}
    return {x for r, x, y in abox.role_assertions if r == role.name}
