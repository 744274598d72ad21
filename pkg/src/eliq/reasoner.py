"""The semantic kernel: entailment, satisfiability, saturation, certain
answers, containment, and minimization.

Everything here is a pure function of immutable inputs.  Ontologies are
normalized internally (conservatively, so consequences over the original
signature are unchanged); the combined dialect with both role inclusions and
functionality is rejected wherever universal models are involved, since they
are unsound there.
"""

from __future__ import annotations

from typing import Iterator

from .engine import basic_key, context_for, engine_for, rkey
from .errors import UnsatisfiableError, UnsupportedDialectError
from .model import (
    UniversalModelPrefix,
    build_prefix,
    matches,
    tree_ids_upto,
    tree_to_cq,
)
from .normalform import is_normal_form
from .syntax import (
    ABox,
    BasicConcept,
    CQ,
    Dialect,
    Ontology,
    Role,
    dialect_of,
    restrict,
    subtree_vars,
    tree_order,
)


def _require_chaseable(o: Ontology, op: str) -> None:
    if dialect_of(o) is Dialect.RF:
        raise UnsupportedDialectError(
            "unsupported_dialect",
            f"{op} is unsupported for ontologies combining role inclusions "
            "and functionality (universal models are unsound there)",
        )


def entails_basic(o: Ontology, b1: BasicConcept, b2: BasicConcept) -> bool:
    """Does every model of ``o`` satisfy ``b1 sub b2``?"""
    if b2.kind == "top":
        return True
    abox, x = _canonical_abox(b1)
    ctx = context_for(o, abox)
    return basic_key(b2) in ctx.facts[x]


def _canonical_abox(b: BasicConcept) -> tuple[ABox, str]:
    if b.kind == "name":
        return ABox(frozenset({(b.name, "_w0")})), "_w0"  # type: ignore[arg-type]
    if b.kind == "exists":
        role = b.role
        assert role is not None
        atom = (role.name, "_w1", "_w0") if role.inverted else (role.name, "_w0", "_w1")
        return ABox(frozenset(), frozenset({atom})), "_w0"
    return ABox(frozenset({("top", "_w0")})), "_w0"


def entails_role(o: Ontology, r1: Role, r2: Role) -> bool:
    """Reflexive-transitive closure of the role inclusions, closed under
    inversion."""
    eng = engine_for(o)
    return eng.subsumes_role(rkey(r1), rkey(r2))


def abox_satisfiable(o: Ontology, a: ABox) -> bool:
    """True iff ``a`` and ``o`` have a common model.

    Detects clashes on the saturated ABox (concept disjointness, role
    disjointness under role-inclusion closure, functionality with two
    distinct asserted successors) and, additionally, clashes arising in the
    anonymous witnesses the ontology forces to exist.
    """
    return context_for(o, a).satisfiable()


def query_satisfiable(o: Ontology, q: CQ) -> bool:
    return abox_satisfiable(o, q.to_abox())


def saturate(o: Ontology, q: CQ) -> CQ:
    """Add every entailed concept atom on the existing variables of ``q``."""
    abox = q.to_abox()
    ctx = context_for(o, abox)
    if not ctx.satisfiable():
        raise UnsatisfiableError("cannot saturate a query that is unsatisfiable w.r.t. the ontology")
    atoms = set(q.concept_atoms)
    visible = ctx.engine.original_names  # internal surrogate names never leak
    for v in q.variables():
        atoms.update((n, v) for n in ctx.names_at(v) if n in visible)
    return CQ(q.answer_var, frozenset(atoms), q.role_atoms, q.var_meta)


def universal_prefix(o: Ontology, a: ABox, depth: int) -> UniversalModelPrefix:
    """Materialize the traces of length <= depth of the universal model."""
    if not is_normal_form(o):
        raise ValueError("universal_prefix requires an ontology in normal form")
    _require_chaseable(o, "universal_prefix")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    ctx = context_for(o, a)
    if not ctx.satisfiable():
        raise UnsatisfiableError("ABox is unsatisfiable w.r.t. the ontology")
    return build_prefix(ctx, depth)


def certain_answer(o: Ontology, a: ABox, q: CQ, ind: str) -> bool:
    """Is ``ind`` a certain answer to ``q`` on ``a`` w.r.t. ``o``?

    Vacuously true when the ABox is unsatisfiable.  Otherwise decided by an
    anchored homomorphism search into the universal model, expanded lazily to
    trace depth ``|var(q)|`` (sufficient: the image of a connected unary query
    stays within that distance of the anchor, and trace regions are trees).
    """
    _require_chaseable(o, "certain_answer")
    if ind not in a.ind():
        raise ValueError(f"{ind!r} is not an individual of the ABox")
    ctx = context_for(o, a)
    if not ctx.satisfiable():
        return True
    return matches(ctx, q, ind)


def contained(o: Ontology, q1: CQ, q2: CQ) -> bool:
    """q1 subsumed by q2 w.r.t. o (both must be satisfiable w.r.t. o)."""
    for q in (q1, q2):
        if not query_satisfiable(o, q):
            raise UnsatisfiableError("containment requires queries satisfiable w.r.t. the ontology")
    return certain_answer(o, q1.to_abox(), q2, q1.answer_var)


def equivalent(o: Ontology, q1: CQ, q2: CQ) -> bool:
    return contained(o, q1, q2) and contained(o, q2, q1)


def minimize_eliq(o: Ontology, q: CQ) -> CQ:
    """An equivalent, saturated, minimal ELIQ: no variable can be dropped
    while preserving equivalence w.r.t. ``o``.

    Works by repeatedly dropping whole subtrees whose removal keeps the query
    equivalent; a single-variable drop of an inner variable is equivalent to
    dropping its subtree (the orphaned components can never contribute to an
    anchored match), so subtree drops suffice for minimality.
    """
    q = saturate(o, q)
    changed = True
    while changed:
        changed = False
        parent = tree_order(q)
        by_depth = sorted(
            (v for v in q.variables() if v != q.answer_var),
            key=lambda v: (-_depth(parent, v), v),
        )
        for v in by_depth:
            keep = q.variables() - subtree_vars(q, v)
            candidate = restrict(q, keep)
            if certain_answer(o, candidate.to_abox(), q, q.answer_var):
                q = candidate
                changed = True
                break
    return q


def _depth(parent, v: str) -> int:
    d = 0
    while parent[v][0] is not None:
        v = parent[v][0]  # type: ignore[assignment]
        d += 1
    return d


def is_minimal(o: Ontology, q: CQ) -> bool:
    """The literal minimality check: no single-variable restriction stays
    equivalent (used as a test oracle; restrictions may be disconnected)."""
    for v in sorted(q.variables()):
        if v == q.answer_var:
            continue
        rest = restrict(q, q.variables() - {v})
        if certain_answer(o, rest.to_abox(), q, q.answer_var):
            return False
    return True


def enumerate_eliqs(
    names: frozenset[str] | set[str],
    roles: frozenset[str] | set[str],
    max_vars: int,
) -> Iterator[CQ]:
    """Every ELIQ over the signature with at most ``max_vars`` variables, one
    representative per isomorphism class, smallest first."""
    if max_vars < 1:
        raise ValueError("max_vars must be at least 1")
    for tid in tree_ids_upto(frozenset(names), frozenset(roles), max_vars):
        yield tree_to_cq(tid)
