"""Frontier construction for restricted functionality ontologies.

Unrestricted functionality destroys finite frontiers (an inverse-functional
role can force unboundedly long detours), so this construction only accepts
ontologies in which no concept-inclusion right-hand side uses ``some R . D``
with ``func(R-)`` asserted; anything else is rejected with the reason code
``not_f_restricted``.

Step 1 mirrors the role-inclusion construction except at a functional child
edge: there the child may keep only a single successor, so instead of
reattaching all of the child's generalizations at once, one candidate is
emitted per choice of generalization (and plain removal when the child has
none).

Step 2's compensation cannot simply hang copies of the original query
wherever it likes: a copy glued next to a functional edge would create a
second successor and make the member unsatisfiable.  2A therefore only adds
the entailed witness successors (with their maximal concept-name label sets),
and 2B rebuilds the surrounding structure iteratively: starting from the
inverse of every non-inverse-functional edge, marked atoms are processed by
either gluing a full query copy (when no functionality clash is possible) or
by re-expanding the neighborhood of the corresponding original variable one
step, marking the new atoms.  Gluing is blocked exactly when the inverse of
the processed atom's role is functional and the original variable carries an
outgoing atom of that role in the query; the re-expansion consumes distinct
query atoms, so the iteration terminates.
"""

from __future__ import annotations

from collections import deque

from .engine import RKey, rinv, role_of
from .frontier_base import (
    Frontier,
    GenCandidate,
    Prepared,
    QB,
    _Namer,
    check_conditions,
    drop_concept_candidates,
    names_implied_by_exists,
    prepare,
    prune_equivalents,
    reject_unsupported,
    size_ceiling_ok,
    translate_members,
)
from .frontier_base import ontology_size
from .normalform import is_normal_form
from .syntax import CQ, Dialect, Ontology, Role, restrict, subquery_at, subtree_vars, tree_order

_F_DIALECTS = frozenset({Dialect.CORE, Dialect.F_RESTRICTED})


def _f_nudges(prep: Prepared, v: str) -> list[tuple[RKey, frozenset[str]]]:
    """Unwitnessed entailed successors of original variable v, as pairs
    (role, maximal concept-name set of the witness)."""
    eng = prep.ctx.engine
    out = []
    for child in prep.ctx.fired_children(v):
        if child.blocked:
            continue
        m = eng.names_of(eng.type_facts((child.seed, child.role)))
        out.append((child.role, m))
    # Keep only maximal label sets per role.
    kept = []
    for rk, m in out:
        if not any(rk2 == rk and m < m2 for rk2, m2 in out):
            if (rk, m) not in kept:
                kept.append((rk, m))
    return sorted(kept, key=lambda p: (p[0], sorted(p[1])))


def _f0_f(prep: Prepared, namer: _Namer, memo: dict, x: str) -> list[GenCandidate]:
    if x in memo:
        return memo[x]
    eng = prep.ctx.engine
    q = prep.query
    qx = subquery_at(q, x)
    out = drop_concept_candidates(prep, x, qx)
    for role, y in prep.children.get(x, []):
        below = subtree_vars(q, y)
        base = restrict(qx, qx.variables() - below)
        rk = (role.name, role.inverted)
        subs = _f0_f(prep, namer, memo, y)

        def removal_base() -> QB:
            qb = QB(x)
            qb.concepts = {(a, v) for a, v in base.concept_atoms if a != "top"}
            qb.roles = set(base.role_atoms)
            qb.down = {v: v for v in base.variables() | {x}}
            return qb

        if rk not in eng.functional:
            qb = removal_base()
            for sub in subs:
                root = qb.add_disjoint_copy(sub.query, sub.down, namer)
                qb.add_edge(role, x, root)
            out.append(GenCandidate(qb.freeze(), dict(qb.down), f"sub:{role}@{x}->{y}"))
        elif not subs:
            qb = removal_base()
            out.append(GenCandidate(qb.freeze(), dict(qb.down), f"sub:{role}@{x}->{y}:drop"))
        else:
            # A functional edge keeps a single successor: one candidate per
            # choice of the child's generalization.
            for i, sub in enumerate(subs):
                qb = removal_base()
                root = qb.add_disjoint_copy(sub.query, sub.down, namer)
                qb.add_edge(role, x, root)
                out.append(
                    GenCandidate(qb.freeze(), dict(qb.down), f"sub:{role}@{x}->{y}:choice{i}")
                )
    memo[x] = out
    return out


def generalize_f(o: Ontology, q: CQ, x: str) -> list[GenCandidate]:
    if not is_normal_form(o):
        raise ValueError("generalize_f expects an ontology in normal form")
    from .engine import context_for

    prep = Prepared(o, {}, q, context_for(o, q.to_abox()))
    return _f0_f(prep, _Namer(q.variables()), {}, x)


def _compensate_f(prep: Prepared, namer: _Namer, cand: GenCandidate, lifo: bool = False) -> CQ:
    eng = prep.ctx.engine
    q = prep.query
    qb = QB.from_candidate(cand)

    # Step 2A: add entailed witness successors (no query copies here; the
    # iterative step below takes care of compensation around them).
    for x in sorted(cand.query.variables()):
        dx = cand.down.get(x)
        if dx is None:
            continue
        for rk, m in _f_nudges(prep, dx):
            if not names_implied_by_exists(eng, rk) <= qb.concepts_at(x):
                continue
            z = namer.fresh("z")
            qb.add_edge(role_of(rk), x, z)
            for a in sorted(m):
                qb.add_concept(a, z)
            qb.down[z] = None

    # Step 2B.  Work on the current atom set (candidate plus 2A successors).
    marked: deque = deque()
    processed = 0
    budget = _iteration_budget(prep, qb)

    def mark(src: str, dst: str, role: Role) -> None:
        # Marking proviso: the target descends from a query variable, and a
        # source with no origin must be safely gluable later.
        assert qb.down.get(dst) is not None, "marked atom target must have an origin"
        if qb.down.get(src) is None:
            tk = (role.name, role.inverted)
            assert rinv(tk) not in eng.functional or not _q_has_edge(q, qb.down[dst], rinv(tk)), (
                "marking proviso violated"
            )
        marked.append((src, dst, role))

    # Start: invert every edge whose inverse is not functional.
    for u, role, w in _away_atoms_of(qb):
        tk = (role.name, role.inverted)
        if rinv(tk) in eng.functional:
            continue
        assert qb.down.get(u) is not None, "away-directed sources have origins here"
        v = namer.fresh(u)
        qb.add_edge(role.inverse(), w, v)
        qb.down[v] = qb.down[u]
        mark(w, v, role.inverse())

    while marked:
        src, dst, role = marked.pop() if lifo else marked.popleft()
        processed += 1
        assert processed <= budget, "marking iteration exceeded its termination bound"
        tk = (role.name, role.inverted)
        back = rinv(tk)
        ydown = qb.down[dst]
        assert ydown is not None
        if back not in eng.functional or not _q_has_edge(q, ydown, back):
            # A full copy of q cannot clash with functionality here.
            qb.glue_query_copy(q, ydown, dst, namer)
            continue
        xdown = qb.down[src]
        assert xdown is not None, "non-glue step requires a source origin"
        # (i) transfer concept names of the original variable
        for a in sorted(prep.ctx.names_at(ydown)):
            qb.add_concept(a, dst)
        # (ii) re-expand the original variable's other query edges
        for s_role, z in sorted(q.neighbors(ydown), key=lambda p: (str(p[0]), p[1])):
            if (s_role.name, s_role.inverted) == back and z == xdown:
                continue
            z2 = namer.fresh(z)
            qb.add_edge(s_role, dst, z2)
            qb.down[z2] = z
            mark(dst, z2, s_role)
        # (iii) re-expand the entailed witness successors, paired with an
        # inverse twin that the next round glues a copy onto
        for sk, m in _f_nudges(prep, ydown):
            u2 = namer.fresh("u")
            y2 = namer.fresh(ydown)
            qb.add_edge(role_of(sk), dst, u2)
            for a in sorted(m):
                qb.add_concept(a, u2)
            qb.add_edge(role_of(rinv(sk)), u2, y2)
            qb.down[u2] = None
            qb.down[y2] = ydown
            mark(u2, y2, role_of(rinv(sk)))

    return qb.freeze()


def _q_has_edge(q: CQ, v: str, rk: RKey) -> bool:
    return any((role.name, role.inverted) == rk for role, _ in q.neighbors(v))


def _away_atoms_of(qb: QB) -> list[tuple[str, Role, str]]:
    parent = tree_order(qb.freeze())
    out = []
    for v, (p, role) in sorted(parent.items()):
        if p is not None:
            assert role is not None
            out.append((p, role, v))
    return out


def _iteration_budget(prep: Prepared, qb: QB) -> int:
    n_q = len(prep.query.variables())
    names, roles = prep.ontology.signature()
    sig = len(names) + len(roles)
    return max(1, len(qb.roles)) * (1 + n_q + sig * sig) + 10


def compensate_f(o: Ontology, q: CQ, cand: GenCandidate) -> CQ:
    if cand.query.answer_var != q.answer_var:
        raise ValueError("compensation applies to candidates at the answer variable")
    from .engine import context_for

    prep = Prepared(o, {}, q, context_for(o, q.to_abox()))
    used = set(q.variables()) | set(cand.query.variables())
    return _compensate_f(prep, _Namer(used), cand)


def frontier_f(
    o: Ontology,
    q: CQ,
    prune: bool = False,
    _tie_reverse: bool = False,
) -> Frontier:
    """The frontier of ``q`` w.r.t. a Core or restricted functionality
    ontology; rejects unrestricted functionality with ``not_f_restricted``."""
    reject_unsupported(o, _F_DIALECTS, "frontier_f")
    prep = prepare(o, q, "frontier_f")
    namer = _Namer(prep.query.variables())
    cands = _f0_f(prep, namer, {}, prep.query.answer_var)
    if _tie_reverse:
        cands = list(reversed(cands))
    raw_members = [_compensate_f(prep, namer, c, lifo=_tie_reverse) for c in cands]
    assert size_ceiling_ok(prep.query, prep.ontology, raw_members), "frontier size ceiling exceeded"
    members = translate_members(raw_members, prep.fresh_map, prep.ctx.engine.functional)
    check_conditions(o, q, members, "frontier_f")
    if prune:
        members = prune_equivalents(o, members)
    members = sorted(set(members), key=_member_key)
    return Frontier(tuple(members), q, o)


def _member_key(m: CQ):
    return (len(m.variables()), sorted(m.concept_atoms), sorted(m.role_atoms))
