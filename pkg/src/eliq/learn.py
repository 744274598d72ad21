"""Exact learning of tree-shaped queries from membership queries.

The learner knows the ontology but not the hidden target query; it may only
ask an oracle whether a given individual of a given ABox is a certain answer
to the target.  Starting from a seed query that is contained in every
possible target, it alternates three ingredients:

* ``treeify`` turns a (possibly cyclic) hypothesis into a tree by repeatedly
  doubling a cycle and re-minimizing;
* ``minimize_cq`` greedily removes role atoms (keeping the answer-variable
  component) as long as the oracle still accepts;
* the frontier of the current hypothesis supplies the candidate
  generalization steps: any member the oracle accepts becomes the next
  hypothesis.

When no frontier member is accepted, the hypothesis is equivalent to the
target.  A hard budget on membership queries is always enforced; exceeding it
is a reported outcome, not a crash.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol

from .engine import context_for, engine_for, rkey
from .errors import SeedRequiredError, UnsatisfiableError, UnsupportedDialectError
from .frontier_base import Frontier, QB, _Namer, attach_concept_tree, ontology_size
from .frontier_f import frontier_f
from .frontier_r import frontier_r
from .normalform import normalize
from .parser import serialize_cq
from .reasoner import certain_answer, query_satisfiable, saturate
from .syntax import (
    ABox,
    CQ,
    Dialect,
    Ontology,
    basic_exists,
    Role,
    dialect_of,
    make_cq,
    restrict,
)

LEARNABLE = frozenset({Dialect.CORE, Dialect.R, Dialect.F_RESTRICTED})


class MembershipOracle(Protocol):
    query_count: int

    def answer(self, abox: ABox, ind: str) -> bool: ...


class SimulatedOracle:
    """Answers membership queries for a fixed hidden target query."""

    def __init__(self, ontology: Ontology, target: CQ):
        self.ontology = ontology
        self.target = target
        self.query_count = 0

    def answer(self, abox: ABox, ind: str) -> bool:
        self.query_count += 1
        return certain_answer(self.ontology, abox, self.target, ind)


@dataclass
class LearnTrace:
    hypotheses: list[CQ] = field(default_factory=list)
    membership_queries: int = 0
    frontier_sizes: list[int] = field(default_factory=list)
    outcome: str = "success"

    @property
    def final(self) -> CQ:
        return self.hypotheses[-1]

    def to_dict(self) -> dict:
        return {
            "hypotheses": [serialize_cq(h) for h in self.hypotheses],
            "membership_queries": self.membership_queries,
            "frontier_sizes": list(self.frontier_sizes),
            "outcome": self.outcome,
        }


class BudgetExceeded(Exception):
    pass


class _Budget:
    def __init__(self, oracle: MembershipOracle, limit: int):
        self.oracle = oracle
        self.limit = limit

    def ask(self, abox: ABox, ind: str) -> bool:
        if self.oracle.query_count >= self.limit:
            raise BudgetExceeded
        return self.oracle.answer(abox, ind)


def default_budget(n_target_vars: int, o: Ontology) -> int:
    """Generous polynomial cap on membership queries (an engineering choice;
    the theory guarantees some polynomial without naming constants)."""
    return 10 * (max(n_target_vars, 1) * max(ontology_size(o), 1)) ** 2


# ---------------------------------------------------------------------------
# Seed construction
# ---------------------------------------------------------------------------


def seed_query(o: Ontology, signature: tuple | None = None) -> CQ:
    """A query contained in every target that is satisfiable w.r.t. ``o``.

    Without role disjointness this is the single-variable query carrying all
    concept names and a loop for every role name.  With role disjointness,
    loops are forbidden, so the satisfiable roles are laid out as
    edge-disjoint directed Hamilton cycles on a clique: every vertex then has
    in- and out-degree one for every usable role, which is enough for any
    tree-shaped target to map in.  Concept disjointness makes any such
    one-size-fits-all query unsatisfiable; the caller must supply a seed.

    Learner and oracle must agree on the signature targets are drawn from;
    it defaults to the ontology's own and can be widened via ``signature``.
    """
    if o.concept_disjointness:
        raise SeedRequiredError(
            "concept disjointness present: supply a seed query (no universal seed exists)"
        )
    names, roles = signature if signature is not None else o.signature()
    if not o.role_disjointness:
        return make_cq(
            "x0",
            [(a, "x0") for a in sorted(names)] or [("top", "x0")],
            [(r, "x0", "x0") for r in sorted(roles)],
        )
    usable = [
        r for r in sorted(roles) if query_satisfiable(o, make_cq("x0", [], [(r, "x0", "x1")]))
    ]
    m = len(usable)
    if m == 0:
        return make_cq("x0", [(a, "x0") for a in sorted(names)] or [("top", "x0")], [])
    verts = [f"x{i}" for i in range(2 * m + 1)]
    concept_atoms = [(a, v) for a in sorted(names) for v in verts]
    role_atoms = []
    for i, r in enumerate(usable):
        for u, v in _hamilton_cycle(2 * m + 1, i):
            role_atoms.append((r, verts[u], verts[v]))
    return make_cq("x0", concept_atoms or [("top", "x0")], role_atoms)


def _hamilton_cycle(n_verts: int, k: int) -> list[tuple[int, int]]:
    """The k-th cycle of the classic decomposition of an odd clique into
    edge-disjoint Hamilton cycles: a zig-zag path through the ring vertices
    (rotated by k), closed through the hub vertex."""
    ring = n_verts - 1
    seq = [0]
    for j in range(1, ring):
        delta = j if j % 2 == 1 else -j
        seq.append((seq[-1] + delta) % ring)
    rotated = [(v + k) % ring for v in seq]
    cycle = [ring] + rotated + [ring]
    return [(cycle[i], cycle[i + 1]) for i in range(len(cycle) - 1)]


# ---------------------------------------------------------------------------
# minimize / treeify
# ---------------------------------------------------------------------------


def _component_of(q: CQ, atoms: frozenset, anchor: str) -> CQ:
    reached = {anchor}
    changed = True
    while changed:
        changed = False
        for r, x, y in atoms:
            if (x in reached) != (y in reached):
                reached.update((x, y))
                changed = True
    return CQ(
        q.answer_var,
        frozenset(p for p in q.concept_atoms if p[1] in reached),
        frozenset(t for t in atoms if t[1] in reached and t[2] in reached),
    )


def minimize_cq(o: Ontology, oracle: MembershipOracle, q: CQ, _budget: _Budget | None = None) -> CQ:
    """Remove role atoms (keeping the answer component) while the oracle
    accepts; the result is minimal, connected, and saturated."""
    ask = _budget.ask if _budget is not None else oracle.answer
    q = saturate(o, q)
    changed = True
    while changed:
        changed = False
        for atom in sorted(q.role_atoms):
            candidate = _component_of(q, q.role_atoms - {atom}, q.answer_var)
            if ask(candidate.to_abox(), q.answer_var):
                q = candidate
                changed = True
                break
    return q


def _find_cycle_atom(q: CQ) -> tuple[str, str, str] | None:
    """A role atom lying on a cycle (self-loops and multi-edges included),
    deterministically the smallest such atom."""
    atoms = sorted(q.role_atoms)
    for atom in atoms:
        r, x, y = atom
        if x == y:
            return atom
        rest = [t for t in atoms if t != atom]
        # on a cycle iff x and y stay connected without the atom
        reached = {x}
        changed = True
        while changed:
            changed = False
            for _, u, v in rest:
                if (u in reached) != (v in reached):
                    reached.update((u, v))
                    changed = True
        if y in reached:
            return atom
    return None


def treeify(o: Ontology, oracle: MembershipOracle, q: CQ, _budget: _Budget | None = None) -> CQ:
    """Turn a hypothesis into an equivalent-or-more-general tree by doubling
    cycles and re-minimizing until no cycle remains."""
    q = saturate(o, q)
    p = minimize_cq(o, oracle, q, _budget)
    while True:
        atom = _find_cycle_atom(p)
        if atom is None:
            break
        r, x, y = atom
        base_atoms = p.role_atoms - {atom}
        suffix = "'"
        while any(v + suffix in p.variables() for v in p.variables()):
            suffix += "'"
        rename = {v: v + suffix for v in p.variables()}
        doubled_concepts = set(p.concept_atoms)
        doubled_concepts.update((a, rename[v]) for a, v in p.concept_atoms)
        doubled_roles = set(base_atoms)
        doubled_roles.update((rn, rename[u], rename[v]) for rn, u, v in base_atoms)
        doubled_roles.add((r, x, rename[y]))
        doubled_roles.add((r, rename[x], y))
        p = minimize_cq(o, oracle, CQ(p.answer_var, frozenset(doubled_concepts), frozenset(doubled_roles)), _budget)
    if not p.is_eliq():
        raise AssertionError("treeify failed to produce a tree-shaped query")
    return p


# ---------------------------------------------------------------------------
# The learning loop
# ---------------------------------------------------------------------------


def _frontier_fn(o: Ontology) -> Callable[[Ontology, CQ], Frontier]:
    d = dialect_of(o)
    if d is Dialect.F_RESTRICTED:
        return frontier_f
    return frontier_r


def learn(o: Ontology, oracle: MembershipOracle, seed: CQ, budget: int) -> LearnTrace:
    """Identify the oracle's target up to equivalence w.r.t. ``o``.

    Requires a Core, role-inclusion, or restricted-functionality ontology (in
    any syntactic form; callers with non-normal-form ontologies may prefer
    ``learn_with_normal_form``, which keeps the oracle's vocabulary clean),
    and a seed contained in the target.  Frontier members are probed smallest
    first.  Returns the full hypothesis trace; ``budget_exceeded`` is an
    outcome, not an exception.
    """
    if dialect_of(o) not in LEARNABLE:
        from .frontier_base import reject_unsupported

        reject_unsupported(o, LEARNABLE, "learn")
    if budget <= 0:
        raise ValueError("budget must be positive")
    if not query_satisfiable(o, seed):
        raise UnsatisfiableError("seed query is unsatisfiable w.r.t. the ontology")
    frontier_of = _frontier_fn(o)
    guard = _Budget(oracle, budget)
    trace = LearnTrace()
    try:
        q_h = treeify(o, oracle, seed, guard)
        trace.hypotheses.append(q_h)
        while True:
            members = sorted(
                frontier_of(o, q_h).members,
                key=lambda m: (len(serialize_cq(m)), serialize_cq(m)),
            )
            trace.frontier_sizes.append(len(members))
            accepted = None
            for member in members:
                if guard.ask(member.to_abox(), member.answer_var):
                    accepted = member
                    break
            if accepted is None:
                break
            q_h = minimize_cq(o, oracle, accepted, guard)
            trace.hypotheses.append(q_h)
    except BudgetExceeded:
        trace.outcome = "budget_exceeded"
    trace.membership_queries = oracle.query_count
    return trace


# ---------------------------------------------------------------------------
# Reduction to normal form
# ---------------------------------------------------------------------------


class _RewritingOracle:
    """Forwards membership queries after replacing surrogate-name assertions
    by the concept trees they abbreviate (functionality-respecting, so the
    rewritten ABox satisfies every functionality assertion the input did)."""

    def __init__(self, inner: MembershipOracle, fresh_map, functional):
        self.inner = inner
        self.fresh_map = fresh_map
        self.functional = functional
        self.forwarded: list[ABox] = []

    @property
    def query_count(self) -> int:
        return self.inner.query_count

    def answer(self, abox: ABox, ind: str) -> bool:
        rewritten = rewrite_abox(abox, self.fresh_map, self.functional)
        self.forwarded.append(rewritten)
        return self.inner.answer(rewritten, ind)


def rewrite_abox(abox: ABox, fresh_map, functional) -> ABox:
    """Replace each assertion ``X_C(b)`` by the tree form of ``C`` glued at
    ``b``, reusing existing successors along functional roles."""
    if not fresh_map:
        return abox
    qb = QB("_")
    qb.concepts = {(a, v) for a, v in abox.concept_assertions if a != "top" and a not in fresh_map}
    qb.roles = set(abox.role_assertions)
    namer = _Namer(abox.ind())
    for name, b in sorted(abox.concept_assertions):
        if name in fresh_map:
            attach_concept_tree(qb, b, fresh_map[name], namer, functional)
    tops = frozenset(p for p in abox.concept_assertions if p[0] == "top")
    return ABox(frozenset(qb.concepts) | tops, frozenset(qb.roles))


def learn_with_normal_form(
    o: Ontology, oracle: MembershipOracle, seed: CQ, budget: int
) -> LearnTrace:
    """Run the learner over the normal form of ``o`` while the oracle keeps
    working with ``o`` itself: every membership-query ABox is rewritten to
    eliminate surrogate names before being forwarded (one forwarded query per
    learner query), and the final hypotheses are translated back."""
    if dialect_of(o) not in LEARNABLE:
        from .frontier_base import reject_unsupported

        reject_unsupported(o, LEARNABLE, "learn")
    on, fresh_map = normalize(o)
    functional = frozenset(rkey(r) for r in on.functional)
    wrapped = _RewritingOracle(oracle, fresh_map, functional)
    trace = learn(on, wrapped, seed, budget)
    trace.hypotheses = [_expand_query(h, fresh_map, functional) for h in trace.hypotheses]
    return trace


def _expand_query(q: CQ, fresh_map, functional) -> CQ:
    from .frontier_base import translate_members

    return translate_members([q], fresh_map, functional if functional else None)[0]
