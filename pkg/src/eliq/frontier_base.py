"""Shared machinery for the two frontier constructions.

Both constructions follow the same two-phase scheme: a *generalization*
phase that produces, per variable, the least-general ways of weakening the
subtree rooted there, and a *compensation* phase that re-attaches enough
structure to keep every generalization least general.  Throughout, fresh
variables remember which original query variable they descend from (the
``down`` map); compensation is driven by that bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import ABoxContext, RKey, context_for, engine_for, rinv, role_of
from .errors import UnsatisfiableError, UnsupportedDialectError
from .normalform import expand_surrogates, normalize
from .reasoner import contained, minimize_eliq, query_satisfiable
from .syntax import CQ, ELIConcept, Ontology, Role, concept_conjuncts, make_cq, tree_order


@dataclass
class GenCandidate:
    """One generalization of the subtree rooted at a variable.

    ``query`` is rooted at that variable; ``down`` maps each of its variables
    to the original query variable it descends from (None once compensation
    introduces variables with no counterpart).
    """

    query: CQ
    down: dict[str, str | None]
    provenance: str


@dataclass(frozen=True)
class Frontier:
    members: tuple[CQ, ...]
    source_query: CQ
    source_ontology: Ontology


class _Namer:
    """Deterministic fresh-variable source; names carry their origin as a hint."""

    def __init__(self, used=()):
        self.n = 0
        self.used = set(used)

    def fresh(self, hint: str) -> str:
        while True:
            self.n += 1
            name = f"{hint}~{self.n}"
            if name not in self.used:
                self.used.add(name)
                return name


class QB:
    """Mutable query-under-construction with the ``down`` bookkeeping."""

    def __init__(self, answer: str):
        self.answer = answer
        self.concepts: set[tuple[str, str]] = set()
        self.roles: set[tuple[str, str, str]] = set()
        self.down: dict[str, str | None] = {}

    @classmethod
    def from_candidate(cls, cand: GenCandidate) -> "QB":
        qb = cls(cand.query.answer_var)
        qb.concepts = {(a, v) for a, v in cand.query.concept_atoms if a != "top"}
        qb.roles = set(cand.query.role_atoms)
        qb.down = dict(cand.down)
        return qb

    def add_concept(self, name: str, v: str) -> None:
        self.concepts.add((name, v))

    def add_edge(self, role: Role, x: str, y: str) -> None:
        if role.inverted:
            self.roles.add((role.name, y, x))
        else:
            self.roles.add((role.name, x, y))

    def concepts_at(self, v: str) -> frozenset[str]:
        return frozenset(a for a, w in self.concepts if w == v)

    def vars(self) -> set[str]:
        out = {self.answer}
        out.update(v for _, v in self.concepts)
        for _, x, y in self.roles:
            out.update((x, y))
        return out

    def glue_query_copy(self, q: CQ, glue_from: str, glue_to: str, namer: _Namer) -> None:
        """Attach a disjoint copy of ``q``, identifying ``glue_from``'s copy
        with the existing variable ``glue_to``.  Copied variables descend from
        their originals."""
        rename: dict[str, str] = {glue_from: glue_to}
        for v in sorted(q.variables()):
            if v not in rename:
                rename[v] = namer.fresh(v)
                self.down[rename[v]] = v
        for a, v in q.concept_atoms:
            if a != "top":
                self.concepts.add((a, rename[v]))
        for r, x, y in q.role_atoms:
            self.roles.add((r, rename[x], rename[y]))

    def add_disjoint_copy(self, q: CQ, down_src: dict[str, str | None], namer: _Namer) -> str:
        """Add a fully disjoint copy of ``q``; returns the copy of its answer
        variable.  Copied variables descend from what their originals
        descended from."""
        rename = {v: namer.fresh(v) for v in sorted(q.variables())}
        for v, nv in rename.items():
            self.down[nv] = down_src.get(v)
        for a, v in q.concept_atoms:
            if a != "top":
                self.concepts.add((a, rename[v]))
        for r, x, y in q.role_atoms:
            self.roles.add((r, rename[x], rename[y]))
        return rename[q.answer_var]

    def freeze(self) -> CQ:
        q = make_cq(self.answer, self.concepts, self.roles, var_meta=dict(self.down))
        return q


@dataclass
class Prepared:
    """Inputs lifted to the normal-form world, ready for construction."""

    ontology: Ontology  # normalized
    fresh_map: dict[str, ELIConcept]
    query: CQ  # saturated and minimized w.r.t. the normalized ontology
    ctx: ABoxContext  # context of the query's ABox
    children: dict[str, list[tuple[Role, str]]] = field(default_factory=dict)

    def __post_init__(self):
        parent = tree_order(self.query)
        for v, (p, role) in parent.items():
            if p is not None:
                assert role is not None
                self.children.setdefault(p, []).append((role, v))
        for v in self.children:
            self.children[v].sort(key=lambda p: (str(p[0]), p[1]))


def strip_top(q: CQ) -> CQ:
    return CQ(
        q.answer_var,
        frozenset(p for p in q.concept_atoms if p[0] != "top"),
        q.role_atoms,
        q.var_meta,
    )


def prepare(o: Ontology, q: CQ, op: str) -> Prepared:
    if not query_satisfiable(o, q):
        raise UnsatisfiableError(f"{op}: query is unsatisfiable w.r.t. the ontology")
    on, fmap = normalize(o)
    qmin = strip_top(minimize_eliq(on, q))
    return Prepared(on, fmap, qmin, context_for(on, qmin.to_abox()))


# ---------------------------------------------------------------------------
# Entailment helpers used by the generalization rules
# ---------------------------------------------------------------------------


def name_entails(eng, a: str, b: str) -> bool:
    return ("c", b) in eng.closure({("c", a)})


def exists_entails_name(eng, rk: RKey, b: str) -> bool:
    return ("c", b) in eng.closure({("e", rk)})


def names_implied_by_exists(eng, rk: RKey) -> frozenset[str]:
    return eng.names_of(eng.closure({("e", rk)}))


def drop_concept_candidates(prep: Prepared, x: str, subquery: CQ) -> list[GenCandidate]:
    """Case (A): drop a concept atom at ``x`` (identical in both dialects).

    A drop must actually generalize: after removing the atom (together with
    its equivalence class), the name must no longer be entailed at ``x`` by
    the remaining full query.  The cheap syntactic pre-checks (a strictly
    stronger atom at x, or an incident role atom whose existential implies
    the name) cover the common cases; the final entailment check also catches
    less direct routes, such as a functional inverse role forcing the name
    onto an asserted predecessor.
    """
    eng = prep.ctx.engine
    q = prep.query
    out = []
    atoms = sorted(q.concepts_at(x))
    incident = [role for role, _ in q.neighbors(x)]
    for a in atoms:
        if any(name_entails(eng, b, a) and not name_entails(eng, a, b) for b in atoms):
            continue
        if any(exists_entails_name(eng, (r.name, r.inverted), a) for r in incident):
            continue
        removed = {b for b in atoms if name_entails(eng, a, b) and name_entails(eng, b, a)}
        reduced_full = CQ(
            q.answer_var,
            frozenset(p for p in q.concept_atoms if not (p[1] == x and p[0] in removed)),
            q.role_atoms,
        )
        rctx = context_for(prep.ontology, reduced_full.to_abox())
        if a in rctx.names_at(x):
            continue  # still entailed after removal: not a generalization
        cand = CQ(
            x,
            frozenset(p for p in subquery.concept_atoms if not (p[1] == x and p[0] in removed)),
            subquery.role_atoms,
        )
        down = {v: v for v in cand.variables()}
        out.append(GenCandidate(cand, down, f"drop:{a}@{x}"))
    return out


# ---------------------------------------------------------------------------
# Assembling and validating frontiers
# ---------------------------------------------------------------------------


def attach_concept_tree(qb: QB, at: str, c: ELIConcept, namer: _Namer,
                        functional: frozenset[RKey] | None) -> None:
    """Glue the tree form of concept ``c`` at variable ``at``.

    With ``functional`` given, existentials along a functional role reuse an
    existing successor instead of creating a second one (which would make the
    result unsatisfiable); the reattached subtree merges recursively, exactly
    like the functionality-respecting ABox additions used by the learner.
    """
    for part in concept_conjuncts(c):
        if part.kind == "top":
            continue
        if part.kind == "name":
            qb.add_concept(part.name, at)  # type: ignore[arg-type]
            continue
        assert part.kind == "exists" and part.role is not None
        rk = (part.role.name, part.role.inverted)
        target = None
        if functional is not None and rk in functional:
            for rname, s, t in sorted(qb.roles):
                if not part.role.inverted and rname == part.role.name and s == at:
                    target = t
                    break
                if part.role.inverted and rname == part.role.name and t == at:
                    target = s
                    break
        if target is None:
            target = namer.fresh(at)
            qb.down.setdefault(target, None)
            qb.add_edge(part.role, at, target)
        attach_concept_tree(qb, target, part.filler, namer, functional)  # type: ignore[arg-type]


def translate_members(members: list[CQ], fresh_map, functional) -> list[CQ]:
    """Replace surrogate atoms introduced by normalization with the concepts
    they stand for."""
    out = []
    for m in members:
        namer = _Namer(m.variables())

        def glue(q: CQ, v: str, c: ELIConcept, tag: str) -> CQ:
            qb = QB(q.answer_var)
            qb.concepts = {(a, w) for a, w in q.concept_atoms if a != "top"}
            qb.roles = set(q.role_atoms)
            attach_concept_tree(qb, v, c, namer, functional)
            return qb.freeze()

        out.append(expand_surrogates(m, fresh_map, glue))
    return out


def check_conditions(o: Ontology, q: CQ, members: list[CQ], op: str) -> None:
    """Machine-check Conditions 1 and 2 of the frontier definition."""
    for m in members:
        if not query_satisfiable(o, m):
            raise AssertionError(f"{op}: construction produced an unsatisfiable member: {m}")
        if not contained(o, q, m):
            raise AssertionError(f"{op}: member violates Condition 1 (q not contained): {m}")
        if contained(o, m, q):
            raise AssertionError(f"{op}: member violates Condition 2 (member refines q): {m}")


def size_ceiling_ok(q: CQ, o: Ontology, members: list[CQ]) -> bool:
    """Generous polynomial sanity ceiling on the total variable count."""
    n = max(len(q.variables()), 1)
    names, roles = q.signature()
    s = max(len(names) + len(roles), 1)
    osz = max(ontology_size(o), 1)
    bound = s * osz * n**3 * (1 + (1 + n) * osz**3) * (1 + n * osz)
    total = sum(len(m.variables()) for m in members)
    return total <= bound


def ontology_size(o: Ontology) -> int:
    def csize(c: ELIConcept) -> int:
        if c.kind in ("top", "name"):
            return 1
        if c.kind == "and":
            return 1 + sum(csize(p) for p in c.parts)
        return 2 + csize(c.filler)  # type: ignore[arg-type]

    total = 0
    for lhs, rhs in o.concept_inclusions:
        total += 2 + csize(rhs)
    total += 3 * len(o.role_inclusions)
    total += 3 * len(o.concept_disjointness)
    total += 3 * len(o.role_disjointness)
    total += 2 * len(o.functional)
    return total


def prune_equivalents(o: Ontology, members: list[CQ]) -> list[CQ]:
    """Drop members equivalent (w.r.t. o) to an earlier member."""
    kept: list[CQ] = []
    for m in members:
        if not any(contained(o, m, k) and contained(o, k, m) for k in kept):
            kept.append(m)
    return kept


def minimal_core(o: Ontology, members: list[CQ]) -> list[CQ]:
    """An inclusion-minimal sub-frontier: a member is redundant whenever
    another kept member is contained in it."""
    members = sorted(members, key=lambda m: (len(m.variables()), str(sorted(m.concept_atoms)), str(sorted(m.role_atoms))))
    kept: list[CQ] = []
    for i, m in enumerate(members):
        redundant = False
        for j, g in enumerate(members):
            if i == j:
                continue
            if contained(o, g, m) and (not contained(o, m, g) or j < i):
                redundant = True
                break
        if not redundant:
            kept.append(m)
    return kept


def reject_unsupported(o: Ontology, allowed, op: str) -> None:
    from .syntax import Dialect, dialect_of

    d = dialect_of(o)
    if d in allowed:
        return
    if d is Dialect.F:
        # Name every offending inclusion / functionality pair for diagnostics.
        offending = []
        for lhs, rhs in o.concept_inclusions:
            bad = _offending_exists(rhs, o)
            if bad is not None:
                offending.append(
                    {"concept_inclusion": f"{lhs} sub {rhs}", "functional": f"func {bad.inverse()}"}
                )
        listing = "; ".join(
            f"{e['concept_inclusion']} with {e['functional']}" for e in offending
        )
        raise UnsupportedDialectError(
            "not_f_restricted",
            f"{op}: functionality ontology is not restricted; no finite frontier is "
            f"guaranteed ({listing})",
            {"offending": offending},
        )
    raise UnsupportedDialectError(
        "unsupported_dialect", f"{op}: unsupported ontology dialect {d.value}"
    )


def _offending_exists(c: ELIConcept, o: Ontology):
    if c.kind == "exists":
        assert c.role is not None
        if c.role.inverse() in o.functional:
            return c.role
        return _offending_exists(c.filler, o)  # type: ignore[arg-type]
    if c.kind == "and":
        for p in c.parts:
            bad = _offending_exists(p, o)
            if bad is not None:
                return bad
    return None
