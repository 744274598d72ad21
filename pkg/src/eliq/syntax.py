"""Syntax model for DL-Lite ontologies, ABoxes, and (tree-shaped) conjunctive queries.

All values are immutable after construction and hashable, so they can be
shared freely and used as cache keys.  Conventions used throughout:

* Roles are a role name plus an inversion flag; double inversion is not
  representable (``inverse`` flips the flag).
* The top concept is written ``top`` and is also admitted as a unary
  "concept" in queries and ABoxes; every variable/individual implicitly
  satisfies it.
* Query role atoms always use plain role names: an inverse atom
  ``r-(x, y)`` is stored as ``r(y, x)``.
* Conjunction of ELI concepts is associative-commutative: the ``conj``
  constructor flattens, deduplicates and sorts, so structural equality is
  equality up to reordering of conjuncts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import NotAnEliqError

TOP = "top"

# ---------------------------------------------------------------------------
# Roles and concepts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverted: bool = False

    def inverse(self) -> "Role":
        return Role(self.name, not self.inverted)

    def __str__(self) -> str:
        return self.name + ("-" if self.inverted else "")


@dataclass(frozen=True)
class BasicConcept:
    """``top``, a concept name, or an unqualified existential ``some R``."""

    kind: str  # "top" | "name" | "exists"
    name: Optional[str] = None
    role: Optional[Role] = None

    def __str__(self) -> str:
        if self.kind == "top":
            return TOP
        if self.kind == "name":
            return self.name  # type: ignore[return-value]
        return f"some {self.role}"


BASIC_TOP = BasicConcept("top")


def basic_name(name: str) -> BasicConcept:
    return BasicConcept("name", name=name)


def basic_exists(role: Role) -> BasicConcept:
    return BasicConcept("exists", role=role)


@dataclass(frozen=True)
class ELIConcept:
    """An ELI concept: ``top``, a name, a conjunction, or ``some R . C``.

    Conjunctions are n-ary, flattened and sorted; build them with ``conj``.
    """

    kind: str  # "top" | "name" | "and" | "exists"
    name: Optional[str] = None
    parts: tuple["ELIConcept", ...] = ()
    role: Optional[Role] = None
    filler: Optional["ELIConcept"] = None

    def is_basic(self) -> bool:
        return (
            self.kind in ("top", "name")
            or (self.kind == "exists" and self.filler is not None and self.filler.kind == "top")
        )

    def __str__(self) -> str:
        if self.kind == "top":
            return TOP
        if self.kind == "name":
            return self.name  # type: ignore[return-value]
        if self.kind == "and":
            return " & ".join(
                f"({p})" if p.kind == "and" else str(p) for p in self.parts
            )
        filler = self.filler
        assert filler is not None
        if filler.kind == "top":
            return f"some {self.role}"
        if filler.kind == "and":
            return f"some {self.role} . ({filler})"
        return f"some {self.role} . {filler}"


CONCEPT_TOP = ELIConcept("top")


def atom(name: str) -> ELIConcept:
    return ELIConcept("name", name=name)


def exists(role: Role, filler: ELIConcept = CONCEPT_TOP) -> ELIConcept:
    return ELIConcept("exists", role=role, filler=filler)


def conj(parts: Iterable[ELIConcept]) -> ELIConcept:
    """Conjunction, flattened / deduplicated / sorted; drops redundant top."""
    flat: set[ELIConcept] = set()
    for p in parts:
        if p.kind == "and":
            flat.update(p.parts)
        elif p.kind != "top":
            flat.add(p)
    if not flat:
        return CONCEPT_TOP
    ordered = tuple(sorted(flat, key=str))
    if len(ordered) == 1:
        return ordered[0]
    return ELIConcept("and", parts=ordered)


def concept_conjuncts(c: ELIConcept) -> tuple[ELIConcept, ...]:
    return c.parts if c.kind == "and" else (c,)


def basic_to_concept(b: BasicConcept) -> ELIConcept:
    if b.kind == "top":
        return CONCEPT_TOP
    if b.kind == "name":
        return atom(b.name)  # type: ignore[arg-type]
    return exists(b.role)  # type: ignore[arg-type]


def concept_to_basic(c: ELIConcept) -> Optional[BasicConcept]:
    """The basic concept equal to ``c``, or None if ``c`` is not basic."""
    if c.kind == "top":
        return BASIC_TOP
    if c.kind == "name":
        return basic_name(c.name)  # type: ignore[arg-type]
    if c.kind == "exists" and c.filler is not None and c.filler.kind == "top":
        return basic_exists(c.role)  # type: ignore[arg-type]
    return None


def concept_signature(c: ELIConcept) -> tuple[set[str], set[str]]:
    names: set[str] = set()
    roles: set[str] = set()
    stack = [c]
    while stack:
        cur = stack.pop()
        if cur.kind == "name":
            names.add(cur.name)  # type: ignore[arg-type]
        elif cur.kind == "and":
            stack.extend(cur.parts)
        elif cur.kind == "exists":
            roles.add(cur.role.name)  # type: ignore[union-attr]
            stack.append(cur.filler)  # type: ignore[arg-type]
    return names, roles


# ---------------------------------------------------------------------------
# Ontologies
# ---------------------------------------------------------------------------


class Dialect(enum.Enum):
    CORE = "core"
    R = "r"  # role inclusions, no functionality
    F = "f"  # functionality, no role inclusions
    F_RESTRICTED = "f_restricted"  # F, and no RHS subconcept some R . D with func(R-)
    RF = "rf"  # both


@dataclass(frozen=True)
class Ontology:
    """A DL-Lite ontology: CIs, RIs, disjointness constraints, functionality."""

    concept_inclusions: tuple[tuple[BasicConcept, ELIConcept], ...] = ()
    role_inclusions: tuple[tuple[Role, Role], ...] = ()
    concept_disjointness: tuple[tuple[BasicConcept, BasicConcept], ...] = ()
    role_disjointness: tuple[tuple[Role, Role], ...] = ()
    functional: frozenset[Role] = frozenset()

    def signature(self) -> tuple[frozenset[str], frozenset[str]]:
        """(concept names, role names) occurring in any statement."""
        names: set[str] = set()
        roles: set[str] = set()

        def add_basic(b: BasicConcept) -> None:
            if b.kind == "name":
                names.add(b.name)  # type: ignore[arg-type]
            elif b.kind == "exists":
                roles.add(b.role.name)  # type: ignore[union-attr]

        for lhs, rhs in self.concept_inclusions:
            add_basic(lhs)
            n, r = concept_signature(rhs)
            names.update(n)
            roles.update(r)
        for r1, r2 in self.role_inclusions + self.role_disjointness:
            roles.update((r1.name, r2.name))
        for b1, b2 in self.concept_disjointness:
            add_basic(b1)
            add_basic(b2)
        for r in self.functional:
            roles.add(r.name)
        return frozenset(names), frozenset(roles)

    @property
    def concept_names(self) -> frozenset[str]:
        return self.signature()[0]

    @property
    def role_names(self) -> frozenset[str]:
        return self.signature()[1]


def dialect_of(o: Ontology) -> Dialect:
    """Most specific dialect of ``o``.

    The F-restriction is evaluated on the ontology as given (before any
    normal-form conversion): no CI right-hand side may contain a subconcept
    ``some R . D`` when ``func(R-)`` is asserted.  Unqualified ``some R`` on a
    right-hand side counts as ``some R . top``.
    """
    has_ri = bool(o.role_inclusions)
    has_func = bool(o.functional)
    if has_ri and has_func:
        return Dialect.RF
    if has_ri:
        return Dialect.R
    if not has_func:
        return Dialect.CORE

    def restricted(c: ELIConcept) -> bool:
        if c.kind == "exists":
            if c.role.inverse() in o.functional:  # type: ignore[union-attr]
                return False
            return restricted(c.filler)  # type: ignore[arg-type]
        if c.kind == "and":
            return all(restricted(p) for p in c.parts)
        return True

    if all(restricted(rhs) for _, rhs in o.concept_inclusions):
        return Dialect.F_RESTRICTED
    return Dialect.F


# ---------------------------------------------------------------------------
# Queries and ABoxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CQ:
    """A unary conjunctive query, viewed as a set of atoms.

    ``concept_atoms`` holds pairs ``(concept name or "top", variable)`` and
    ``role_atoms`` triples ``(role name, subject, object)``.  ``var_meta`` is
    an optional per-variable annotation map (the frontier constructions stash
    their variable-origin bookkeeping there); it is ignored by equality.
    """

    answer_var: str
    concept_atoms: frozenset[tuple[str, str]] = frozenset()
    role_atoms: frozenset[tuple[str, str, str]] = frozenset()
    var_meta: Optional[Mapping[str, Optional[str]]] = field(
        default=None, compare=False, hash=False
    )

    def variables(self) -> frozenset[str]:
        out = {self.answer_var}
        out.update(v for _, v in self.concept_atoms)
        for _, x, y in self.role_atoms:
            out.add(x)
            out.add(y)
        return frozenset(out)

    def concepts_at(self, v: str) -> frozenset[str]:
        return frozenset(a for a, w in self.concept_atoms if w == v and a != TOP)

    def neighbors(self, v: str) -> list[tuple[Role, str]]:
        """All (role-as-seen-from-v, other endpoint) pairs, inverses included."""
        out = []
        for r, x, y in self.role_atoms:
            if x == v:
                out.append((Role(r), y))
            if y == v:
                out.append((Role(r, True), x))
        return out

    def is_connected(self) -> bool:
        seen = {self.answer_var}
        frontier = [self.answer_var]
        while frontier:
            v = frontier.pop()
            for _, w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen == self.variables()

    def is_eliq(self) -> bool:
        """True iff the Gaifman graph is a tree without self-loops/multi-edges."""
        pairs = set()
        for r, x, y in self.role_atoms:
            if x == y:
                return False
            key = (x, y) if x <= y else (y, x)
            if key in pairs:
                return False
            pairs.add(key)
        return self.is_connected() and len(pairs) == len(self.variables()) - 1

    def to_abox(self) -> "ABox":
        concepts = self.concept_atoms
        mentioned = {v for _, v in concepts} | {v for _, x, y in self.role_atoms for v in (x, y)}
        if self.answer_var not in mentioned:
            concepts = concepts | {(TOP, self.answer_var)}
        return ABox(concepts, self.role_atoms)

    def signature(self) -> tuple[frozenset[str], frozenset[str]]:
        names = frozenset(a for a, _ in self.concept_atoms if a != TOP)
        roles = frozenset(r for r, _, _ in self.role_atoms)
        return names, roles


@dataclass(frozen=True)
class ABox:
    """A finite set of concept and role assertions over individual names."""

    concept_assertions: frozenset[tuple[str, str]] = frozenset()
    role_assertions: frozenset[tuple[str, str, str]] = frozenset()

    def ind(self) -> frozenset[str]:
        out = set(a for _, a in self.concept_assertions)
        for _, a, b in self.role_assertions:
            out.add(a)
            out.add(b)
        return frozenset(out)

    def to_cq(self, answer_var: str) -> CQ:
        if answer_var not in self.ind() and (self.concept_assertions or self.role_assertions):
            raise ValueError(f"answer variable {answer_var!r} does not occur in the ABox")
        return CQ(answer_var, self.concept_assertions, self.role_assertions)


def make_cq(
    answer_var: str,
    concept_atoms: Iterable[tuple[str, str]] = (),
    role_atoms: Iterable[tuple[Role | str, str, str]] = (),
    var_meta: Optional[Mapping[str, Optional[str]]] = None,
) -> CQ:
    """Canonicalizing CQ constructor: inverse role atoms are stored forward,
    and redundant ``top`` atoms are dropped (every variable satisfies top;
    the atom-less single-variable query is the top query)."""
    ratoms = set()
    for r, x, y in role_atoms:
        if isinstance(r, Role):
            if r.inverted:
                ratoms.add((r.name, y, x))
            else:
                ratoms.add((r.name, x, y))
        else:
            ratoms.add((r, x, y))
    catoms = frozenset(p for p in concept_atoms if p[0] != TOP)
    return CQ(answer_var, catoms, frozenset(ratoms), var_meta)


def top_query(answer_var: str = "x0") -> CQ:
    return CQ(answer_var)


# ---------------------------------------------------------------------------
# ELIQ <-> ELI concept correspondence
# ---------------------------------------------------------------------------


def tree_order(q: CQ) -> dict[str, tuple[Optional[str], Optional[Role]]]:
    """Parent map of an ELIQ: variable -> (parent, role from parent).

    The answer variable maps to (None, None).  Raises NotAnEliqError if the
    query is not tree-shaped.
    """
    if not q.is_eliq():
        raise NotAnEliqError(f"not an ELIQ: {q.concept_atoms | q.role_atoms}")
    parent: dict[str, tuple[Optional[str], Optional[Role]]] = {q.answer_var: (None, None)}
    frontier = [q.answer_var]
    while frontier:
        v = frontier.pop()
        for role, w in sorted(q.neighbors(v), key=lambda p: (str(p[0]), p[1])):
            if w not in parent:
                parent[w] = (v, role)
                frontier.append(w)
    return parent


def subtree_vars(q: CQ, root: str) -> frozenset[str]:
    """Variables of the subtree of an ELIQ rooted at ``root``."""
    parent = tree_order(q)
    children: dict[str, list[str]] = {}
    for v, (p, _) in parent.items():
        if p is not None:
            children.setdefault(p, []).append(v)
    out = set()
    stack = [root]
    while stack:
        v = stack.pop()
        out.add(v)
        stack.extend(children.get(v, ()))
    return frozenset(out)


def restrict(q: CQ, keep: frozenset[str] | set[str]) -> CQ:
    """Restriction of ``q`` to atoms mentioning only variables in ``keep``."""
    return CQ(
        q.answer_var,
        frozenset((a, v) for a, v in q.concept_atoms if v in keep),
        frozenset(t for t in q.role_atoms if t[1] in keep and t[2] in keep),
    )


def subquery_at(q: CQ, root: str) -> CQ:
    """The ELIQ q_root: the subtree of ``q`` rooted at ``root``, with ``root``
    as answer variable."""
    keep = subtree_vars(q, root)
    r = restrict(q, keep)
    return CQ(root, r.concept_atoms, r.role_atoms)


def eliq_to_concept(q: CQ) -> ELIConcept:
    """View a tree-shaped query as an ELI concept (inverse of concept_to_eliq)."""
    parent = tree_order(q)
    children: dict[str, list[tuple[Role, str]]] = {}
    for v, (p, role) in parent.items():
        if p is not None:
            assert role is not None
            children.setdefault(p, []).append((role, v))

    def build(v: str) -> ELIConcept:
        parts = [atom(a) for a in sorted(q.concepts_at(v))]
        for role, w in sorted(children.get(v, ()), key=lambda p: (str(p[0]), p[1])):
            parts.append(exists(role, build(w)))
        return conj(parts)

    return build(q.answer_var)


def concept_to_eliq(c: ELIConcept, answer_var: str = "x0") -> CQ:
    """View an ELI concept as a tree-shaped query rooted at ``answer_var``."""
    concept_atoms: set[tuple[str, str]] = set()
    role_atoms: set[tuple[str, str, str]] = set()
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"x{counter[0]}"

    def build(cur: ELIConcept, v: str) -> None:
        if cur.kind == "top":
            return
        if cur.kind == "name":
            concept_atoms.add((cur.name, v))  # type: ignore[arg-type]
            return
        if cur.kind == "and":
            for p in cur.parts:
                build(p, v)
            return
        w = fresh()
        role = cur.role
        assert role is not None
        if role.inverted:
            role_atoms.add((role.name, w, v))
        else:
            role_atoms.add((role.name, v, w))
        build(cur.filler, w)  # type: ignore[arg-type]

    build(c, answer_var)
    return CQ(answer_var, frozenset(concept_atoms), frozenset(role_atoms))


def combined_signature(o: Ontology, *qs: CQ) -> tuple[frozenset[str], frozenset[str]]:
    names, roles = o.signature()
    names, roles = set(names), set(roles)
    for q in qs:
        n, r = q.signature()
        names |= n
        roles |= r
    return frozenset(names), frozenset(roles)
