"""Entailment closure engine for normal-form DL-Lite.

Facts about a single element are represented as keys:

    ("c", A)          element satisfies concept name A
    ("e", (r, inv))   element has a successor along role r / r-
    ("top",)          always present

``Engine`` indexes a (normalized) ontology and computes:

* ``closure`` — the basic-concept consequences of a set of facts;
* witness types — the anonymous elements generated by existential
  right-hand sides, keyed by (filler names, incoming role).  Functional
  roles merge all fillers into a single witness, and a witness whose
  entailed inverse existential points back along a functional role feeds
  its filler names back to the parent.  Both effects are stabilized by a
  dependency-tracked fixpoint, so entailment is sound and complete for
  DL-Lite with role inclusions and for DL-Lite with functionality
  (including the unrestricted dialect); for the combined dialect the
  fixpoint is a best-effort approximation and the universal-model
  machinery refuses to run.

``ABoxContext`` applies the same closure to the individuals of an ABox,
including propagation of existential fillers across asserted edges of
functional roles, and decides satisfiability.
"""

from __future__ import annotations

from dataclasses import dataclass

from .normalform import normalize
from .syntax import ABox, BasicConcept, Dialect, Ontology, Role, dialect_of

TOPK = ("top",)

RKey = tuple[str, bool]


def rkey(r: Role) -> RKey:
    return (r.name, r.inverted)


def rinv(k: RKey) -> RKey:
    return (k[0], not k[1])


def role_of(k: RKey) -> Role:
    return Role(k[0], k[1])


def basic_key(b: BasicConcept):
    if b.kind == "top":
        return TOPK
    if b.kind == "name":
        return ("c", b.name)
    return ("e", rkey(b.role))  # type: ignore[arg-type]


# A witness type: the anonymous element created below some node, identified
# by its seed concept names and the role it was reached by.
TypeKey = tuple[frozenset, RKey]


class Engine:
    def __init__(self, o: Ontology):
        self.original = o
        self.dialect = dialect_of(o)
        self.o, self.fresh_map = normalize(o)
        self.functional: frozenset[RKey] = frozenset(rkey(r) for r in self.o.functional)

        names, roles = self.o.signature()
        self.names = frozenset(names)
        self.original_names = frozenset(o.signature()[0])
        self.role_keys: frozenset[RKey] = frozenset(
            (r, inv) for r in roles for inv in (False, True)
        )
        self._superroles = self._close_roles()

        # CI indexes over fact keys. Existential right-hand sides are stored
        # as (role key, filler name or None) witness specs; they also imply
        # the plain ("e", role) fact.
        self.to_basic: dict = {}
        self.to_exists: dict = {}
        for lhs, rhs in self.o.concept_inclusions:
            lk = basic_key(lhs)
            if rhs.kind in ("top", "name"):
                self.to_basic.setdefault(lk, []).append(
                    TOPK if rhs.kind == "top" else ("c", rhs.name)
                )
            else:
                assert rhs.kind == "exists"
                filler = rhs.filler
                fname = None if filler is None or filler.kind == "top" else filler.name
                self.to_exists.setdefault(lk, []).append((rkey(rhs.role), fname))

        self.cdisj_keys = [
            (basic_key(b1), basic_key(b2)) for b1, b2 in self.o.concept_disjointness
        ]
        self.rdisj_keys = [(rkey(r1), rkey(r2)) for r1, r2 in self.o.role_disjointness]

        self._closure_cache: dict[frozenset, frozenset] = {}
        # Witness-type fixpoint state.
        self._tfacts: dict[TypeKey, frozenset] = {}
        self._tfeedback: dict[TypeKey, frozenset] = {}
        self._tdeps: dict[TypeKey, set[TypeKey]] = {}
        self._tchildren: dict[TypeKey, list] = {}
        self._tunsat: dict[TypeKey, bool] = {}
        self._fired_cache: dict = {}
        self._childfrom_cache: dict = {}
        self._supinv_cache: dict[RKey, tuple[frozenset, frozenset]] = {}

    # -- role hierarchy ----------------------------------------------------

    def _close_roles(self) -> dict[RKey, frozenset]:
        sup: dict[RKey, set[RKey]] = {k: {k} for k in self.role_keys}
        edges = []
        for r1, r2 in self.o.role_inclusions:
            edges.append((rkey(r1), rkey(r2)))
            edges.append((rkey(r1.inverse()), rkey(r2.inverse())))
        changed = True
        while changed:
            changed = False
            for a, b in edges:
                sa = sup.setdefault(a, {a})
                sb = sup.setdefault(b, {b})
                if not sb <= sa:
                    sa |= sb
                    changed = True
        return {k: frozenset(v) for k, v in sup.items()}

    def superroles(self, k: RKey) -> frozenset:
        return self._superroles.get(k, frozenset({k}))

    def subsumes_role(self, sub: RKey, sup_: RKey) -> bool:
        return sup_ in self.superroles(sub)

    # -- basic closure -----------------------------------------------------

    def closure(self, seed) -> frozenset:
        fseed = frozenset(seed)
        hit = self._closure_cache.get(fseed)
        if hit is not None:
            return hit
        facts = set(fseed)
        facts.add(TOPK)
        changed = True
        while changed:
            changed = False
            for f in list(facts):
                if f[0] == "e":
                    for s in self.superroles(f[1]):
                        key = ("e", s)
                        if key not in facts:
                            facts.add(key)
                            changed = True
            for lhs, rhss in self.to_basic.items():
                if lhs in facts:
                    for rhs in rhss:
                        if rhs not in facts:
                            facts.add(rhs)
                            changed = True
            for lhs, specs in self.to_exists.items():
                if lhs in facts:
                    for rk, _ in specs:
                        key = ("e", rk)
                        if key not in facts:
                            facts.add(key)
                            changed = True
        out = frozenset(facts)
        self._closure_cache[fseed] = out
        return out

    def fired(self, facts) -> list[tuple[RKey, str | None]]:
        """Existential witness specs whose left-hand side holds in ``facts``."""
        if not isinstance(facts, frozenset):
            facts = frozenset(facts)
        hit = self._fired_cache.get(facts)
        if hit is not None:
            return hit
        out = set()
        for lhs, specs in self.to_exists.items():
            if lhs in facts:
                out.update(specs)
        result = sorted(out, key=lambda s: (s[0], s[1] or ""))
        self._fired_cache[facts] = result
        return result

    def names_of(self, facts) -> frozenset[str]:
        return frozenset(f[1] for f in facts if f[0] == "c")

    # -- witness types -----------------------------------------------------

    def _type_seed(self, key: TypeKey) -> frozenset:
        w, inc = key
        return frozenset({("c", n) for n in w} | {("e", rinv(inc))})

    def type_facts(self, key: TypeKey) -> frozenset:
        if key not in self._tfacts:
            self._stabilize(key)
        return self._tfacts[key]

    def type_children(self, key: TypeKey) -> list[tuple[RKey, frozenset]]:
        """Child types of a witness: (role, child key-names) pairs.

        Mirrors the universal-model trace step: one merged child per
        functional role, one child per fired filler otherwise, and no child
        back along ``inc-`` when ``inc-`` is functional (the parent itself
        serves as that successor).
        """
        hit = self._tchildren.get(key)
        if hit is None:
            hit = self._children_from(self.type_facts(key), key[1])
            self._tchildren[key] = hit
        return hit

    def _children_from(self, facts, inc: RKey | None) -> list[tuple[RKey, frozenset]]:
        if not isinstance(facts, frozenset):
            facts = frozenset(facts)
        hit = self._childfrom_cache.get((facts, inc))
        if hit is not None:
            return hit
        by_role: dict[RKey, list[str | None]] = {}
        for rk, fname in self.fired(facts):
            by_role.setdefault(rk, []).append(fname)
        out: list[tuple[RKey, frozenset]] = []
        for rk in sorted(by_role):
            if inc is not None and rk == rinv(inc) and rinv(inc) in self.functional:
                continue  # merged into the parent
            fillers = by_role[rk]
            if rk in self.functional:
                out.append((rk, frozenset(n for n in fillers if n is not None)))
            else:
                seen = set()
                for n in fillers:
                    w = frozenset() if n is None else frozenset({n})
                    if w not in seen:
                        seen.add(w)
                        out.append((rk, w))
        self._childfrom_cache[(facts, inc)] = out
        return out

    def _stabilize(self, key: TypeKey) -> None:
        pending = [key]
        while pending:
            k = pending.pop()
            old_facts = self._tfacts.get(k, frozenset())
            facts = set(self.closure(self._type_seed(k) | old_facts))
            # Fold in feedback from children until locally stable.
            while True:
                grew = False
                for rk, w in self._children_from(facts, k[1]):
                    ck: TypeKey = (w, rk)
                    if ck not in self._tfacts and ck != k:
                        self._tfacts[ck] = self.closure(self._type_seed(ck))
                        pending.append(ck)
                    self._tdeps.setdefault(ck, set()).add(k)
                    for n in self._tfeedback.get(ck, frozenset()):
                        if ("c", n) not in facts:
                            facts = set(self.closure(facts | {("c", n)}))
                            grew = True
                if not grew:
                    break
            ffacts = frozenset(facts)
            feedback = self._feedback_of(ffacts, k[1])
            if ffacts != old_facts or feedback != self._tfeedback.get(k):
                self._tfacts[k] = ffacts
                self._tfeedback[k] = feedback
                self._tchildren.pop(k, None)
                self._tunsat.clear()
                pending.extend(self._tdeps.get(k, ()))

    def _feedback_of(self, facts, inc: RKey | None) -> frozenset[str]:
        """Filler names this element forces onto its parent.

        Applies when the inverse of the incoming role is functional: the
        parent is then the unique ``inc-`` successor, so every fired
        existential along ``inc-`` lands on it.
        """
        if inc is None or rinv(inc) not in self.functional:
            return frozenset()
        return frozenset(
            n for rk, n in self.fired(facts) if rk == rinv(inc) and n is not None
        )

    def type_unsat(self, key: TypeKey) -> bool:
        hit = self._tunsat.get(key)
        if hit is not None:
            return hit
        seen: set[TypeKey] = set()
        stack = [key]
        unsat = False
        while stack:
            k = stack.pop()
            if k in seen:
                continue
            seen.add(k)
            if self._tunsat.get(k) or self._type_clash(k):
                unsat = True
                break
            for rk, w in self.type_children(k):
                ck = (w, rk)
                if ck not in seen:
                    stack.append(ck)
        if unsat:
            self._tunsat[key] = True
        else:
            # no clash anywhere reachable: everything visited is satisfiable
            for k in seen:
                self._tunsat[k] = False
        return unsat

    def _type_clash(self, key: TypeKey) -> bool:
        facts = self.type_facts(key)
        if self._facts_clash(facts):
            return True
        inc = key[1]
        edge_roles = self.superroles(inc)
        for r1, r2 in self.rdisj_keys:
            if (r1 in edge_roles and r2 in edge_roles) or (
                rinv(r1) in edge_roles and rinv(r2) in edge_roles
            ):
                return True
        return False

    def _facts_clash(self, facts) -> bool:
        return any(k1 in facts and k2 in facts for k1, k2 in self.cdisj_keys)


@dataclass
class _FiredChild:
    role: RKey
    seed: frozenset  # seed concept names of the witness
    blocked: bool


class ABoxContext:
    """Closure of an ABox under an Engine's ontology."""

    def __init__(self, engine: Engine, abox: ABox):
        self.engine = engine
        self.abox = abox
        self.individuals = sorted(abox.ind())
        # Realized edges: RI-closure of asserted role assertions.
        self.edge_roles: dict[tuple[str, str], set[RKey]] = {}
        self.successors: dict[tuple[str, RKey], set[str]] = {}
        edge_roles = self.edge_roles
        successors = self.successors
        for r, a, b in abox.role_assertions:
            fwd, bwd = self._sup_and_inv(engine, (r, False))
            for x, y, ks in ((a, b, fwd), (b, a, bwd)):
                cur = edge_roles.get((x, y))
                if cur is None:
                    edge_roles[(x, y)] = set(ks)
                else:
                    cur |= ks
                for k in ks:
                    succ = successors.get((x, k))
                    if succ is None:
                        successors[(x, k)] = {y}
                    else:
                        succ.add(y)
        self.facts: dict[str, frozenset] = {}
        self._run_fixpoint()
        self._sat: bool | None = None

    @staticmethod
    def _sup_and_inv(engine: Engine, k: RKey) -> tuple[frozenset, frozenset]:
        hit = engine._supinv_cache.get(k)
        if hit is None:
            fwd = engine.superroles(k)
            hit = (fwd, frozenset(rinv(s) for s in fwd))
            engine._supinv_cache[k] = hit
        return hit

    def _seeds(self) -> dict[str, set]:
        seeds: dict[str, set] = {a: {TOPK} for a in self.individuals}
        for c, i in self.abox.concept_assertions:
            if c != "top":
                seeds[i].add(("c", c))
        for x, k in self.successors:
            seeds[x].add(("e", k))
        return seeds

    def _run_fixpoint(self) -> None:
        eng = self.engine
        cur = {a: frozenset(eng.closure(seed)) for a, seed in self._seeds().items()}
        changed = True
        while changed:
            changed = False
            for a in self.individuals:
                extra: set = set()
                # Feedback from anonymous witnesses below a.
                for rk, w in eng._children_from(cur[a], None):
                    eng.type_facts((w, rk))
                    fb = eng._tfeedback.get((w, rk), frozenset())
                    extra.update(("c", n) for n in fb)
                if extra - cur[a]:
                    cur[a] = eng.closure(cur[a] | extra)
                    changed = True
            # Fillers travel along asserted edges of functional roles.
            for a in self.individuals:
                for rk, fname in eng.fired(cur[a]):
                    if fname is None:
                        continue
                    for frole in eng.superroles(rk):
                        if frole not in eng.functional:
                            continue
                        for b in self.successors.get((a, frole), ()):
                            if ("c", fname) not in cur[b]:
                                cur[b] = eng.closure(cur[b] | {("c", fname)})
                                changed = True
        self.facts = cur

    def fired_children(self, a: str) -> list[_FiredChild]:
        eng = self.engine
        out = []
        for rk, w in eng._children_from(self.facts[a], None):
            if rk in eng.functional:
                # The (single) witness merges into any asserted successor.
                blocked = bool(self.successors.get((a, rk)))
            else:
                blocked = any(
                    w <= eng.names_of(self.facts[b])
                    for b in self.successors.get((a, rk), ())
                )
            out.append(_FiredChild(rk, w, blocked))
        return out

    def names_at(self, a: str) -> frozenset[str]:
        return self.engine.names_of(self.facts[a])

    def satisfiable(self) -> bool:
        if self._sat is None:
            self._sat = self._compute_sat()
        return self._sat

    def _compute_sat(self) -> bool:
        eng = self.engine
        for a in self.individuals:
            if eng._facts_clash(self.facts[a]):
                return False
        for pair, roles in self.edge_roles.items():
            for r1, r2 in eng.rdisj_keys:
                if r1 in roles and r2 in roles:
                    return False
        for frole in eng.functional:
            for (a, k), succ in self.successors.items():
                if k == frole and len(succ) > 1:
                    return False
        for a in self.individuals:
            for child in self.fired_children(a):
                if not child.blocked and eng.type_unsat((child.seed, child.role)):
                    return False
        return True


_ENGINES: dict[Ontology, Engine] = {}
_CONTEXTS: dict[tuple[int, ABox], ABoxContext] = {}
_CONTEXT_CAP = 512


def engine_for(o: Ontology) -> Engine:
    eng = _ENGINES.get(o)
    if eng is None:
        eng = Engine(o)
        _ENGINES[o] = eng
    return eng


def context_for(o: Ontology, abox: ABox) -> ABoxContext:
    eng = engine_for(o)
    key = (id(eng), abox)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        if len(_CONTEXTS) >= _CONTEXT_CAP:
            _CONTEXTS.clear()
        ctx = ABoxContext(eng, abox)
        _CONTEXTS[key] = ctx
    return ctx


def requires_chase_dialect(eng: Engine) -> bool:
    return eng.dialect is not Dialect.RF
