"""Universal-model prefixes and homomorphism search.

The canonical (chase) model of an ABox and a normal-form ontology consists of
the closed ABox plus trees of anonymous *trace* nodes hanging below
individuals.  Certain answers coincide with homomorphic matches into this
model, so all containment checks reduce to anchored homomorphism tests.

Two access paths are provided:

* ``universal_prefix`` materializes every trace of length up to a requested
  depth into an inspectable ``UniversalModelPrefix`` (also serializable to
  JSON for diagnostics);
* ``_PrefixWindow`` expands trace nodes lazily during homomorphism search so
  that deep prefixes are never built unless a match actually explores them.

Tree-shaped queries are interned into a global subtree pool and matched with
a feasibility DP memoized per (subtree, model node); the pool is shared with
the brute-force enumerators, so repeated checks of structurally overlapping
queries against one ABox reuse each other's work.  Queries with cycles fall
back to plain backtracking over the same lazy node space (cyclic queries can
fold onto anonymous tree parts, so they are *not* restricted to ABox
individuals).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .engine import ABoxContext, RKey, context_for, rinv, role_of
from .errors import NotAnEliqError
from .syntax import ABox, CQ, Ontology, Role, tree_order

# ---------------------------------------------------------------------------
# Interned rooted trees
# ---------------------------------------------------------------------------

_POOL: dict[tuple, int] = {}
_STRUCT: list[tuple] = []
_SIZE: list[int] = []


def intern_tree(labels: frozenset, children: tuple) -> int:
    key = (labels, children)
    tid = _POOL.get(key)
    if tid is None:
        tid = len(_STRUCT)
        _POOL[key] = tid
        _STRUCT.append(key)
        _SIZE.append(1 + sum(_SIZE[c] for _, c in children))
    return tid


def tree_struct(tid: int) -> tuple:
    return _STRUCT[tid]


def tree_size(tid: int) -> int:
    return _SIZE[tid]


def intern_cq(q: CQ) -> int:
    """Intern a tree-shaped query, rooted at its answer variable."""
    parent = tree_order(q)
    children: dict[str, list[tuple[Role, str]]] = {}
    for v, (p, role) in parent.items():
        if p is not None:
            assert role is not None
            children.setdefault(p, []).append((role, v))

    def build(v: str) -> int:
        kids = tuple(
            sorted(
                ((role.name, role.inverted), build(w))
                for role, w in children.get(v, ())
            )
        )
        return intern_tree(q.concepts_at(v), kids)

    return build(q.answer_var)


def tree_to_cq(tid: int, answer_var: str = "x0") -> CQ:
    concept_atoms: set[tuple[str, str]] = set()
    role_atoms: set[tuple[str, str, str]] = set()
    counter = [0]

    def build(t: int, v: str) -> None:
        labels, children = tree_struct(t)
        concept_atoms.update((a, v) for a in labels)
        for (rname, inv), child in children:
            counter[0] += 1
            w = f"x{counter[0]}"
            role_atoms.add((rname, w, v) if inv else (rname, v, w))
            build(child, w)

    build(tid, answer_var)
    return CQ(answer_var, frozenset(concept_atoms), frozenset(role_atoms))


_ENUM_CACHE: dict[tuple, list[int]] = {}


def tree_ids_upto(names: frozenset[str], roles: frozenset[str], max_vars: int) -> list[int]:
    """All rooted labeled trees with at most ``max_vars`` nodes, one id per
    isomorphism class, ordered by size."""
    key = (tuple(sorted(names)), tuple(sorted(roles)), max_vars)
    hit = _ENUM_CACHE.get(key)
    if hit is not None:
        return hit

    sorted_names = sorted(names)
    labels = []
    for mask in range(1 << len(sorted_names)):
        labels.append(frozenset(n for i, n in enumerate(sorted_names) if mask >> i & 1))
    labels.sort(key=sorted)
    edges: list[RKey] = sorted((r, inv) for r in sorted(roles) for inv in (False, True))

    by_size: dict[int, list[int]] = {}
    attachments: list[tuple[int, RKey, int]] = []  # (subtree size, edge, tid)
    for size in range(1, max_vars + 1):
        ids = []
        if size == 1:
            ids = [intern_tree(lab, ()) for lab in labels]
        else:
            combos: list[tuple] = []

            def rec(remaining: int, start: int, acc: list) -> None:
                if remaining == 0:
                    combos.append(tuple(acc))
                    return
                for i in range(start, len(attachments)):
                    s, e, t = attachments[i]
                    if s > remaining:
                        break  # attachments sorted by size
                    acc.append((e, t))
                    rec(remaining - s, i, acc)
                    acc.pop()

            rec(size - 1, 0, [])
            for lab in labels:
                for kids in combos:
                    ids.append(intern_tree(lab, tuple(sorted(kids))))
        by_size[size] = ids
        for t in ids:
            for e in edges:
                attachments.append((size, e, t))
        attachments.sort(key=lambda a: (a[0], a[1], a[2]))

    out = [t for size in range(1, max_vars + 1) for t in by_size[size]]
    _ENUM_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# Lazy prefix window
# ---------------------------------------------------------------------------

# A node is either an individual name (str) or a trace tuple
# ("t", base individual, ((role key, seed names), ...)).


class _PrefixWindow:
    def __init__(self, ctx: ABoxContext, depth_cap: int):
        self.ctx = ctx
        self.eng = ctx.engine
        self.cap = depth_cap
        self._children: dict = {}

    def names(self, node) -> frozenset[str]:
        if isinstance(node, str):
            return self.ctx.names_at(node)
        _, _, path = node
        rk, seed = path[-1]
        return self.eng.names_of(self.eng.type_facts((seed, rk)))

    def children(self, node) -> list[tuple[RKey, tuple]]:
        hit = self._children.get(node)
        if hit is not None:
            return hit
        out: list[tuple[RKey, tuple]] = []
        if isinstance(node, str):
            for child in self.ctx.fired_children(node):
                if not child.blocked:
                    out.append((child.role, ("t", node, ((child.role, child.seed),))))
        else:
            _, base, path = node
            if len(path) < self.cap:
                rk, seed = path[-1]
                for crk, cw in self.eng.type_children((seed, rk)):
                    out.append((crk, ("t", base, path + ((crk, cw),))))
        self._children[node] = out
        return out

    def neighbors(self, node, want: RKey) -> Iterator:
        if isinstance(node, str):
            yield from self.ctx.successors.get((node, want), ())
        else:
            _, base, path = node
            inc = path[-1][0]
            if rinv(want) in self.eng.superroles(inc):
                yield base if len(path) == 1 else ("t", base, path[:-1])
        for crk, child in self.children(node):
            if want in self.eng.superroles(crk):
                yield child

    def all_nodes_upto(self, depth: int) -> list:
        out: list = []
        frontier: list = list(self.ctx.individuals)
        out.extend(frontier)
        for _ in range(depth):
            nxt = []
            for n in frontier:
                for _, child in self.children(n):
                    if not isinstance(child, str):
                        nxt.append(child)
            out.extend(nxt)
            frontier = nxt
        return out


def _tree_feasible(win: _PrefixWindow, memo: dict, tid: int, node) -> bool:
    key = (tid, node)
    hit = memo.get(key)
    if hit is not None:
        return hit
    labels, children = tree_struct(tid)
    ok = labels <= win.names(node)
    if ok:
        memo[key] = False  # cycle guard; trees cannot recurse, but be safe
        for rk, child_tid in children:
            if not any(
                _tree_feasible(win, memo, child_tid, m) for m in win.neighbors(node, rk)
            ):
                ok = False
                break
    memo[key] = ok
    return ok


def _backtrack(win: _PrefixWindow, q: CQ, assignment: dict, order: list[str]) -> bool:
    if not order:
        return True
    v = order[0]
    candidates = None
    for role, w in q.neighbors(v):
        if w in assignment:
            found = set()
            for m in win.neighbors(assignment[w], (role.name, not role.inverted)):
                # role as seen from v: w --inv--> v means v --role--> w
                found.add(m)
            candidates = found if candidates is None else candidates & found
    if candidates is None:
        candidates = set(win.all_nodes_upto(len(q.variables())))
    needed = q.concepts_at(v)
    for m in candidates:
        if needed <= win.names(m):
            assignment[v] = m
            if _backtrack(win, q, assignment, order[1:]):
                return True
            del assignment[v]
    return False


def _bfs_order(q: CQ, first: str) -> list[str]:
    seen = [first]
    i = 0
    while i < len(seen):
        for _, w in sorted(q.neighbors(seen[i]), key=lambda p: (str(p[0]), p[1])):
            if w not in seen:
                seen.append(w)
        i += 1
    for v in sorted(q.variables()):
        if v not in seen:
            seen.append(v)  # disconnected parts, matched unanchored
    return seen


def matches(ctx: ABoxContext, q: CQ, anchor: str) -> bool:
    """Anchored homomorphism test: q(answer) -> (universal model, anchor)."""
    cap = len(q.variables())
    if q.is_eliq():
        win = _PrefixWindow(ctx, cap)
        memo = ctx.__dict__.setdefault("_hom_memos", {}).setdefault(cap, {})
        return _tree_feasible(win, memo, intern_cq(q), anchor)
    win = _PrefixWindow(ctx, cap)
    order = _bfs_order(q, q.answer_var)
    needed = q.concepts_at(q.answer_var)
    if not needed <= win.names(anchor):
        return False
    return _backtrack(win, q, {q.answer_var: anchor}, order[1:])


# ---------------------------------------------------------------------------
# Materialized prefixes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    """An anonymous node: an origin individual plus (role, label) steps."""

    origin: str
    steps: tuple[tuple[Role, frozenset[str]], ...]

    def __str__(self) -> str:
        parts = [self.origin]
        for role, label in self.steps:
            parts.append(f"{role}[{','.join(sorted(label)) or 'top'}]")
        return "/".join(parts)


@dataclass(frozen=True)
class UniversalModelPrefix:
    """Depth-bounded prefix of the universal model of an ABox and ontology."""

    base: ABox
    trace_nodes: tuple[Trace, ...]
    depth: int
    node_labels: tuple[tuple[str, frozenset[str]], ...]
    edges: tuple[tuple[str, str, str], ...]

    def labels_of(self) -> dict[str, frozenset[str]]:
        return dict(self.node_labels)

    def to_json(self) -> str:
        return json.dumps(
            {
                "depth": self.depth,
                "nodes": [
                    {"id": node, "concepts": sorted(labels)}
                    for node, labels in sorted(self.node_labels)
                ],
                "edges": sorted(self.edges),
            },
            indent=2,
            sort_keys=True,
        )


def build_prefix(ctx: ABoxContext, depth: int) -> UniversalModelPrefix:
    eng = ctx.engine
    closed_concepts = set()
    for a in ctx.individuals:
        closed_concepts.add(("top", a))
        closed_concepts.update((n, a) for n in ctx.names_at(a))
    closed_roles = set()
    for (a, b), roles in ctx.edge_roles.items():
        for rname, inv in roles:
            if not inv:
                closed_roles.add((rname, a, b))
    base = ABox(frozenset(closed_concepts), frozenset(closed_roles))

    labels: dict[str, frozenset[str]] = {a: ctx.names_at(a) for a in ctx.individuals}
    edges: set[tuple[str, str, str]] = set(closed_roles)
    traces: list[Trace] = []

    def trace_label(rk: RKey, seed: frozenset) -> frozenset[str]:
        if eng.functional:
            # DL-Lite_F labels are the maximal concept-name sets.
            return eng.names_of(eng.type_facts((seed, rk)))
        return seed

    def node_id(origin: str, path) -> str:
        return str(Trace(origin, tuple(path)))

    frontier: list[tuple[str, tuple, RKey, frozenset]] = []

    def push(origin, path, parent_id, rk, seed):
        label = trace_label(rk, seed)
        new_path = path + ((role_of(rk), label),)
        t = Trace(origin, new_path)
        traces.append(t)
        tid = str(t)
        labels[tid] = eng.names_of(eng.type_facts((seed, rk)))
        for s in eng.superroles(rk):
            rname, inv = s
            edges.add((rname, tid, parent_id) if inv else (rname, parent_id, tid))
        frontier.append((origin, new_path, rk, seed))

    def dedup_maximal(children):
        if not eng.functional:
            return children
        out = []
        for rk, seed in children:
            m = eng.names_of(eng.type_facts((seed, rk)))
            dominated = False
            for rk2, seed2 in children:
                if rk2 == rk and seed2 != seed:
                    m2 = eng.names_of(eng.type_facts((seed2, rk2)))
                    if m < m2:
                        dominated = True
                        break
            if not dominated and (rk, seed) not in [(r, s) for r, s in out]:
                out.append((rk, seed))
        return out

    if depth >= 1:
        for a in ctx.individuals:
            kids = [
                (c.role, c.seed) for c in ctx.fired_children(a) if not c.blocked
            ]
            for rk, seed in dedup_maximal(kids):
                push(a, (), a, rk, seed)
    for _ in range(depth - 1):
        prev, frontier = frontier, []
        for origin, path, rk, seed in prev:
            parent_id = node_id(origin, path)
            for crk, cw in dedup_maximal(eng.type_children((seed, rk))):
                push(origin, path, parent_id, crk, cw)

    return UniversalModelPrefix(
        base,
        tuple(traces),
        depth,
        tuple(sorted(labels.items())),
        tuple(sorted(edges)),
    )
