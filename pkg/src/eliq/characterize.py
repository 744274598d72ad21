"""Unique characterization of tree-shaped queries by labeled data examples.

A query's frontier gives an example set that pins the query down up to
equivalence: the query's own ABox is the single positive example, and each
frontier member's ABox is a negative example.  Any query fitting those
examples is squeezed between the positives (it generalizes q) and the
negatives (no frontier member may be contained in it), which by frontier
completeness forces equivalence with q.

``verify_unique`` double-checks this at desk scale by enumerating every
candidate query up to a variable bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsatisfiableError
from .frontier_base import reject_unsupported
from .frontier_f import frontier_f
from .frontier_r import frontier_r
from .reasoner import certain_answer, contained, enumerate_eliqs, query_satisfiable
from .syntax import ABox, CQ, Dialect, Ontology, combined_signature, dialect_of


@dataclass(frozen=True)
class DataExample:
    abox: ABox
    individual: str
    positive: bool

    def __post_init__(self):
        if self.individual not in self.abox.ind():
            raise ValueError("example individual must occur in its ABox")


@dataclass(frozen=True)
class ExampleSet:
    positives: tuple[DataExample, ...]
    negatives: tuple[DataExample, ...]


_CHARACTERIZABLE = frozenset({Dialect.CORE, Dialect.R, Dialect.F_RESTRICTED})


def characterize(o: Ontology, q: CQ) -> ExampleSet:
    """An example set that uniquely characterizes ``q`` w.r.t. ``o``.

    Positive: the query's own ABox, anchored at the answer variable.
    Negative: one example per frontier member (its ABox, anchored at the
    member's answer variable; member variables double as individual names).
    """
    reject_unsupported(o, _CHARACTERIZABLE, "characterize")
    if not query_satisfiable(o, q):
        raise UnsatisfiableError("characterize requires a query satisfiable w.r.t. the ontology")
    frontier = frontier_f(o, q) if dialect_of(o) is Dialect.F_RESTRICTED else frontier_r(o, q)
    positives = (DataExample(q.to_abox(), q.answer_var, True),)
    negatives = tuple(
        DataExample(m.to_abox(), m.answer_var, False) for m in frontier.members
    )
    return ExampleSet(positives, negatives)


def fits(o: Ontology, q: CQ, e: ExampleSet) -> bool:
    """Does ``q`` answer every positive example and no negative one?"""
    for ex in e.positives:
        if not certain_answer(o, ex.abox, q, ex.individual):
            return False
    for ex in e.negatives:
        if certain_answer(o, ex.abox, q, ex.individual):
            return False
    return True


@dataclass(frozen=True)
class UniquenessVerdict:
    ok: bool
    counterexample: CQ | None = None
    candidates_checked: int = 0


def verify_unique(o: Ontology, q: CQ, e: ExampleSet, bound: int) -> UniquenessVerdict:
    """Search for a fitting query not equivalent to ``q``, up to ``bound``
    variables over the combined signature.

    Candidates unsatisfiable w.r.t. ``o`` are skipped: a functionality
    violation folds to an enumerated equivalent, and a disjointness clash
    cannot fit the positive example of a satisfiable query anyway.

    Works directly on the interned candidate pool so homomorphism results
    are shared across candidates with common subtrees.
    """
    from .engine import context_for
    from .bruteforce import _anchored, _satisfiable_tree
    from .model import tree_ids_upto, tree_size, tree_to_cq

    if bound < len(q.variables()):
        raise ValueError("bound must be at least the query's variable count")
    names, roles = combined_signature(o, q)
    eng = context_for(o, q.to_abox()).engine
    pos_ctxs = [(context_for(o, ex.abox), ex.individual) for ex in e.positives]
    neg_ctxs = [(context_for(o, ex.abox), ex.individual) for ex in e.negatives]
    has_disj = bool(o.concept_disjointness or o.role_disjointness)
    checked = 0
    for tid in tree_ids_upto(names, roles, bound):
        if not _satisfiable_tree(o, tid, eng):
            continue
        cap = tree_size(tid)
        if not all(_anchored(ctx, tid, ind, cap) for ctx, ind in pos_ctxs):
            continue
        if has_disj and not query_satisfiable(o, tree_to_cq(tid)):
            continue
        checked += 1
        if any(_anchored(ctx, tid, ind, cap) for ctx, ind in neg_ctxs):
            continue
        cand = tree_to_cq(tid)
        if not query_satisfiable(o, cand):
            continue
        if not (contained(o, cand, q) and contained(o, q, cand)):
            return UniquenessVerdict(False, cand, checked)
    return UniquenessVerdict(True, None, checked)
