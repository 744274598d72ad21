"""Normal-form conversion for DL-Lite ontologies.

A concept inclusion is in normal form if it has one of the shapes

    A sub B      (A a concept name or top, B a basic concept)
    B sub A      (B a basic concept, A a concept name or top)
    A sub some R . A'   (A, A' concept names or top)

In particular ``some R sub some S`` and CIs with a compound right-hand side
are not normal.  Conversion introduces one fresh surrogate name ``_X<n>`` per
distinct complex right-hand-side subconcept and is a conservative extension:
entailment between basic concepts over the original signature is unchanged.
Already-normal inclusions are kept verbatim, so conversion is idempotent.
"""

from __future__ import annotations

from .syntax import (
    BasicConcept,
    CQ,
    ELIConcept,
    Ontology,
    atom,
    basic_name,
    concept_to_basic,
    exists,
)

FRESH_PREFIX = "_X"


def _is_name_or_top(c: ELIConcept) -> bool:
    return c.kind in ("name", "top")


def _basic_is_name_or_top(b: BasicConcept) -> bool:
    return b.kind in ("name", "top")


def is_normal_ci(lhs: BasicConcept, rhs: ELIConcept) -> bool:
    if _is_name_or_top(rhs):
        return True  # B sub A
    if _basic_is_name_or_top(lhs):
        if rhs.is_basic():
            return True  # A sub B
        if rhs.kind == "exists" and _is_name_or_top(rhs.filler):  # type: ignore[arg-type]
            return True  # A sub some R . A'
    return False


def is_normal_form(o: Ontology) -> bool:
    return all(is_normal_ci(lhs, rhs) for lhs, rhs in o.concept_inclusions)


def normalize(o: Ontology) -> tuple[Ontology, dict[str, ELIConcept]]:
    """Convert ``o`` to normal form.

    Returns the converted ontology together with the map from fresh surrogate
    names to the complex concepts they stand for (used by the learner to
    rewrite membership-query ABoxes back into the original vocabulary).
    """
    fresh: dict[ELIConcept, str] = {}
    fresh_map: dict[str, ELIConcept] = {}
    extra: list[tuple[BasicConcept, ELIConcept]] = []
    counter = [0]

    def surrogate(c: ELIConcept) -> ELIConcept:
        """A name-or-top concept X_c with (recursively emitted) X_c sub c rules."""
        if _is_name_or_top(c):
            return c
        if c in fresh:
            return atom(fresh[c])
        counter[0] += 1
        name = f"{FRESH_PREFIX}{counter[0]}"
        fresh[c] = name
        fresh_map[name] = c
        if c.kind == "and":
            for part in c.parts:
                extra.append((basic_name(name), surrogate(part)))
        else:  # exists
            assert c.kind == "exists" and c.role is not None and c.filler is not None
            extra.append((basic_name(name), exists(c.role, surrogate(c.filler))))
        return atom(name)

    cis: list[tuple[BasicConcept, ELIConcept]] = []
    for lhs, rhs in o.concept_inclusions:
        if is_normal_ci(lhs, rhs):
            cis.append((lhs, rhs))
            continue
        if rhs.is_basic() or (rhs.kind == "exists" and _is_name_or_top(rhs.filler)):  # type: ignore[arg-type]
            # Only the left-hand side is offending; introduce one indirection.
            counter[0] += 1
            name = f"{FRESH_PREFIX}{counter[0]}"
            fresh_map[name] = rhs
            cis.append((lhs, atom(name)))
            extra.append((basic_name(name), rhs))
        else:
            cis.append((lhs, surrogate(rhs)))
    cis.extend(extra)
    normalized = Ontology(
        tuple(cis),
        o.role_inclusions,
        o.concept_disjointness,
        o.role_disjointness,
        o.functional,
    )
    assert is_normal_form(normalized)
    return normalized, fresh_map


def expand_surrogates(q: CQ, fresh_map: dict[str, ELIConcept], glue) -> CQ:
    """Replace every surrogate atom ``X_C(v)`` in ``q`` by a copy of ``C``
    viewed as a tree glued at ``v``.

    ``glue(q, v, concept, tag)`` performs the attachment and returns the new
    query; it is dialect-specific (plain for role-inclusion ontologies,
    functionality-respecting otherwise).
    """
    if not fresh_map:
        return q
    work = q
    k = 0
    for name, v in sorted(q.concept_atoms):
        if name in fresh_map:
            work = CQ(
                work.answer_var,
                work.concept_atoms - {(name, v)},
                work.role_atoms,
                work.var_meta,
            )
            work = glue(work, v, fresh_map[name], f"x{k}")
            k += 1
    return work
