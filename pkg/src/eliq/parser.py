"""Parsing and serialization for the three text formats.

``.dlo`` — one ontology statement per line, ``#`` comments::

    role  ::= IDENT | IDENT"-"
    basic ::= "top" | IDENT | "some" role
    eli   ::= conj ; conj ::= prim ("&" prim)* ;
    prim  ::= "top" | IDENT | "some" role "." prim | "(" eli ")"
    stmt  ::= basic "sub" eli | role "rsub" role | "disj" basic basic
            | "rdisj" role role | "func" role

``.cq`` — either datalog style ``q(x0) :- A(x0), r(x0,y), r-(y,z)`` (inverse
atoms are normalized on read) or ``eliq: <eli expression>``.

``.abox`` — one assertion per line: ``A(a)`` / ``top(a)`` / ``r(a,b)``.

Serialization is deterministic (atoms sorted), and every serializer
round-trips through its parser.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .syntax import (
    ABox,
    BASIC_TOP,
    BasicConcept,
    CONCEPT_TOP,
    CQ,
    ELIConcept,
    Ontology,
    Role,
    TOP,
    atom,
    basic_exists,
    basic_name,
    conj,
    exists,
    make_cq,
)

KEYWORDS = {"top", "some", "sub", "rsub", "disj", "rdisj", "func", "eliq"}

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_.'~]*-?|[().,&:]|:-|\S)")


class _Tokens:
    def __init__(self, text: str, line: int):
        self.line = line
        self.items: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                break
            tok = m.group(1)
            if tok == ":" and text[m.end() : m.end() + 1] == "-":
                tok = ":-"
                self.items.append((tok, m.start(1) + 1))
                pos = m.end() + 1
                continue
            self.items.append((tok, m.start(1) + 1))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.items[self.i][0] if self.i < len(self.items) else None

    def col(self) -> int:
        if self.i < len(self.items):
            return self.items[self.i][1]
        return self.items[-1][1] + len(self.items[-1][0]) if self.items else 1

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line, self.col())
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}", self.line, self.col())

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", self.line, self.col())

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line, self.col())


def _is_ident(tok: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_.'~]*", tok)) and tok not in KEYWORDS


def _parse_role(ts: _Tokens) -> Role:
    tok = ts.next()
    if tok.endswith("-"):
        name = tok[:-1]
        inverted = True
    else:
        name, inverted = tok, False
    if not _is_ident(name):
        raise ts.error(f"expected a role name, got {tok!r}")
    return Role(name, inverted)


def _parse_basic(ts: _Tokens) -> BasicConcept:
    tok = ts.peek()
    if tok == TOP:
        ts.next()
        return BASIC_TOP
    if tok == "some":
        ts.next()
        return basic_exists(_parse_role(ts))
    tok = ts.next()
    if not _is_ident(tok):
        raise ts.error(f"expected a basic concept, got {tok!r}")
    return basic_name(tok)


def _parse_eli(ts: _Tokens) -> ELIConcept:
    parts = [_parse_eli_prim(ts)]
    while ts.peek() == "&":
        ts.next()
        parts.append(_parse_eli_prim(ts))
    return conj(parts) if len(parts) > 1 else parts[0]


def _parse_eli_prim(ts: _Tokens) -> ELIConcept:
    tok = ts.peek()
    if tok == TOP:
        ts.next()
        return CONCEPT_TOP
    if tok == "(":
        ts.next()
        out = _parse_eli(ts)
        ts.expect(")")
        return out
    if tok == "some":
        ts.next()
        role = _parse_role(ts)
        if ts.peek() == ".":
            ts.next()
            return exists(role, _parse_eli_prim(ts))
        return exists(role)
    tok = ts.next()
    if not _is_ident(tok):
        raise ts.error(f"expected an ELI concept, got {tok!r}")
    return atom(tok)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


# ---------------------------------------------------------------------------
# Ontologies
# ---------------------------------------------------------------------------


def parse_ontology(text: str) -> Ontology:
    cis: list[tuple[BasicConcept, ELIConcept]] = []
    ris: list[tuple[Role, Role]] = []
    cdisj: list[tuple[BasicConcept, BasicConcept]] = []
    rdisj: list[tuple[Role, Role]] = []
    functional: set[Role] = set()
    for lineno, line in _lines(text):
        ts = _Tokens(line, lineno)
        head = ts.peek()
        if head == "disj":
            ts.next()
            cdisj.append((_parse_basic(ts), _parse_basic(ts)))
        elif head == "rdisj":
            ts.next()
            rdisj.append((_parse_role(ts), _parse_role(ts)))
        elif head == "func":
            ts.next()
            functional.add(_parse_role(ts))
        else:
            # Either "basic sub eli" or "role rsub role"; disambiguate by the
            # keyword following the first operand.
            save = ts.i
            try:
                lhs_basic = _parse_basic(ts)
                if ts.peek() == "sub":
                    ts.next()
                    cis.append((lhs_basic, _parse_eli(ts)))
                    ts.done()
                    continue
            except ParseError:
                pass
            ts.i = save
            lhs_role = _parse_role(ts)
            ts.expect("rsub")
            ris.append((lhs_role, _parse_role(ts)))
        ts.done()
    return Ontology(tuple(cis), tuple(ris), tuple(cdisj), tuple(rdisj), frozenset(functional))


def serialize_ontology(o: Ontology) -> str:
    out = []
    for lhs, rhs in o.concept_inclusions:
        out.append(f"{lhs} sub {rhs}")
    for r1, r2 in o.role_inclusions:
        out.append(f"{r1} rsub {r2}")
    for b1, b2 in o.concept_disjointness:
        out.append(f"disj {b1} {b2}")
    for r1, r2 in o.role_disjointness:
        out.append(f"rdisj {r1} {r2}")
    for r in sorted(o.functional):
        out.append(f"func {r}")
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def _parse_term_ident(ts: _Tokens) -> str:
    tok = ts.next()
    if not _is_ident(tok):
        raise ts.error(f"expected an identifier, got {tok!r}")
    return tok


def parse_cq(text: str) -> CQ:
    from .syntax import concept_to_eliq

    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty query document", 1, 1)
    if len(lines) > 1:
        raise ParseError("a .cq document holds a single query", lines[1][0], 1)
    lineno, line = lines[0]
    ts = _Tokens(line, lineno)
    if ts.peek() == "eliq":
        ts.next()
        ts.expect(":")
        c = _parse_eli(ts)
        ts.done()
        return concept_to_eliq(c)
    head = _parse_term_ident(ts)
    if not _is_ident(head):
        raise ts.error("expected a query head like q(x0)")
    ts.expect("(")
    answer = _parse_term_ident(ts)
    ts.expect(")")
    ts.expect(":-")
    concept_atoms: set[tuple[str, str]] = set()
    role_atoms: list[tuple[Role, str, str]] = []
    first = True
    while ts.peek() is not None:
        if not first:
            ts.expect(",")
        first = False
        pred = ts.next()
        is_top = pred == TOP
        if not is_top and not _is_ident(pred.rstrip("-")):
            raise ts.error(f"expected an atom, got {pred!r}")
        inverted = pred.endswith("-")
        name = pred[:-1] if inverted else pred
        ts.expect("(")
        t1 = _parse_term_ident(ts)
        if ts.peek() == ",":
            ts.next()
            t2 = _parse_term_ident(ts)
            ts.expect(")")
            role_atoms.append((Role(name, inverted), t1, t2))
        else:
            ts.expect(")")
            if inverted:
                raise ts.error("concept atoms cannot be inverted")
            concept_atoms.add((TOP if is_top else name, t1))
    q = make_cq(answer, concept_atoms, role_atoms)
    if answer not in q.variables():
        raise ParseError(f"answer variable {answer!r} does not occur in the query", lineno, 1)
    return q


def serialize_cq(q: CQ) -> str:
    atoms = [f"{a}({v})" for a, v in sorted(q.concept_atoms)]
    atoms += [f"{r}({x},{y})" for r, x, y in sorted(q.role_atoms)]
    if not atoms:
        atoms = [f"{TOP}({q.answer_var})"]
    return f"q({q.answer_var}) :- " + ", ".join(atoms)


# ---------------------------------------------------------------------------
# ABoxes
# ---------------------------------------------------------------------------


def parse_abox(text: str) -> ABox:
    concept_assertions: set[tuple[str, str]] = set()
    role_assertions: set[tuple[str, str, str]] = set()
    for lineno, line in _lines(text):
        ts = _Tokens(line, lineno)
        pred = ts.next()
        is_top = pred == TOP
        inverted = pred.endswith("-")
        name = pred[:-1] if inverted else pred
        if not is_top and not _is_ident(name):
            raise ts.error(f"expected an assertion, got {pred!r}")
        ts.expect("(")
        t1 = _parse_term_ident(ts)
        if ts.peek() == ",":
            ts.next()
            t2 = _parse_term_ident(ts)
            ts.expect(")")
            if inverted:
                t1, t2 = t2, t1
            role_assertions.add((name, t1, t2))
        else:
            ts.expect(")")
            if inverted:
                raise ts.error("concept assertions cannot be inverted")
            concept_assertions.add((TOP if is_top else name, t1))
        ts.done()
    return ABox(frozenset(concept_assertions), frozenset(role_assertions))


def serialize_abox(a: ABox) -> str:
    out = [f"{c}({i})" for c, i in sorted(a.concept_assertions)]
    out += [f"{r}({x},{y})" for r, x, y in sorted(a.role_assertions)]
    return "\n".join(out) + ("\n" if out else "")
