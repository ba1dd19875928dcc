"""Clauses and equivalence-preserving clausal form.

The clausifier never introduces fresh atoms: conversion goes through
negation normal form and distributes disjunction over conjunction, so the
clause set is logically equivalent to its source formula.  That matters
because orientation consumes the clause set *as the theory itself*; the
exponential worst case is accepted at the scale this package targets.

A literal may carry a mark.  Marks never merge with their unmarked
counterpart and only a complementary pair with equal marks makes a clause
tautological; the strategy engine relies on both properties.

Clause text format: literals joined by ``" | "``, negation ``~``, marked
literals suffixed ``!`` (e.g. ``~P! | Q``); the empty clause prints as
``[]``; clause files carry one clause per line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import re

from .syntax import (
    And,
    Atom,
    Atomic,
    Bottom,
    Formula,
    Iff,
    Implies,
    Interner,
    Not,
    Or,
    ParseError,
    Top,
    disjoin,
)


@dataclass(frozen=True, slots=True)
class Literal:
    """An atom, possibly negated, possibly marked."""

    atom: Atom
    positive: bool = True
    marked: bool = False

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.atom.id, 0 if self.positive else 1, 1 if self.marked else 0)

    def negated(self) -> "Literal":
        return Literal(self.atom, not self.positive, self.marked)

    def unmarked(self) -> "Literal":
        return Literal(self.atom, self.positive, False)

    def as_formula(self) -> Formula:
        f: Formula = Atomic(self.atom)
        return f if self.positive else Not(f)

    def __str__(self) -> str:
        return ("" if self.positive else "~") + self.atom.name + ("!" if self.marked else "")


class Clause:
    """A set of literals, stored deduplicated in a canonical order.

    Literals are ordered by (atom id, polarity, mark), positive and
    unmarked first.  The empty clause is the contradiction.
    """

    __slots__ = ("_literals",)

    def __init__(self, literals: Iterable[Literal] = ()):
        self._literals: tuple[Literal, ...] = tuple(sorted(set(literals), key=lambda l: l.key))

    @property
    def literals(self) -> tuple[Literal, ...]:
        return self._literals

    def __iter__(self) -> Iterator[Literal]:
        return iter(self._literals)

    def __len__(self) -> int:
        return len(self._literals)

    def __contains__(self, literal: Literal) -> bool:
        return literal in self._literals

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Clause) and self._literals == other._literals

    def __hash__(self) -> int:
        return hash(self._literals)

    def is_empty(self) -> bool:
        return not self._literals

    def is_tautology(self) -> bool:
        lits = set(self._literals)
        return any(l.positive and l.negated() in lits for l in self._literals)

    def has_marks(self) -> bool:
        return any(l.marked for l in self._literals)

    def without(self, literal: Literal) -> "Clause":
        return Clause(l for l in self._literals if l != literal)

    def union(self, other: "Clause") -> "Clause":
        return Clause(self._literals + other._literals)

    def atoms(self) -> tuple[Atom, ...]:
        return tuple(sorted({l.atom for l in self._literals}, key=lambda a: a.id))

    def formula(self) -> Formula:
        """The clause as a formula: disjunction of literals, Bottom if empty."""
        return disjoin(l.as_formula() for l in self._literals)

    def __str__(self) -> str:
        if not self._literals:
            return "[]"
        return " | ".join(str(l) for l in self._literals)

    def __repr__(self) -> str:
        return f"Clause<{self}>"


class ClauseSet:
    """Duplicate-free, tautology-free sequence of clauses.

    Insertion order is preserved (first occurrence wins); tautologies are
    silently dropped, which keeps the conjunction equivalent.
    """

    __slots__ = ("_clauses",)

    def __init__(self, clauses: Iterable[Clause] = ()):
        seen: set[Clause] = set()
        kept: list[Clause] = []
        for c in clauses:
            if c in seen or c.is_tautology():
                continue
            seen.add(c)
            kept.append(c)
        self._clauses: tuple[Clause, ...] = tuple(kept)

    @property
    def clauses(self) -> tuple[Clause, ...]:
        return self._clauses

    def __iter__(self) -> Iterator[Clause]:
        return iter(self._clauses)

    def __len__(self) -> int:
        return len(self._clauses)

    def __getitem__(self, index: int) -> Clause:
        return self._clauses[index]

    def __contains__(self, clause: Clause) -> bool:
        return clause in self._clauses

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ClauseSet) and set(self._clauses) == set(other._clauses)

    def __hash__(self) -> int:
        return hash(frozenset(self._clauses))

    def atoms(self) -> tuple[Atom, ...]:
        found: dict[Atom, None] = {}
        for c in self._clauses:
            for a in c.atoms():
                found[a] = None
        return tuple(sorted(found, key=lambda a: a.id))

    def has_marks(self) -> bool:
        return any(c.has_marks() for c in self._clauses)

    def formula(self) -> Formula:
        """Conjunction of the member clauses, Top if empty."""
        f: Formula = Top()
        for c in self._clauses:
            f = c.formula() if isinstance(f, Top) else And(f, c.formula())
        return f

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self._clauses)

    def __repr__(self) -> str:
        return f"ClauseSet<{len(self._clauses)} clauses>"


def normalize_clause(literals: Iterable[Literal] | Clause) -> Clause | None:
    """Deduplicated clause, or None when it is a tautology.

    Duplicate literals merge only when they agree on the mark; a
    complementary pair is tautological only at equal marks.
    """
    c = literals if isinstance(literals, Clause) else Clause(literals)
    return None if c.is_tautology() else c


def _cross(left: list[tuple[Literal, ...]], right: list[tuple[Literal, ...]]) -> list[tuple[Literal, ...]]:
    return [a + b for a in left for b in right]


def _cnf(f: Formula, positive: bool) -> list[tuple[Literal, ...]]:
    # Clausal form of f (or of ~f when positive is False) as raw literal
    # tuples; an empty list is Top, a list holding the empty tuple is Bottom.
    match f:
        case Bottom():
            return [()] if positive else []
        case Top():
            return [] if positive else [()]
        case Atomic(atom):
            return [(Literal(atom, positive),)]
        case Not(child):
            return _cnf(child, not positive)
        case And(a, b):
            if positive:
                return _cnf(a, True) + _cnf(b, True)
            return _cross(_cnf(a, False), _cnf(b, False))
        case Or(a, b):
            if positive:
                return _cross(_cnf(a, True), _cnf(b, True))
            return _cnf(a, False) + _cnf(b, False)
        case Implies(a, b):
            if positive:
                return _cross(_cnf(a, False), _cnf(b, True))
            return _cnf(a, True) + _cnf(b, False)
        case Iff(a, b):
            if positive:
                return _cross(_cnf(a, False), _cnf(b, True)) + _cross(_cnf(a, True), _cnf(b, False))
            return _cross(_cnf(a, True), _cnf(b, True)) + _cross(_cnf(a, False), _cnf(b, False))
    raise TypeError(f"not a formula: {f!r}")


def to_cnf(f: Formula) -> ClauseSet:
    """Equivalence-preserving clausal form of ``f``.

    No fresh atoms are introduced.  Duplicate literals and clauses merge,
    tautological clauses are dropped, a Top disjunct absorbs its clause and
    Bottom disjuncts vanish.
    """
    return ClauseSet(Clause(lits) for lits in _cnf(f, True))


def clausify_with_context(context: Clause, body: Formula) -> ClauseSet:
    """Clausal form of ``context-as-disjunction | body``.

    The context literals (marks included) are carried verbatim into every
    produced clause; only the body is clausified.
    """
    ctx = context.literals
    return ClauseSet(Clause(ctx + lits) for lits in _cnf(body, True))


def satisfied(clause: Clause, valuation: Mapping[Atom, bool]) -> bool:
    """True when some literal of the clause holds under the valuation."""
    return any(valuation[l.atom] == l.positive for l in clause)


_LITERAL_RE = re.compile(r"(~?)\s*([A-Za-z][A-Za-z0-9_]*)\s*(!?)\Z")


def parse_clause(text: str, interner: Interner) -> Clause:
    """Parse one clause in the ``~P! | Q`` text format (``[]`` is empty)."""
    s = text.strip()
    if s == "[]":
        return Clause()
    literals = []
    for part in s.split("|"):
        m = _LITERAL_RE.match(part.strip())
        if m is None:
            raise ParseError(f"malformed literal {part.strip()!r}")
        neg, name, bang = m.groups()
        literals.append(Literal(interner.intern(name), positive=not neg, marked=bool(bang)))
    return Clause(literals)


def parse_clause_set(text: str, interner: Interner) -> ClauseSet:
    """Parse a clause file: one clause per line, ``#`` comments allowed."""
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            clauses.append(parse_clause(line, interner))
        except ParseError as err:
            raise ParseError(err.message, lineno) from None
    return ClauseSet(clauses)
