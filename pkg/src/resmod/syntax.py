"""Propositional formula language: atom interning, parsing, printing.

Concrete syntax, tightest-binding first::

    ~ f          negation
    f & g        conjunction       (left-associative)
    f | g        disjunction       (left-associative)
    f -> g       implication       (right-associative)
    f <-> g      equivalence       (right-associative)
    false, true  constants
    (f)          grouping

Identifiers start with a letter and continue with letters, digits or
underscores; ``false`` and ``true`` are reserved words.

Theory files carry one formula per line; blank lines and ``#`` comments
are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable


class ParseError(ValueError):
    """Raised on malformed formula, clause, or rule text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}"
            if column is not None:
                where += f", column {column}"
        super().__init__(message + where)


@dataclass(frozen=True, slots=True)
class Atom:
    """An interned propositional variable."""

    id: int
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.id}, {self.name!r})"


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_RESERVED = frozenset(["false", "true"])


class Interner:
    """Atom table for one session.

    Interning is injective (same name, same atom object) and ids are dense
    from 0 in order of first appearance.  An interner must not be mutated
    from two threads at once; parsing is otherwise pure, and independent
    sessions may run in parallel.
    """

    def __init__(self) -> None:
        self._by_name: dict[str, Atom] = {}
        self._atoms: list[Atom] = []

    def intern(self, name: str) -> Atom:
        atom = self._by_name.get(name)
        if atom is None:
            if not _NAME_RE.match(name) or name in _RESERVED:
                raise ValueError(f"invalid atom name {name!r}")
            atom = Atom(len(self._atoms), name)
            self._by_name[name] = atom
            self._atoms.append(atom)
        return atom

    def lookup(self, name: str) -> Atom | None:
        return self._by_name.get(name)

    def atoms(self) -> tuple[Atom, ...]:
        return tuple(self._atoms)

    def __len__(self) -> int:
        return len(self._atoms)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name


class Formula:
    """Base class of formula syntax nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atomic(Formula):
    atom: Atom


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


def atoms_of(f: Formula) -> tuple[Atom, ...]:
    """All atoms occurring in ``f``, sorted by id."""
    found: dict[Atom, None] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Atomic(atom):
                found[atom] = None
            case Not(child):
                stack.append(child)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b):
                stack.append(b)
                stack.append(a)
    return tuple(sorted(found, key=lambda a: a.id))


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; Top for the empty sequence."""
    fs = list(formulas)
    if not fs:
        return Top()
    return reduce(And, fs)


def disjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; Bottom for the empty sequence."""
    fs = list(formulas)
    if not fs:
        return Bottom()
    return reduce(Or, fs)


_TOKEN_RE = re.compile(r"<->|->|[~&|()]|[A-Za-z][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            tokens.append((m.group(), lineno, pos + 1))
            pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int, int]], interner: Interner):
        self._tokens = tokens
        self._pos = 0
        self._interner = interner

    def _peek(self) -> tuple[str, int, int] | None:
        if self._pos < len(self._tokens):
            return self._tokens[self._pos]
        return None

    def _advance(self) -> tuple[str, int, int]:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _fail(self, message: str) -> ParseError:
        tok = self._peek()
        if tok is None:
            last = self._tokens[-1]
            return ParseError(message, last[1], last[2] + len(last[0]))
        return ParseError(message, tok[1], tok[2])

    def parse(self) -> Formula:
        f = self._iff()
        tok = self._peek()
        if tok is not None:
            raise self._fail(f"unexpected {tok[0]!r}")
        return f

    def _iff(self) -> Formula:
        left = self._implies()
        tok = self._peek()
        if tok is not None and tok[0] == "<->":
            self._advance()
            return Iff(left, self._iff())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        tok = self._peek()
        if tok is not None and tok[0] == "->":
            self._advance()
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        f = self._and()
        while (tok := self._peek()) is not None and tok[0] == "|":
            self._advance()
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while (tok := self._peek()) is not None and tok[0] == "&":
            self._advance()
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        tok = self._peek()
        if tok is None:
            raise self._fail("unexpected end of input")
        text = tok[0]
        if text == "~":
            self._advance()
            return Not(self._unary())
        if text == "(":
            self._advance()
            f = self._iff()
            closing = self._peek()
            if closing is None or closing[0] != ")":
                raise self._fail("expected ')'")
            self._advance()
            return f
        if text == "false":
            self._advance()
            return Bottom()
        if text == "true":
            self._advance()
            return Top()
        if _NAME_RE.match(text):
            self._advance()
            return Atomic(self._interner.intern(text))
        raise self._fail(f"unexpected {text!r}")


def parse_formula(text: str, interner: Interner) -> Formula:
    """Parse ``text`` into a formula, interning new atoms as they appear."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 1, 1)
    return _Parser(tokens, interner).parse()


# Precedence levels used by the printer; higher binds tighter.
_IFF, _IMPLIES, _OR, _AND, _NOT, _LEAF = 1, 2, 3, 4, 5, 6


def _fmt(f: Formula, min_prec: int) -> str:
    match f:
        case Bottom():
            return "false"
        case Top():
            return "true"
        case Atomic(atom):
            return atom.name
        case Not(child):
            s, p = "~" + _fmt(child, _NOT), _NOT
        case And(a, b):
            s, p = _fmt(a, _AND) + " & " + _fmt(b, _AND + 1), _AND
        case Or(a, b):
            s, p = _fmt(a, _OR) + " | " + _fmt(b, _OR + 1), _OR
        case Implies(a, b):
            s, p = _fmt(a, _IMPLIES + 1) + " -> " + _fmt(b, _IMPLIES), _IMPLIES
        case Iff(a, b):
            s, p = _fmt(a, _IFF + 1) + " <-> " + _fmt(b, _IFF), _IFF
        case _:
            raise TypeError(f"not a formula: {f!r}")
    return "(" + s + ")" if p < min_prec else s


def print_formula(f: Formula) -> str:
    """Render ``f`` with minimal parentheses; re-parses to an equal tree."""
    return _fmt(f, 0)


def parse_theory(text: str, interner: Interner) -> list[Formula]:
    """Parse a theory file: one formula per line, ``#`` comments allowed."""
    formulas = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            formulas.append(parse_formula(line, interner))
        except ParseError as err:
            raise ParseError(err.message, lineno, err.column) from None
    return formulas
