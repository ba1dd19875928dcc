"""Polarized rewrite systems and model-driven orientation.

Orientation turns a consistent clause set plus one of its models into a
rewrite system with atomic heads.  The procedure is deterministic: take
the first remaining clause, scan its literals in stored order, and select
the first literal that is true in the model.  A true positive literal P
consumes every remaining clause P | A1, ..., P | An and emits the
positive rule ``P ->+ ~A1 | ... | ~An`` (recording the axiom
``~A1 | ... | ~An -> P``); a true negative literal ~Q consumes every
remaining clause ~Q | B1, ..., ~Q | Bn and emits the negative rule
``Q ->- B1 & ... & Bn`` (axiom ``Q -> B1 & ... & Bn``).  An empty rest
contributes ``true`` to a positive body and ``false`` to a negative one.
The loop runs until no clause remains, so the emitted heads partition the
input and are pairwise distinct.

Rule text format: ``P ->+ body`` (positive), ``Q ->- body`` (negative),
``R ->. body`` (applies at both polarities); one rule per line.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator

from .clauses import Clause, ClauseSet, Literal, satisfied
from .semantics import Valuation
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
    atoms_of,
    conjoin,
    disjoin,
    parse_formula,
    print_formula,
)


class Polarity(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    BOTH = "."


@dataclass(frozen=True, slots=True)
class Rule:
    """A rewrite rule with an atomic head and an arbitrary formula body."""

    head: Atom
    polarity: Polarity
    body: Formula

    def __str__(self) -> str:
        return f"{self.head.name} ->{self.polarity.value} {print_formula(self.body)}"


@dataclass(frozen=True, slots=True)
class Provenance:
    """Where an oriented system came from: the model used and, aligned with
    the rule sequence, the group of input clauses each rule consumed."""

    model: Valuation
    groups: tuple[tuple[Clause, ...], ...]


@dataclass(frozen=True, slots=True)
class RewriteSystem:
    rules: tuple[Rule, ...] = ()
    provenance: Provenance | None = None

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def heads(self) -> tuple[Atom, ...]:
        return tuple(r.head for r in self.rules)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


class OrientationError(ValueError):
    """Orientation preconditions violated."""


def orient(clauses: ClauseSet, model: Valuation) -> RewriteSystem:
    """Orient a clause set into a polarized rewrite system using a model.

    Preconditions: no literal is marked and ``model`` satisfies every
    clause (so every clause holds a true literal to select).
    """
    if clauses.has_marks():
        raise OrientationError("cannot orient clauses with marked literals")
    for atom in clauses.atoms():
        if atom not in model:
            raise OrientationError(f"model does not assign atom {atom.name!r}")
    for c in clauses:
        if not satisfied(c, model):
            raise OrientationError(f"model {model} does not satisfy clause {c}")

    pending = list(clauses)
    rules: list[Rule] = []
    groups: list[tuple[Clause, ...]] = []
    while pending:
        first = pending[0]
        chosen = next((l for l in first if model[l.atom] == l.positive), None)
        if chosen is None:  # unreachable given the precondition check
            raise OrientationError(f"no true literal in clause {first}")
        target = Literal(chosen.atom, chosen.positive)
        selected = [c for c in pending if target in c]
        rests = [c.without(target) for c in selected]
        if target.positive:
            parts = [Top() if r.is_empty() else Not(r.formula()) for r in rests]
            rules.append(Rule(target.atom, Polarity.POSITIVE, disjoin(parts)))
        else:
            parts = [Bottom() if r.is_empty() else r.formula() for r in rests]
            rules.append(Rule(target.atom, Polarity.NEGATIVE, conjoin(parts)))
        groups.append(tuple(selected))
        pending = [c for c in pending if target not in c]
    return RewriteSystem(tuple(rules), Provenance(model, tuple(groups)))


def rule_axiom(rule: Rule) -> Formula:
    """The axiom a single rule stands for."""
    head = Atomic(rule.head)
    if rule.polarity is Polarity.POSITIVE:
        return Implies(rule.body, head)
    if rule.polarity is Polarity.NEGATIVE:
        return Implies(head, rule.body)
    return Iff(head, rule.body)


def axioms_of(system: RewriteSystem) -> list[Formula]:
    """Read back the implications recorded by orientation.

    Positive rules yield ``body -> head``, negative rules ``head -> body``.
    Only systems produced by ``orient`` (provenance present) qualify.
    """
    if system.provenance is None:
        raise ValueError("system has no orientation provenance")
    return [rule_axiom(r) for r in system.rules]


def validate(system: RewriteSystem, model: Valuation | None = None) -> list[str]:
    """Check system invariants; returns a list of violations (empty = ok).

    Head atoms must be pairwise distinct.  With a model, the orientation
    invariants are asserted as well: positive heads are true and negative
    heads false in the model, and no rule body mentions its own head.
    """
    violations: list[str] = []
    seen: set[Atom] = set()
    for r in system.rules:
        if r.head in seen:
            violations.append(f"duplicate head {r.head.name}")
        seen.add(r.head)
    if model is not None:
        for r in system.rules:
            value = model.get(r.head)
            if r.polarity is Polarity.POSITIVE and value is not True:
                violations.append(f"positive head {r.head.name} is not true in the model")
            if r.polarity is Polarity.NEGATIVE and value is not False:
                violations.append(f"negative head {r.head.name} is not false in the model")
            if r.head in atoms_of(r.body):
                violations.append(f"body of rule for {r.head.name} mentions its own head")
    return violations


def depolarize(system: RewriteSystem) -> RewriteSystem:
    """Replace polarized rules by equivalent non-polarized ones.

    ``P ->- B`` becomes ``P ->. P & B`` and ``P ->+ A`` becomes
    ``P ->. P | A``; rules already applying at both polarities pass
    through.  Heads must be pairwise distinct.
    """
    dup = [v for v in validate(system) if v.startswith("duplicate")]
    if dup:
        raise OrientationError("; ".join(dup))
    rules = []
    for r in system.rules:
        if r.polarity is Polarity.POSITIVE:
            rules.append(Rule(r.head, Polarity.BOTH, Or(Atomic(r.head), r.body)))
        elif r.polarity is Polarity.NEGATIVE:
            rules.append(Rule(r.head, Polarity.BOTH, And(Atomic(r.head), r.body)))
        else:
            rules.append(r)
    return RewriteSystem(tuple(rules), None)


_RULE_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\s*->([+\-.])\s*(.+)\Z")


def parse_rule(text: str, interner: Interner) -> Rule:
    """Parse one ``head ->[+-.] body`` rule line."""
    m = _RULE_RE.match(text.strip())
    if m is None:
        raise ParseError(f"malformed rule {text.strip()!r}")
    name, pol, body = m.groups()
    return Rule(interner.intern(name), Polarity(pol), parse_formula(body, interner))


def parse_rules(text: str, interner: Interner) -> RewriteSystem:
    """Parse a rules file: one rule per line, ``#`` comments allowed."""
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rules.append(parse_rule(line, interner))
        except ParseError as err:
            raise ParseError(err.message, lineno) from None
    return RewriteSystem(tuple(rules), None)
