"""Refutation engines over shared saturation machinery.

Three engines run the same fair FIFO saturation loop and differ only in
which inferences they generate:

* ``plain_refute``      resolution only, over goal plus theory clauses;
* ``enar_refute``       resolution plus extended narrowing modulo a
                        rewrite system (narrow a literal with a rule whose
                        head is its atom, then re-clausify in context);
* ``strategy_refute``   resolution only, against a compiled marked clause
                        set, restricted so that two compiled clauses never
                        resolve with each other and a step using a compiled
                        clause must eliminate that clause's marked literal.

Polarity convention for narrowing: clauses are hypotheses, so a positive
literal sits in a negative position and is rewritten by negative (or
both-polarity) rules, while a negative literal is rewritten by positive
(or both-polarity) rules.

Termination is structural: no inference introduces an atom outside the
input clauses, the rule heads and the clausified rule bodies, the clause
universe over finitely many atoms is finite, and only never-seen clauses
are admitted.  The generated-clause cap is a safety valve, not a timeout.

The inner loop lives in a kernel module; a compiled extension is used
when available (and the problem fits in 64-bit masks) with a pure-Python
fallback selected at import.  Set ``RESMOD_PURE=1`` to force the
fallback.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from . import _pykernel
from .clauses import (
    Clause,
    ClauseSet,
    Literal,
    clausify_with_context,
    normalize_clause,
    to_cnf,
)
from .rewrite import Polarity, RewriteSystem, Rule, validate
from .syntax import Atom, Formula, Not

try:
    from . import _kernel
except ImportError:  # extension not built; the pure kernel is equivalent
    _kernel = None

_FORCE_PURE = bool(os.environ.get("RESMOD_PURE"))

DEFAULT_CAP = 1_000_000

KERNEL_SATURATED = _pykernel.SATURATED
KERNEL_REFUTED = _pykernel.REFUTED
KERNEL_CAP = _pykernel.CAP


class ProverError(Exception):
    pass


class CapExceededError(ProverError):
    """The generated-clause safety cap was hit."""

    def __init__(self, generated: int, cap: int):
        self.generated = generated
        self.cap = cap
        super().__init__(f"generated {generated} clauses, exceeding the cap of {cap}")


class ReplayError(ProverError):
    """A recorded derivation failed to re-execute."""


class Verdict(enum.Enum):
    REFUTED = "refuted"
    SATURATED = "saturated"


def kernel_for(n_atoms: int):
    """Pick the saturation kernel for a problem of the given width."""
    if _kernel is not None and not _FORCE_PURE and n_atoms <= 60:
        return _kernel
    return _pykernel


def active_kernel_name() -> str:
    return "compiled" if (_kernel is not None and not _FORCE_PURE) else "pure"


# Literal slot encoding shared with the kernels.
_SLOT_FOR = {(True, False): 0, (False, False): 1, (True, True): 2, (False, True): 3}
_SLOT_SIGN = ((True, False), (False, False), (True, True), (False, True))


def clause_masks(clause: Clause, index: dict[Atom, int]) -> tuple[int, int, int, int]:
    masks = [0, 0, 0, 0]
    for lit in clause:
        masks[_SLOT_FOR[(lit.positive, lit.marked)]] |= 1 << index[lit.atom]
    return (masks[0], masks[1], masks[2], masks[3])


def masks_to_clause(masks: Sequence[int], atoms: Sequence[Atom]) -> Clause:
    literals = []
    for slot in range(4):
        positive, marked = _SLOT_SIGN[slot]
        m = masks[slot]
        while m:
            low = m & -m
            m ^= low
            literals.append(Literal(atoms[low.bit_length() - 1], positive, marked))
    return Clause(literals)


def rule_applies(rule: Rule, literal_positive: bool) -> bool:
    """Whether a rule may rewrite a literal of the given sign (see the
    module docstring for the polarity convention)."""
    if literal_positive:
        return rule.polarity in (Polarity.NEGATIVE, Polarity.BOTH)
    return rule.polarity in (Polarity.POSITIVE, Polarity.BOTH)


@lru_cache(maxsize=256)
def _prepared_rules(system: RewriteSystem) -> tuple[tuple[Rule, ClauseSet, ClauseSet], ...]:
    # Rule bodies clausified once per system: the form used on a positive
    # literal and the negated form used on a negative literal.
    return tuple((r, to_cnf(r.body), to_cnf(Not(r.body))) for r in system.rules)


def rules_payload(system: RewriteSystem, index: dict[Atom, int]) -> list[tuple]:
    """Kernel encoding of a rewrite system under an atom indexing."""
    payload = []
    for rule, cnf_pos, cnf_neg in _prepared_rules(system):
        pos = tuple(clause_masks(c, index)[:2] for c in cnf_pos)
        neg = tuple(clause_masks(c, index)[:2] for c in cnf_neg)
        payload.append((index[rule.head], rule_applies(rule, True), rule_applies(rule, False), pos, neg))
    return payload


def _collect_atoms(clauses: Iterable[Clause], prepared) -> tuple[Atom, ...]:
    found: dict[Atom, None] = {}
    for c in clauses:
        for a in c.atoms():
            found[a] = None
    for rule, cnf_pos, cnf_neg in prepared:
        found[rule.head] = None
        for cs in (cnf_pos, cnf_neg):
            for c in cs:
                for a in c.atoms():
                    found[a] = None
    return tuple(sorted(found, key=lambda a: a.id))


@dataclass(frozen=True, slots=True)
class Resolution:
    """One resolution step between admitted clauses (by index)."""

    left: int
    right: int
    atom: Atom
    left_literal: Literal
    right_literal: Literal
    conclusion: Clause

    @property
    def kind(self) -> str:
        return "resolution"


@dataclass(frozen=True, slots=True)
class Narrowing:
    """One narrowing step: a literal rewritten by a rule, one conclusion
    of the re-clausification."""

    parent: int
    literal: Literal
    rule_index: int
    rule: Rule
    conclusion: Clause

    @property
    def kind(self) -> str:
        return "narrow_pos" if self.literal.positive else "narrow_neg"


Inference = Union[Resolution, Narrowing]


@dataclass(frozen=True, slots=True)
class Derivation:
    """Inference record: inputs, then one step per admitted clause.

    Clause i is ``inputs[i]`` for i below ``len(inputs)`` and the
    conclusion of step ``i - len(inputs)`` after that.
    """

    inputs: ClauseSet
    steps: tuple[Inference, ...]
    verdict: Verdict

    def clause(self, index: int) -> Clause:
        n = len(self.inputs)
        if index < n:
            return self.inputs[index]
        return self.steps[index - n].conclusion

    def num_clauses(self) -> int:
        return len(self.inputs) + len(self.steps)

    def replay(self) -> bool:
        """Re-execute every step and check it reproduces its conclusion."""
        n = len(self.inputs)
        for k, step in enumerate(self.steps):
            limit = n + k
            if isinstance(step, Resolution):
                if step.left >= limit or step.right >= limit:
                    raise ReplayError(f"step {k} references a later clause")
                left = self.clause(step.left)
                right = self.clause(step.right)
                redone = resolve_literals(left, step.left_literal, right, step.right_literal)
                if redone != step.conclusion:
                    raise ReplayError(f"step {k} resolution mismatch: {redone} != {step.conclusion}")
            else:
                if step.parent >= limit:
                    raise ReplayError(f"step {k} references a later clause")
                outs = narrow(self.clause(step.parent), step.literal, step.rule)
                if step.conclusion not in outs:
                    raise ReplayError(f"step {k} narrowing does not yield {step.conclusion}")
        if self.verdict is Verdict.REFUTED:
            refuted = any(c.is_empty() for c in self.inputs) or (
                bool(self.steps) and self.steps[-1].conclusion.is_empty()
            )
            if not refuted:
                raise ReplayError("refutation does not end in the empty clause")
        return True


@dataclass(frozen=True, slots=True)
class Stats:
    inferences: int
    generated: int
    dequeued: int


@dataclass(frozen=True, slots=True)
class ProverResult:
    verdict: Verdict
    derivation: Derivation | None
    final: ClauseSet | None
    stats: Stats

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    @property
    def saturated(self) -> bool:
        return self.verdict is Verdict.SATURATED


def resolve_literals(c1: Clause, lit1: Literal, c2: Clause, lit2: Literal) -> Clause | None:
    """Resolvent eliminating exactly ``lit1`` from c1 and ``lit2`` from c2.

    ``lit1`` must be positive and ``lit2`` negative on the same atom;
    marks are ignored for complementarity.  Returns None for a tautology.
    """
    if lit1 not in c1 or lit2 not in c2:
        raise ValueError("literal not present in its clause")
    if lit1.atom != lit2.atom or not lit1.positive or lit2.positive:
        raise ValueError("literals are not complementary")
    return normalize_clause(c1.without(lit1).union(c2.without(lit2)))


def resolve(c1: Clause, c2: Clause, on: Atom) -> Clause | None:
    """Resolvent of c1 (positive on ``on``) and c2 (negative on ``on``).

    When an atom occurs both marked and unmarked, the first literal in
    stored order (the unmarked one) is eliminated; use
    ``resolve_literals`` to pick explicitly.
    """
    lit1 = next((l for l in c1 if l.atom == on and l.positive), None)
    lit2 = next((l for l in c2 if l.atom == on and not l.positive), None)
    if lit1 is None:
        raise ValueError(f"first clause has no positive literal on {on.name}")
    if lit2 is None:
        raise ValueError(f"second clause has no negative literal on {on.name}")
    return resolve_literals(c1, lit1, c2, lit2)


def narrow(clause: Clause, literal: Literal, rule: Rule) -> ClauseSet:
    """Rewrite ``literal`` in ``clause`` with ``rule`` and re-clausify.

    The literal's atom must be the rule head and the rule must apply at
    the literal's sign.  The rule body (negated for a negative literal)
    is clausified in the context of the remaining literals; tautologies
    drop out.
    """
    if literal not in clause:
        raise ValueError("literal not present in the clause")
    if literal.atom != rule.head:
        raise ValueError(f"rule head {rule.head.name} does not match literal atom {literal.atom.name}")
    if not rule_applies(rule, literal.positive):
        sign = "positive" if literal.positive else "negative"
        raise ValueError(f"rule {rule} does not apply to a {sign} occurrence")
    body = rule.body if literal.positive else Not(rule.body)
    return clausify_with_context(clause.without(literal), body)


def strategy_compile(rules: RewriteSystem | Sequence[Rule]) -> ClauseSet:
    """Compile both-polarity rules into the marked clause set that
    simulates narrowing by them.

    For each rule ``P ->. A`` this is the clausal form of ``P <-> A`` in
    which the left-hand occurrence of P carries the mark.
    """
    seq = tuple(rules.rules if isinstance(rules, RewriteSystem) else rules)
    heads = [r.head for r in seq]
    if len(set(heads)) != len(heads):
        raise ValueError("duplicate rule heads")
    for r in seq:
        if r.polarity is not Polarity.BOTH:
            raise ValueError(f"rule {r} is polarized; strategy compilation needs both-polarity rules")
    compiled: list[Clause] = []
    for r in seq:
        neg_head = Clause([Literal(r.head, positive=False, marked=True)])
        pos_head = Clause([Literal(r.head, positive=True, marked=True)])
        compiled.extend(clausify_with_context(neg_head, r.body))
        compiled.extend(clausify_with_context(pos_head, Not(r.body)))
    return ClauseSet(compiled)


def _require_unmarked(clauses: ClauseSet, what: str) -> None:
    if clauses.has_marks():
        raise ValueError(f"{what} clauses must not carry marks")


def _saturate(inputs: ClauseSet, system: RewriteSystem | None, *, narrowing: bool,
              strategy: bool, subsumption: bool, max_generated: int, record: bool) -> ProverResult:
    for c in inputs:
        if c.is_empty():
            derivation = Derivation(inputs, (), Verdict.REFUTED) if record else None
            return ProverResult(Verdict.REFUTED, derivation, None, Stats(0, 0, 0))
    prepared = _prepared_rules(system) if (narrowing and system is not None) else ()
    atoms = _collect_atoms(inputs, prepared)
    index = {a: i for i, a in enumerate(atoms)}
    payload = []
    rule_objects = []
    for rule, cnf_pos, cnf_neg in prepared:
        rule_objects.append(rule)
        pos = tuple(clause_masks(c, index)[:2] for c in cnf_pos)
        neg = tuple(clause_masks(c, index)[:2] for c in cnf_neg)
        payload.append((index[rule.head], rule_applies(rule, True), rule_applies(rule, False), pos, neg))
    kern = kernel_for(len(atoms))
    status, masks, raw_steps, generated, dequeued = kern.saturate(
        len(atoms),
        [clause_masks(c, index) for c in inputs],
        payload,
        narrowing=narrowing,
        strategy=strategy,
        subsumption=subsumption,
        max_generated=max_generated,
        record=record,
    )
    if status == KERNEL_CAP:
        raise CapExceededError(generated, max_generated)
    refuted = status == KERNEL_REFUTED
    verdict = Verdict.REFUTED if refuted else Verdict.SATURATED
    stats = Stats(len(masks) - len(inputs), generated, dequeued)
    derivation = None
    if record:
        n = len(inputs)
        steps: list[Inference] = []
        for k, raw in enumerate(raw_steps):
            conclusion = masks_to_clause(masks[n + k], atoms)
            if raw[0] == "r":
                _, i, j, a, cs, ps = raw
                lpos, lmark = _SLOT_SIGN[cs]
                rpos, rmark = _SLOT_SIGN[ps]
                steps.append(
                    Resolution(i, j, atoms[a],
                               Literal(atoms[a], lpos, lmark),
                               Literal(atoms[a], rpos, rmark),
                               conclusion)
                )
            else:
                _, i, a, slot, ri = raw
                pos, mark = _SLOT_SIGN[slot]
                steps.append(Narrowing(i, Literal(atoms[a], pos, mark), ri, rule_objects[ri], conclusion))
        derivation = Derivation(inputs, tuple(steps), verdict)
    final = None
    if not refuted:
        final = ClauseSet(masks_to_clause(m, atoms) for m in masks)
    return ProverResult(verdict, derivation, final, stats)


def enar_refute(goal: ClauseSet, system: RewriteSystem, *, subsumption: bool = False,
                max_generated: int = DEFAULT_CAP, record: bool = True) -> ProverResult:
    """Saturate the goal clauses under resolution and extended narrowing."""
    _require_unmarked(goal, "goal")
    return _saturate(goal, system, narrowing=True, strategy=False,
                     subsumption=subsumption, max_generated=max_generated, record=record)


def strategy_refute(goal: ClauseSet, compiled: ClauseSet, *, subsumption: bool = False,
                    max_generated: int = DEFAULT_CAP, record: bool = True) -> ProverResult:
    """Resolution restricted by the compiled set's marks.

    A derived clause counts as a compiled-set member exactly while it
    retains a marked literal.
    """
    _require_unmarked(goal, "goal")
    merged = ClauseSet(list(goal) + list(compiled))
    return _saturate(merged, None, narrowing=False, strategy=True,
                     subsumption=subsumption, max_generated=max_generated, record=record)


def plain_refute(goal: ClauseSet, theory_clauses: ClauseSet, *, subsumption: bool = False,
                 max_generated: int = DEFAULT_CAP, record: bool = True) -> ProverResult:
    """Unrestricted resolution over goal plus theory clauses (baseline)."""
    _require_unmarked(goal, "goal")
    _require_unmarked(theory_clauses, "theory")
    merged = ClauseSet(list(goal) + list(theory_clauses))
    return _saturate(merged, None, narrowing=False, strategy=False,
                     subsumption=subsumption, max_generated=max_generated, record=record)


def prove(system: RewriteSystem, goal: Formula, *, subsumption: bool = False,
          max_generated: int = DEFAULT_CAP, record: bool = True) -> ProverResult:
    """Try to prove ``goal`` modulo ``system``: clausify its negation and
    saturate.  Refuted means proved; Saturated means the attempt failed."""
    violations = validate(system)
    if violations:
        raise ProverError("invalid system: " + "; ".join(violations))
    return enar_refute(to_cnf(Not(goal)), system,
                       subsumption=subsumption, max_generated=max_generated, record=record)


def format_derivation(derivation: Derivation) -> str:
    """Line-oriented trace: one clause per line with its justification."""
    lines = []
    for i, clause in enumerate(derivation.inputs):
        lines.append(f"{i}. {clause}  [input]")
    base = len(derivation.inputs)
    for k, step in enumerate(derivation.steps):
        if isinstance(step, Resolution):
            tag = f"[res {step.left},{step.right} on {step.atom.name}]"
        else:
            tag = f"[narrow {step.parent} {step.literal} RULE#{step.rule_index}]"
        lines.append(f"{base + k}. {step.conclusion}  {tag}")
    lines.append(f"verdict: {derivation.verdict.value}")
    return "\n".join(lines)


def derivation_records(derivation: Derivation) -> list[dict]:
    """The same trace as structured records."""
    records = []
    for i, clause in enumerate(derivation.inputs):
        records.append({"id": i, "clause": str(clause), "kind": "input"})
    base = len(derivation.inputs)
    for k, step in enumerate(derivation.steps):
        rec = {"id": base + k, "clause": str(step.conclusion), "kind": step.kind}
        if isinstance(step, Resolution):
            rec["left"] = step.left
            rec["right"] = step.right
            rec["atom"] = step.atom.name
        else:
            rec["parent"] = step.parent
            rec["literal"] = str(step.literal)
            rec["rule"] = step.rule_index
        records.append(rec)
    return records
