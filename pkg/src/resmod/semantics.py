"""Brute-force truth-table semantics.

This module is the arbiter everything else is validated against, so the
entailment and model-search routines enumerate valuations explicitly
rather than delegating to any cleverer procedure.  ``truth_table`` is a
bit-parallel variant of the same enumeration used by the sweep harness;
the two routes are cross-checked in the test suite.
"""

from __future__ import annotations

from functools import lru_cache, reduce
from typing import Iterable, Iterator, Mapping, Sequence

from .syntax import (
    And,
    Atom,
    Atomic,
    Bottom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    atoms_of,
)

DEFAULT_ATOM_CAP = 20


class AtomCapError(ValueError):
    """Too many atoms for exhaustive enumeration."""


class UnassignedAtomError(KeyError):
    """A formula mentions an atom the valuation does not cover."""


class Valuation:
    """A total assignment of truth values to a finite set of atoms."""

    __slots__ = ("_items", "_map")

    def __init__(self, assignment: Mapping[Atom, object] | Iterable[tuple[Atom, object]] = ()):
        pairs = dict(assignment)
        items = sorted(((a, bool(v)) for a, v in pairs.items()), key=lambda p: p[0].id)
        self._items: tuple[tuple[Atom, bool], ...] = tuple(items)
        self._map: dict[Atom, bool] = dict(items)

    def __getitem__(self, atom: Atom) -> bool:
        try:
            return self._map[atom]
        except KeyError:
            raise UnassignedAtomError(f"atom {atom.name!r} is not assigned") from None

    def get(self, atom: Atom, default: bool | None = None) -> bool | None:
        return self._map.get(atom, default)

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._map

    def __len__(self) -> int:
        return len(self._items)

    def atoms(self) -> tuple[Atom, ...]:
        return tuple(a for a, _ in self._items)

    def items(self) -> tuple[tuple[Atom, bool], ...]:
        return self._items

    def as_int_dict(self) -> dict[str, int]:
        return {a.name: int(v) for a, v in self._items}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Valuation) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a.name}={int(v)}" for a, v in self._items) + "}"

    __repr__ = __str__


def eval_formula(f: Formula, v: Valuation) -> bool:
    """Classical truth value of ``f`` under ``v``."""
    match f:
        case Bottom():
            return False
        case Top():
            return True
        case Atomic(atom):
            return v[atom]
        case Not(child):
            return not eval_formula(child, v)
        case And(a, b):
            return eval_formula(a, v) and eval_formula(b, v)
        case Or(a, b):
            return eval_formula(a, v) or eval_formula(b, v)
        case Implies(a, b):
            return (not eval_formula(a, v)) or eval_formula(b, v)
        case Iff(a, b):
            return eval_formula(a, v) == eval_formula(b, v)
    raise TypeError(f"not a formula: {f!r}")


def scope_atoms(formulas: Iterable[Formula]) -> tuple[Atom, ...]:
    """Union of the atoms of ``formulas``, sorted by id."""
    found: dict[Atom, None] = {}
    for f in formulas:
        for a in atoms_of(f):
            found[a] = None
    return tuple(sorted(found, key=lambda a: a.id))


def all_valuations(scope: Sequence[Atom]) -> Iterator[Valuation]:
    """Valuations over ``scope`` in binary counting order.

    The all-false valuation comes first and the atom with the lowest id is
    the least significant position.
    """
    atoms = sorted(scope, key=lambda a: a.id)
    for index in range(1 << len(atoms)):
        yield Valuation({a: bool((index >> i) & 1) for i, a in enumerate(atoms)})


def _check_cap(scope: Sequence[Atom], cap: int) -> None:
    if len(scope) > cap:
        raise AtomCapError(f"{len(scope)} atoms exceed the enumeration cap of {cap}")


def find_model(theory: Sequence[Formula], cap: int = DEFAULT_ATOM_CAP) -> Valuation | None:
    """First valuation (counting order) satisfying every theory formula.

    Returns None when the theory has no model.  The empty theory yields the
    empty valuation.
    """
    scope = scope_atoms(theory)
    _check_cap(scope, cap)
    for v in all_valuations(scope):
        if all(eval_formula(f, v) for f in theory):
            return v
    return None


def entails(theory: Sequence[Formula], goal: Formula, cap: int = DEFAULT_ATOM_CAP) -> bool:
    """True iff every model of the theory satisfies the goal."""
    scope = scope_atoms(list(theory) + [goal])
    _check_cap(scope, cap)
    for v in all_valuations(scope):
        if all(eval_formula(f, v) for f in theory) and not eval_formula(goal, v):
            return False
    return True


def equivalent(f: Formula, g: Formula, cap: int = DEFAULT_ATOM_CAP) -> bool:
    """True iff ``f`` and ``g`` agree on every valuation of their atoms."""
    scope = scope_atoms([f, g])
    _check_cap(scope, cap)
    for v in all_valuations(scope):
        if eval_formula(f, v) != eval_formula(g, v):
            return False
    return True


@lru_cache(maxsize=64)
def _atom_patterns(n: int) -> tuple[int, ...]:
    # Pattern i has bit k set iff bit i of k is set, for k < 2**n.
    patterns = []
    for i in range(n):
        block = 1 << i
        unit = ((1 << block) - 1) << block
        width = block * 2
        reps = (1 << n) // width
        repunit = ((1 << (reps * width)) - 1) // ((1 << width) - 1)
        patterns.append(unit * repunit)
    return tuple(patterns)


def truth_table(f: Formula, scope: Sequence[Atom]) -> int:
    """Bit mask of the valuations of ``scope`` satisfying ``f``.

    Bit k corresponds to the valuation at position k of the counting order
    used by ``all_valuations``.  Every atom of ``f`` must be in ``scope``.
    """
    atoms = sorted(scope, key=lambda a: a.id)
    patterns = _atom_patterns(len(atoms))
    index = {a: patterns[i] for i, a in enumerate(atoms)}
    full = (1 << (1 << len(atoms))) - 1

    def walk(g: Formula) -> int:
        match g:
            case Bottom():
                return 0
            case Top():
                return full
            case Atomic(atom):
                try:
                    return index[atom]
                except KeyError:
                    raise UnassignedAtomError(f"atom {atom.name!r} is outside the scope") from None
            case Not(child):
                return full ^ walk(child)
            case And(a, b):
                return walk(a) & walk(b)
            case Or(a, b):
                return walk(a) | walk(b)
            case Implies(a, b):
                return (full ^ walk(a)) | walk(b)
            case Iff(a, b):
                return full ^ (walk(a) ^ walk(b))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f)


def theory_table(formulas: Iterable[Formula], scope: Sequence[Atom]) -> int:
    """Mask of the valuations satisfying every formula at once."""
    full = (1 << (1 << len(scope))) - 1
    return reduce(lambda acc, f: acc & truth_table(f, scope), formulas, full)
