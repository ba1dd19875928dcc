"""Propositional resolution modulo.

Orient a consistent theory into a polarized rewrite system using one of
its models, prove goals by resolution plus extended narrowing (or by the
equivalent marked-clause resolution strategy), and check empirically that
the resulting provers fail immediately when asked to prove a
contradiction.
"""

from .clauses import (
    Clause,
    ClauseSet,
    Literal,
    clausify_with_context,
    normalize_clause,
    parse_clause,
    parse_clause_set,
    to_cnf,
)
from .prover import (
    CapExceededError,
    Derivation,
    Narrowing,
    ProverResult,
    Resolution,
    Verdict,
    enar_refute,
    format_derivation,
    narrow,
    plain_refute,
    prove,
    resolve,
    strategy_compile,
    strategy_refute,
)
from .rewrite import (
    OrientationError,
    Polarity,
    RewriteSystem,
    Rule,
    axioms_of,
    depolarize,
    orient,
    parse_rule,
    parse_rules,
    rule_axiom,
    validate,
)
from .semantics import (
    Valuation,
    entails,
    equivalent,
    eval_formula,
    find_model,
    truth_table,
)
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
    parse_formula,
    parse_theory,
    print_formula,
)

__version__ = "0.1.0"
