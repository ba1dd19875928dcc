"""Command-line front door: orient, prove, probe, sweep.

Exit codes: 0 success (for ``prove``: goal proved; for ``sweep``: no
disagreement on the engine expected to be complete), 1 parse or config
error, 2 inconsistent theory, 3 goal not proved, 5 sweep found
enar-polarized disagreements.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import prover, sweep as sweepmod
from .clauses import ClauseSet, to_cnf
from .rewrite import (
    OrientationError,
    RewriteSystem,
    axioms_of,
    depolarize,
    orient,
    parse_rules,
    rule_axiom,
    validate,
)
from .semantics import equivalent, find_model
from .syntax import (
    Bottom,
    Formula,
    Interner,
    Not,
    ParseError,
    atoms_of,
    conjoin,
    parse_formula,
    parse_theory,
    print_formula,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INCONSISTENT = 2
EXIT_NOT_PROVED = 3
EXIT_DISAGREEMENT = 5

ENGINE_CHOICES = ("enar", "enar-polarized", "enar-depolarized", "strategy", "plain")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_theory(path: str, interner: Interner) -> list[Formula]:
    return parse_theory(_read(path), interner)


def _orient_theory(formulas: list[Formula]) -> tuple:
    """Clausify, find the first model, orient.  Returns (clauses, model, system)."""
    clauses = ClauseSet(c for f in formulas for c in to_cnf(f))
    model = find_model(formulas)
    if model is None:
        return clauses, None, None
    return clauses, model, orient(clauses, model)


def cmd_orient(args: argparse.Namespace) -> int:
    interner = Interner()
    formulas = _load_theory(args.theory, interner)
    clauses, model, system = _orient_theory(formulas)
    if model is None:
        print("inconsistent theory: no model", file=sys.stderr)
        return EXIT_INCONSISTENT
    print(f"model: {model}")
    print("rules:")
    for r in system.rules:
        print(f"  {r}")
    print("axioms:")
    axioms = axioms_of(system)
    for a in axioms:
        print(f"  {print_formula(a)}")
    ok = equivalent(conjoin(axioms), conjoin(formulas))
    print(f"theory preservation: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK


def _engine_result(engine: str, system: RewriteSystem | None,
                   theory_clauses: ClauseSet | None, goal: Formula,
                   subsumption: bool, record: bool) -> prover.ProverResult:
    goal_clauses = to_cnf(Not(goal))
    if engine in ("enar", "enar-polarized"):
        return prover.prove(system, goal, subsumption=subsumption, record=record)
    if engine == "enar-depolarized":
        return prover.prove(depolarize(system), goal, subsumption=subsumption, record=record)
    if engine == "strategy":
        base = system if all(r.polarity.value == "." for r in system.rules) else depolarize(system)
        compiled = prover.strategy_compile(base)
        return prover.strategy_refute(goal_clauses, compiled, subsumption=subsumption, record=record)
    if engine == "plain":
        return prover.plain_refute(goal_clauses, theory_clauses, subsumption=subsumption, record=record)
    raise ValueError(f"unknown engine {engine!r}")


def cmd_prove(args: argparse.Namespace) -> int:
    interner = Interner()
    if args.rules:
        system = parse_rules(_read(args.rules), interner)
        violations = validate(system)
        if violations:
            print("error: " + "; ".join(violations), file=sys.stderr)
            return EXIT_PARSE
        theory_clauses = ClauseSet(c for r in system.rules for c in to_cnf(rule_axiom(r)))
    else:
        formulas = _load_theory(args.theory, interner)
        theory_clauses, model, system = _orient_theory(formulas)
        if model is None:
            print("inconsistent theory: no model", file=sys.stderr)
            return EXIT_INCONSISTENT
    goal = parse_formula(args.goal, interner)
    record = bool(args.trace or args.trace_json)
    result = _engine_result(args.engine, system, theory_clauses, goal,
                            args.subsumption, record)
    print(f"verdict: {result.verdict.value.capitalize()}")
    print(f"inferences: {result.stats.inferences}")
    if args.trace and result.derivation is not None:
        print(prover.format_derivation(result.derivation))
    if args.trace_json and result.derivation is not None:
        print(json.dumps(prover.derivation_records(result.derivation),
                         sort_keys=True, separators=(",", ":")))
    return EXIT_OK if result.refuted else EXIT_NOT_PROVED


def cmd_probe(args: argparse.Namespace) -> int:
    interner = Interner()
    formulas = _load_theory(args.theory, interner)
    theory_clauses, model, system = _orient_theory(formulas)
    if model is None:
        print("inconsistent theory: no model", file=sys.stderr)
        return EXIT_INCONSISTENT
    print(f"model: {model}")
    print("rules:")
    for r in system.rules:
        print(f"  {r}")
    # The contradiction is handed to the engines as an ordinary goal; the
    # engines themselves never treat it specially.
    goal = Bottom()
    ok = True
    for engine in ("enar-polarized", "enar-depolarized", "strategy"):
        result = _engine_result(engine, system, theory_clauses, goal, args.subsumption, False)
        print(f"probe {engine}: {result.verdict.value}, {result.stats.inferences} inferences")
        ok = ok and result.saturated and result.stats.inferences == 0
    baseline = prover.plain_refute(to_cnf(Not(goal)), theory_clauses,
                                   subsumption=args.subsumption, record=False)
    print(f"plain resolution baseline: {baseline.verdict.value}, "
          f"{baseline.stats.inferences} inferences")
    if ok:
        print("PASS: the attempt fails immediately on every engine")
        return EXIT_OK
    print("FAIL: some engine did work or succeeded on the contradiction")
    return 1


def cmd_sweep(args: argparse.Namespace) -> int:
    engines = []
    for item in args.engine or []:
        engines.extend(e.strip() for e in item.split(",") if e.strip())
    if args.rules:
        interner = Interner()
        system = parse_rules(_read(args.rules), interner)
        if args.goal:
            goals = [parse_formula(args.goal, interner)]
        else:
            atoms = sorted({r.head for r in system.rules}
                           | {a for r in system.rules for a in atoms_of(r.body)},
                           key=lambda a: a.id)
            goals = [f for f, _t, _l in sweepmod.formula_classes(atoms, args.depth)]
        engines = engines or list(sweepmod.SWEEP_ENGINES)
        report = sweepmod.run_fixed(system, goals, engines,
                                    subsumption=args.subsumption, out=args.out)
    else:
        cfg = sweepmod.SweepConfig(
            max_atoms=args.atoms,
            max_clauses=args.clauses,
            mode="random" if args.sample else "exhaustive",
            sample=args.sample,
            seed=args.seed,
            engines=tuple(engines) if engines else ("enar-polarized",),
            goal_depth=args.depth,
            clause_goals=not args.no_clause_goals,
            subsumption=args.subsumption,
            workers=args.workers,
        )
        try:
            cfg.validate()
        except sweepmod.ConfigError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_PARSE
        report = sweepmod.run_sweep(cfg, out=args.out)
    for line in report.summary_lines():
        print(line)
    if report.out_path:
        print(f"report: {report.out_path}")
    if report.polarized_disagreements() > 0:
        return EXIT_DISAGREEMENT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resmod",
        description="Orient consistent propositional theories into rewrite "
                    "systems and prove modulo them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_orient = sub.add_parser("orient", help="orient a theory file and print the rules")
    p_orient.add_argument("theory", help="theory file, one formula per line")
    p_orient.set_defaults(func=cmd_orient)

    p_prove = sub.add_parser("prove", help="prove a goal modulo a theory or rules file")
    p_prove.add_argument("theory", nargs="?", help="theory file (oriented first)")
    p_prove.add_argument("--rules", help="rewrite rules file (used as given)")
    p_prove.add_argument("--goal", required=True, help="goal formula")
    p_prove.add_argument("--engine", default="enar-polarized", choices=ENGINE_CHOICES)
    p_prove.add_argument("--trace", action="store_true", help="print the derivation")
    p_prove.add_argument("--trace-json", action="store_true",
                         help="print the derivation as JSON records")
    p_prove.add_argument("--subsumption", action="store_true",
                         help="enable forward subsumption")
    p_prove.set_defaults(func=cmd_prove)

    p_probe = sub.add_parser("probe", help="attempt to prove the contradiction; must fail at once")
    p_probe.add_argument("theory", help="theory file")
    p_probe.add_argument("--subsumption", action="store_true")
    p_probe.set_defaults(func=cmd_probe)

    p_sweep = sub.add_parser("sweep", help="compare engines against the oracle over many instances")
    p_sweep.add_argument("--atoms", type=int, default=3)
    p_sweep.add_argument("--clauses", type=int, default=4)
    p_sweep.add_argument("--depth", type=int, default=3, help="goal formula depth")
    p_sweep.add_argument("--engine", action="append",
                         help="engine to run (repeatable or comma separated)")
    p_sweep.add_argument("--sample", type=int, help="random mode: number of instances")
    p_sweep.add_argument("--seed", type=int, help="random mode seed")
    p_sweep.add_argument("--rules", help="fixed-instance mode: rules file")
    p_sweep.add_argument("--goal", help="fixed-instance mode: goal formula")
    p_sweep.add_argument("--out", help="write the JSONL report here")
    p_sweep.add_argument("--no-clause-goals", action="store_true")
    p_sweep.add_argument("--subsumption", action="store_true")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "prove" and bool(args.theory) == bool(args.rules):
        print("error: give exactly one of a theory file or --rules", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (ParseError, OrientationError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
