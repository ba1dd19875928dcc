"""Experiment harness: enumerate theories, orient, prove, compare to the oracle.

The exhaustive mode enumerates every clause-set theory over a fixed atom
universe (up to a clause count), skips inconsistent ones, orients each
with its first model, and runs the configured engines on every goal in
the inventory, recording agreement with the truth-table oracle.  Goals
are all clauses over the universe plus one canonical formula per truth
function reachable within the configured depth (enumerating formulas
literally is hopeless: their number explodes doubly exponentially, while
every semantic behaviour a depth-bounded formula can exhibit is covered
by one representative per truth table).

Random mode draws (theory, goal) instances from a seeded generator
instead; everything else is identical.  Reports are line-delimited JSON
plus a human summary and are byte-deterministic given config and seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import prover
from .clauses import Clause, ClauseSet, Literal, to_cnf
from .rewrite import RewriteSystem, axioms_of, depolarize, orient, rule_axiom
from .semantics import entails, find_model, theory_table, truth_table
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
    Top,
    print_formula,
)

SWEEP_ENGINES = ("enar-polarized", "enar-depolarized", "strategy")

_ALPHABET = "PQRSTUVWXYZABCDEFGHIJKLMNO"


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    max_atoms: int = 3
    max_clauses: int = 4
    mode: str = "exhaustive"  # or "random"
    sample: int | None = None
    seed: int | None = None
    engines: tuple[str, ...] = ("enar-polarized",)
    goal_depth: int = 3
    clause_goals: bool = True
    subsumption: bool = False
    max_generated: int = prover.DEFAULT_CAP
    workers: int = 1

    def validate(self) -> None:
        if self.max_atoms < 1 or self.max_atoms > 20:
            raise ConfigError("max_atoms must be between 1 and 20 (oracle cap)")
        if self.max_clauses < 0:
            raise ConfigError("max_clauses must be non-negative")
        if self.mode not in ("exhaustive", "random"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "random":
            if self.seed is None:
                raise ConfigError("random mode requires a seed")
            if not self.sample or self.sample < 1:
                raise ConfigError("random mode requires a positive sample count")
        unknown = [e for e in self.engines if e not in SWEEP_ENGINES]
        if unknown:
            raise ConfigError(f"unknown engines: {', '.join(unknown)}")
        if not self.engines:
            raise ConfigError("at least one engine required")
        if self.goal_depth < 0:
            raise ConfigError("goal_depth must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be positive")


@dataclass
class EngineTally:
    instances: int = 0
    agree: int = 0
    disagree: int = 0
    refuted: int = 0
    soundness_violations: int = 0
    max_generated: int = 0

    def absorb(self, other: "EngineTally") -> None:
        self.instances += other.instances
        self.agree += other.agree
        self.disagree += other.disagree
        self.refuted += other.refuted
        self.soundness_violations += other.soundness_violations
        self.max_generated = max(self.max_generated, other.max_generated)

    def as_dict(self) -> dict:
        return {
            "instances": self.instances,
            "agree": self.agree,
            "disagree": self.disagree,
            "refuted": self.refuted,
            "soundness_violations": self.soundness_violations,
            "max_generated": self.max_generated,
        }


@dataclass
class SweepReport:
    config: SweepConfig
    theories: int = 0
    consistent: int = 0
    inconsistent: int = 0
    instances: int = 0
    probe_failures: int = 0
    preservation_failures: int = 0
    engines: dict = field(default_factory=dict)
    disagreements: list = field(default_factory=list)
    out_path: str | None = None

    def engine_tally(self, name: str) -> EngineTally:
        return self.engines.setdefault(name, EngineTally())

    def polarized_disagreements(self) -> int:
        tally = self.engines.get("enar-polarized")
        return tally.disagree if tally else 0

    def summary_dict(self) -> dict:
        return {
            "kind": "summary",
            "theories": self.theories,
            "consistent": self.consistent,
            "inconsistent": self.inconsistent,
            "instances": self.instances,
            "probe_failures": self.probe_failures,
            "preservation_failures": self.preservation_failures,
            "disagreements": len(self.disagreements),
            "engines": {name: tally.as_dict() for name, tally in sorted(self.engines.items())},
        }

    def summary_lines(self) -> list[str]:
        lines = [
            f"theories: {self.theories} ({self.consistent} consistent, {self.inconsistent} inconsistent)",
            f"instances: {self.instances}",
            f"probe failures: {self.probe_failures}",
            f"theory-preservation failures: {self.preservation_failures}",
        ]
        for name, tally in sorted(self.engines.items()):
            lines.append(
                f"{name}: {tally.instances} runs, {tally.agree} agree, {tally.disagree} disagree, "
                f"{tally.soundness_violations} soundness violations, max generated {tally.max_generated}"
            )
        return lines


def universe(n_atoms: int) -> tuple[Interner, tuple[Atom, ...]]:
    """A fresh interner holding the first ``n_atoms`` universe atoms."""
    interner = Interner()
    atoms = tuple(interner.intern(_ALPHABET[i]) for i in range(n_atoms))
    return interner, atoms


def clause_universe(atoms: Sequence[Atom]) -> list[Clause]:
    """Every non-empty, non-tautological clause over ``atoms``.

    Enumerated by base-3 counting: each atom is absent, positive or
    negative, the first atom being the least significant digit.
    """
    n = len(atoms)
    clauses = []
    for code in range(1, 3 ** n):
        literals = []
        rest = code
        for a in atoms:
            rest, digit = divmod(rest, 3)
            if digit == 1:
                literals.append(Literal(a, True))
            elif digit == 2:
                literals.append(Literal(a, False))
        clauses.append(Clause(literals))
    return clauses


def formula_classes(atoms: Sequence[Atom], depth: int) -> list[tuple[Formula, int, int]]:
    """One canonical formula per truth function reachable within ``depth``.

    Level 0 holds the constants and the atoms; level k combines earlier
    representatives with every connective.  The first formula constructed
    for a truth table wins, so representatives have minimal depth under
    the fixed construction order.
    """
    full = (1 << (1 << len(atoms))) - 1
    reps: list[tuple[Formula, int, int]] = []
    seen: set[int] = set()

    def add(f: Formula, table: int, level: int) -> None:
        if table not in seen:
            seen.add(table)
            reps.append((f, table, level))

    add(Bottom(), 0, 0)
    add(Top(), full, 0)
    for a in atoms:
        add(Atomic(a), truth_table(Atomic(a), atoms), 0)

    for level in range(1, depth + 1):
        pool = list(reps)
        for f, t, l in pool:
            if l == level - 1:
                add(Not(f), full ^ t, level)
        for op, combine in (
            (And, lambda x, y: x & y),
            (Or, lambda x, y: x | y),
            (Implies, lambda x, y: (full ^ x) | y),
            (Iff, lambda x, y: full ^ (x ^ y)),
        ):
            for f1, t1, l1 in pool:
                for f2, t2, l2 in pool:
                    if max(l1, l2) != level - 1:
                        continue
                    add(op(f1, f2), combine(t1, t2), level)
    return reps


@dataclass(frozen=True)
class Goal:
    kind: str  # "clause" or "formula"
    formula: Formula
    text: str
    table: int
    neg_masks: tuple[tuple[int, int, int, int], ...]
    has_empty: bool  # negated goal clausifies to a set holding the empty clause


def _goal_of(kind: str, f: Formula, atoms: Sequence[Atom], index: dict[Atom, int]) -> Goal:
    neg_cnf = to_cnf(Not(f))
    masks = tuple(prover.clause_masks(c, index) for c in neg_cnf)
    return Goal(
        kind=kind,
        formula=f,
        text=print_formula(f),
        table=truth_table(f, atoms),
        neg_masks=masks,
        has_empty=any(c.is_empty() for c in neg_cnf),
    )


def goal_inventory(atoms: Sequence[Atom], depth: int, clause_goals: bool) -> list[Goal]:
    index = {a: i for i, a in enumerate(atoms)}
    goals = []
    if clause_goals:
        for c in clause_universe(atoms):
            goals.append(_goal_of("clause", c.formula(), atoms, index))
    for f, _t, _l in formula_classes(atoms, depth):
        goals.append(_goal_of("formula", f, atoms, index))
    return goals


def random_formula(rng: random.Random, atoms: Sequence[Atom], depth: int) -> Formula:
    """A random formula of depth at most ``depth`` (for random sweeps)."""
    if depth == 0 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.08:
            return Bottom()
        if roll < 0.16:
            return Top()
        return Atomic(rng.choice(list(atoms)))
    pick = rng.randrange(5)
    if pick == 0:
        return Not(random_formula(rng, atoms, depth - 1))
    op = (And, Or, Implies, Iff)[pick - 1]
    return op(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))


def _exhaustive_descriptors(n_clauses: int, max_clauses: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    descriptors: list[tuple[int, ...]] = []
    for k in range(min(max_clauses, n_clauses) + 1):
        descriptors.extend(combinations(range(n_clauses), k))
    return descriptors


def _random_descriptors(cfg: SweepConfig, n_clauses: int, atoms: Sequence[Atom]) -> list[tuple[tuple[int, ...], Formula]]:
    rng = random.Random(cfg.seed)
    out = []
    for _ in range(cfg.sample):
        k = rng.randint(1, min(cfg.max_clauses, n_clauses))
        combo = tuple(sorted(rng.sample(range(n_clauses), k)))
        goal = random_formula(rng, atoms, cfg.goal_depth)
        out.append((combo, goal))
    return out


# Worker-side context, built once per process.
_CTX: dict = {}


def _context(cfg: SweepConfig) -> dict:
    key = (cfg.max_atoms, cfg.goal_depth, cfg.clause_goals, cfg.mode)
    ctx = _CTX.get(key)
    if ctx is None:
        interner, atoms = universe(cfg.max_atoms)
        index = {a: i for i, a in enumerate(atoms)}
        clauses = clause_universe(atoms)
        goals: list[Goal] = []
        if cfg.mode == "exhaustive":
            goals = goal_inventory(atoms, cfg.goal_depth, cfg.clause_goals)
        ctx = {
            "interner": interner,
            "atoms": atoms,
            "index": index,
            "clauses": clauses,
            "goals": goals,
            "full": (1 << (1 << len(atoms))) - 1,
        }
        _CTX[key] = ctx
    return ctx


def _run_goal_masks(cfg: SweepConfig, n_atoms: int, initial, payload, *, narrowing: bool, strategy: bool):
    """Kernel-direct engine run; returns (refuted, inferences, generated)."""
    kern = prover.kernel_for(n_atoms)
    status, masks, _steps, generated, _deq = kern.saturate(
        n_atoms, initial, payload,
        narrowing=narrowing, strategy=strategy,
        subsumption=cfg.subsumption, max_generated=cfg.max_generated, record=False,
    )
    if status == prover.KERNEL_CAP:
        raise prover.CapExceededError(generated, cfg.max_generated)
    return status == prover.KERNEL_REFUTED, len(masks) - len(initial), generated


def _process_theory(cfg: SweepConfig, ctx: dict, t_index: int,
                    combo: Sequence[int], goals: Sequence[Goal]):
    """Run one theory against its goals; returns (records, tallies, counters)."""
    atoms = ctx["atoms"]
    index = ctx["index"]
    full = ctx["full"]
    theory_clauses = [ctx["clauses"][i] for i in combo]
    formulas = [c.formula() for c in theory_clauses]

    model = find_model(formulas)
    if model is None:
        record = {"kind": "theory", "i": t_index, "consistent": False,
                  "clauses": [str(c) for c in theory_clauses]}
        return [record], {}, {"consistent": 0, "inconsistent": 1, "instances": 0,
                              "probe_failures": 0, "preservation_failures": 0}

    cs = ClauseSet(theory_clauses)
    system = orient(cs, model)
    t_table = theory_table(formulas, atoms)
    axioms = axioms_of(system)
    preservation_ok = theory_table(axioms, atoms) == t_table

    probe = prover.prove(system, Bottom(), record=False,
                         subsumption=cfg.subsumption, max_generated=cfg.max_generated)
    probe_ok = probe.saturated and probe.stats.inferences == 0

    depol = depolarize(system)
    prepared: dict[str, tuple] = {}
    if "enar-polarized" in cfg.engines:
        prepared["enar-polarized"] = ("narrow", prover.rules_payload(system, index))
    if "enar-depolarized" in cfg.engines:
        prepared["enar-depolarized"] = ("narrow", prover.rules_payload(depol, index))
    if "strategy" in cfg.engines:
        compiled = prover.strategy_compile(depol)
        prepared["strategy"] = ("strategy", tuple(prover.clause_masks(c, index) for c in compiled))

    tallies = {name: EngineTally() for name in cfg.engines}
    records: list[dict] = []
    disagreements: list[dict] = []
    engine_counts = {name: {"agree": 0, "disagree": 0, "refuted": 0} for name in cfg.engines}

    for goal in goals:
        oracle = (t_table & (full ^ goal.table)) == 0
        for name in cfg.engines:
            mode, data = prepared[name]
            if goal.has_empty:
                refuted, inferences, generated = True, 0, 0
            elif mode == "narrow":
                refuted, inferences, generated = _run_goal_masks(
                    cfg, len(atoms), list(goal.neg_masks), data, narrowing=True, strategy=False)
            else:
                initial = list(goal.neg_masks) + list(data)
                refuted, inferences, generated = _run_goal_masks(
                    cfg, len(atoms), initial, (), narrowing=False, strategy=True)
            tally = tallies[name]
            tally.instances += 1
            tally.max_generated = max(tally.max_generated, generated)
            if refuted:
                tally.refuted += 1
                engine_counts[name]["refuted"] += 1
            if refuted == oracle:
                tally.agree += 1
                engine_counts[name]["agree"] += 1
            else:
                tally.disagree += 1
                engine_counts[name]["disagree"] += 1
                if refuted and not oracle:
                    tally.soundness_violations += 1
                disagreements.append({
                    "kind": "disagreement",
                    "theory": t_index,
                    "theory_clauses": [str(c) for c in theory_clauses],
                    "model": model.as_int_dict(),
                    "engine": name,
                    "goal": goal.text,
                    "goal_kind": goal.kind,
                    "verdict": "refuted" if refuted else "saturated",
                    "oracle": oracle,
                    "oracle_recheck": entails(formulas, goal.formula),
                    "inferences": inferences,
                })

    record = {
        "kind": "theory",
        "i": t_index,
        "consistent": True,
        "clauses": [str(c) for c in theory_clauses],
        "model": model.as_int_dict(),
        "rules": [str(r) for r in system.rules],
        "axioms_ok": preservation_ok,
        "probe_verdict": probe.verdict.value,
        "probe_inferences": probe.stats.inferences,
        "goals": len(goals),
        "engines": engine_counts,
    }
    records.append(record)
    records.extend(disagreements)
    counters = {
        "consistent": 1,
        "inconsistent": 0,
        "instances": len(goals) * len(cfg.engines),
        "probe_failures": 0 if probe_ok else 1,
        "preservation_failures": 0 if preservation_ok else 1,
    }
    return records, tallies, counters


def _worker(args):
    cfg, start, chunk = args
    ctx = _context(cfg)
    all_records: list[dict] = []
    tallies = {name: EngineTally() for name in cfg.engines}
    counters = {"consistent": 0, "inconsistent": 0, "instances": 0,
                "probe_failures": 0, "preservation_failures": 0}
    for offset, descriptor in enumerate(chunk):
        if cfg.mode == "random":
            combo, goal_formula = descriptor
            goals = [_goal_of("formula", goal_formula, ctx["atoms"], ctx["index"])]
        else:
            combo = descriptor
            goals = ctx["goals"]
        records, t_tallies, t_counters = _process_theory(cfg, ctx, start + offset, combo, goals)
        all_records.extend(records)
        for name, tally in t_tallies.items():
            tallies[name].absorb(tally)
        for key, value in t_counters.items():
            counters[key] += value
    return all_records, tallies, counters


def run_sweep(cfg: SweepConfig, out: str | Path | None = None) -> SweepReport:
    """Run the configured sweep; write the JSONL report when ``out`` given."""
    cfg.validate()
    ctx = _context(cfg)
    if cfg.mode == "exhaustive":
        descriptors: list = _exhaustive_descriptors(len(ctx["clauses"]), cfg.max_clauses)
    else:
        descriptors = _random_descriptors(cfg, len(ctx["clauses"]), ctx["atoms"])

    report = SweepReport(config=cfg, theories=len(descriptors))
    for name in cfg.engines:
        report.engine_tally(name)

    if cfg.workers > 1 and len(descriptors) > 1:
        from multiprocessing import Pool

        chunk_size = max(1, len(descriptors) // (cfg.workers * 8))
        jobs = []
        for start in range(0, len(descriptors), chunk_size):
            jobs.append((cfg, start, descriptors[start:start + chunk_size]))
        with Pool(cfg.workers) as pool:
            results = pool.map(_worker, jobs)
    else:
        results = [_worker((cfg, 0, descriptors))]

    all_records: list[dict] = []
    for records, tallies, counters in results:
        all_records.extend(records)
        for name, tally in tallies.items():
            report.engine_tally(name).absorb(tally)
        report.consistent += counters["consistent"]
        report.inconsistent += counters["inconsistent"]
        report.instances += counters["instances"]
        report.probe_failures += counters["probe_failures"]
        report.preservation_failures += counters["preservation_failures"]

    report.disagreements = [r for r in all_records if r["kind"] == "disagreement"]

    if out is not None:
        path = Path(out)
        with path.open("w", encoding="utf-8") as fh:
            header = {
                "kind": "config",
                "max_atoms": cfg.max_atoms,
                "max_clauses": cfg.max_clauses,
                "mode": cfg.mode,
                "sample": cfg.sample,
                "seed": cfg.seed,
                "engines": list(cfg.engines),
                "goal_depth": cfg.goal_depth,
                "clause_goals": cfg.clause_goals,
                "subsumption": cfg.subsumption,
                "goals": len(ctx["goals"]) if cfg.mode == "exhaustive" else 1,
                "clause_universe": len(ctx["clauses"]),
            }
            fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
            for record in all_records:
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
            fh.write(json.dumps(report.summary_dict(), sort_keys=True, separators=(",", ":")) + "\n")
        report.out_path = str(path)
    return report


def run_fixed(system: RewriteSystem, goal_formulas: Iterable[Formula],
              engines: Sequence[str] = SWEEP_ENGINES, *, subsumption: bool = False,
              max_generated: int = prover.DEFAULT_CAP, out: str | Path | None = None) -> SweepReport:
    """Run engines against a hand-given rewrite system.

    The oracle theory is what the rules stand for: ``body -> head`` for
    positive rules, ``head -> body`` for negative ones, ``head <-> body``
    for both-polarity ones.  This is how a documented incompleteness (a
    both-polarity rule whose body mentions its own head) shows up as a
    recorded disagreement.
    """
    cfg = SweepConfig(engines=tuple(engines), subsumption=subsumption, max_generated=max_generated)
    axioms = [rule_axiom(r) for r in system.rules]
    all_both = all(r.polarity.value == "." for r in system.rules)
    depol = depolarize(system)
    systems = {
        "enar-polarized": system,
        "enar-depolarized": depol,
        "strategy": system if all_both else depol,
    }
    report = SweepReport(config=cfg, theories=1, consistent=1)
    records: list[dict] = []
    goals = list(goal_formulas)
    for goal in goals:
        oracle = entails(axioms, goal)
        for name in engines:
            if name == "strategy":
                compiled = prover.strategy_compile(systems[name])
                result = prover.strategy_refute(to_cnf(Not(goal)), compiled, record=False,
                                                subsumption=subsumption, max_generated=max_generated)
            else:
                result = prover.prove(systems[name], goal, record=False,
                                      subsumption=subsumption, max_generated=max_generated)
            tally = report.engine_tally(name)
            tally.instances += 1
            report.instances += 1
            tally.max_generated = max(tally.max_generated, result.stats.generated)
            agree = result.refuted == oracle
            if result.refuted:
                tally.refuted += 1
            record = {
                "kind": "instance" if agree else "disagreement",
                "theory": 0,
                "rules": [str(r) for r in system.rules],
                "engine": name,
                "goal": print_formula(goal),
                "goal_kind": "formula",
                "verdict": result.verdict.value,
                "oracle": oracle,
                "inferences": result.stats.inferences,
            }
            if agree:
                tally.agree += 1
            else:
                tally.disagree += 1
                if result.refuted and not oracle:
                    tally.soundness_violations += 1
                record["oracle_recheck"] = entails(axioms, goal)
            records.append(record)
    report.disagreements = [r for r in records if r["kind"] == "disagreement"]
    if out is not None:
        path = Path(out)
        with path.open("w", encoding="utf-8") as fh:
            header = {"kind": "config", "mode": "fixed", "engines": list(engines),
                      "rules": [str(r) for r in system.rules], "goals": len(goals),
                      "subsumption": subsumption}
            fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
            for record in records:
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
            fh.write(json.dumps(report.summary_dict(), sort_keys=True, separators=(",", ":")) + "\n")
        report.out_path = str(path)
    return report
