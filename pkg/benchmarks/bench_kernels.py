#!/usr/bin/env python3
"""Benchmark the compiled saturation kernel against the pure-Python one.

The workload is a slice of the exhaustive sweep: every consistent theory
over 3 atoms with up to 3 clauses, oriented with its first model, run
against the full goal inventory.  Both kernels must return identical
verdicts; timings and the speedup are printed.

Usage: python benchmarks/bench_kernels.py [--clauses N] [--atoms N]
"""

from __future__ import annotations

import argparse
import time

from resmod import _pykernel, prover
from resmod.clauses import ClauseSet
from resmod.rewrite import orient
from resmod.semantics import find_model
from resmod.sweep import clause_universe, goal_inventory, universe
from resmod.sweep import _exhaustive_descriptors

try:
    from resmod import _kernel
except ImportError:
    _kernel = None


def build_workload(n_atoms: int, max_clauses: int):
    _, atoms = universe(n_atoms)
    index = {a: i for i, a in enumerate(atoms)}
    clauses = clause_universe(atoms)
    goals = [g for g in goal_inventory(atoms, 3, True) if not g.has_empty]
    workload = []
    for combo in _exhaustive_descriptors(len(clauses), max_clauses):
        theory = [clauses[i] for i in combo]
        model = find_model([c.formula() for c in theory])
        if model is None:
            continue
        system = orient(ClauseSet(theory), model)
        payload = prover.rules_payload(system, index)
        workload.append(payload)
    return len(atoms), workload, goals


def run(kernel, n_atoms, workload, goals):
    t0 = time.perf_counter()
    refuted = 0
    runs = 0
    for payload in workload:
        for goal in goals:
            status, masks, _s, _g, _d = kernel.saturate(
                n_atoms, list(goal.neg_masks), payload,
                narrowing=True, strategy=False, record=False)
            refuted += status == _pykernel.REFUTED
            runs += 1
    return time.perf_counter() - t0, runs, refuted


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--atoms", type=int, default=3)
    ap.add_argument("--clauses", type=int, default=3)
    args = ap.parse_args()

    n_atoms, workload, goals = build_workload(args.atoms, args.clauses)
    print(f"workload: {len(workload)} oriented theories x {len(goals)} goals")

    pure_t, runs, pure_refuted = run(_pykernel, n_atoms, workload, goals)
    print(f"pure:     {pure_t:8.2f} s   {pure_t / runs * 1e6:7.2f} us/run   ({runs} runs)")

    if _kernel is None:
        print("compiled: not built (pip install -e . builds it)")
        return 0

    comp_t, runs2, comp_refuted = run(_kernel, n_atoms, workload, goals)
    print(f"compiled: {comp_t:8.2f} s   {comp_t / runs2 * 1e6:7.2f} us/run   ({runs2} runs)")
    print(f"speedup:  {pure_t / comp_t:.1f}x")
    if (runs, pure_refuted) != (runs2, comp_refuted):
        print("MISMATCH: kernels disagree on verdicts!")
        return 1
    print(f"verdict agreement: both refuted {comp_refuted}/{runs}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
