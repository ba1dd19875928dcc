"""Saturation kernel, pure-Python implementation.

A clause is a 4-tuple of bit masks over atom indices: (positive,
negative, positive-marked, negative-marked) literal slots.  A rule is a
tuple (head index, applies-to-positive-literal, applies-to-negative-
literal, clausified body for a positive literal, clausified body for a
negative literal); body clauses are unmarked (positive, negative) pairs.

The loop is a FIFO given-clause saturation: clause i is resolved against
every earlier clause, then narrowed by every applicable rule on every
literal, and novel conclusions are appended.  Admission order is the
queue order, so no explicit queue is needed.  The compiled extension
module implements exactly the same procedure and must stay step-for-step
identical; keep the two in sync.
"""

from __future__ import annotations

SATURATED = 0
REFUTED = 1
CAP = -1

# Literal slots: 0 positive, 1 negative, 2 positive-marked, 3 negative-marked.
# In-clause scan order: positive before negative, unmarked before marked.
_SLOT_ORDER = (0, 2, 1, 3)

# Resolution pairs (slot in the dequeued clause, complementary slot in the
# processed clause), enumerated in the dequeued clause's literal order.
_PAIRS = ((0, 1), (0, 3), (2, 1), (2, 3), (1, 0), (1, 2), (3, 0), (3, 2))


def _subsumed(q, clauses):
    q0, q1, q2, q3 = q
    for s0, s1, s2, s3 in clauses:
        if s0 & ~q0 == 0 and s1 & ~q1 == 0 and s2 & ~q2 == 0 and s3 & ~q3 == 0:
            return True
    return False


def saturate(n_atoms, initial, rules, *, narrowing, strategy,
             subsumption=False, max_generated=1000000, record=True):
    """Run the saturation loop.

    Returns (status, clauses, steps, generated, dequeued) where status is
    REFUTED, SATURATED or CAP, clauses is every admitted clause in
    admission order (the initial ones first), steps has one record per
    clause admitted beyond the input (("r", i, j, atom, slot_i, slot_j) or
    ("n", i, atom, slot, rule)) when recording is on, generated counts
    every conclusion built including duplicates and tautologies, and
    dequeued counts loop iterations.

    The caller must hand in deduplicated, tautology-free, non-empty
    initial clauses.
    """
    clauses = [(int(a), int(b), int(c), int(d)) for a, b, c, d in initial]
    seen = set(clauses)
    steps = []
    generated = 0
    i = 0
    while i < len(clauses):
        c = clauses[i]
        c0, c1, c2, c3 = c
        c_marked = (c2 | c3) != 0
        for j in range(i):
            p = clauses[j]
            p0, p1, p2, p3 = p
            p_marked = (p2 | p3) != 0
            if strategy and c_marked and p_marked:
                continue
            common = ((c0 | c2) & (p1 | p3)) | ((c1 | c3) & (p0 | p2))
            if not common:
                continue
            for a in range(n_atoms):
                bit = 1 << a
                if not common & bit:
                    continue
                for cs, ps in _PAIRS:
                    if not (c[cs] & bit and p[ps] & bit):
                        continue
                    if strategy and ((c_marked and cs < 2) or (p_marked and ps < 2)):
                        continue
                    generated += 1
                    if generated > max_generated:
                        return CAP, clauses, steps, generated, i + 1
                    f0, f1, f2, f3 = c0, c1, c2, c3
                    if cs == 0:
                        f0 &= ~bit
                    elif cs == 1:
                        f1 &= ~bit
                    elif cs == 2:
                        f2 &= ~bit
                    else:
                        f3 &= ~bit
                    g0, g1, g2, g3 = p0, p1, p2, p3
                    if ps == 0:
                        g0 &= ~bit
                    elif ps == 1:
                        g1 &= ~bit
                    elif ps == 2:
                        g2 &= ~bit
                    else:
                        g3 &= ~bit
                    q = (f0 | g0, f1 | g1, f2 | g2, f3 | g3)
                    if (q[0] & q[1]) | (q[2] & q[3]):
                        continue
                    if q in seen:
                        continue
                    if subsumption and _subsumed(q, clauses):
                        continue
                    clauses.append(q)
                    seen.add(q)
                    if record:
                        steps.append(("r", i, j, a, cs, ps))
                    if q == (0, 0, 0, 0):
                        return REFUTED, clauses, steps, generated, i + 1
        if narrowing and rules:
            all_lits = c0 | c1 | c2 | c3
            for a in range(n_atoms):
                bit = 1 << a
                if not all_lits & bit:
                    continue
                for slot in _SLOT_ORDER:
                    if not c[slot] & bit:
                        continue
                    positive = (slot & 1) == 0
                    for ri, (head, app_pos, app_neg, cnf_pos, cnf_neg) in enumerate(rules):
                        if head != a:
                            continue
                        if not (app_pos if positive else app_neg):
                            continue
                        f0, f1, f2, f3 = c0, c1, c2, c3
                        if slot == 0:
                            f0 &= ~bit
                        elif slot == 1:
                            f1 &= ~bit
                        elif slot == 2:
                            f2 &= ~bit
                        else:
                            f3 &= ~bit
                        for dpu, dnu in (cnf_pos if positive else cnf_neg):
                            generated += 1
                            if generated > max_generated:
                                return CAP, clauses, steps, generated, i + 1
                            q = (f0 | dpu, f1 | dnu, f2, f3)
                            if (q[0] & q[1]) | (q[2] & q[3]):
                                continue
                            if q in seen:
                                continue
                            if subsumption and _subsumed(q, clauses):
                                continue
                            clauses.append(q)
                            seen.add(q)
                            if record:
                                steps.append(("n", i, a, slot, ri))
                            if q == (0, 0, 0, 0):
                                return REFUTED, clauses, steps, generated, i + 1
        i += 1
    return SATURATED, clauses, steps, generated, i
