# cython: language_level=3, boundscheck=False, wraparound=False
"""Saturation kernel, compiled twin of ``_pykernel``.

Same clause encoding (4 bit-mask slots), same rule encoding, same scan
order; the two implementations must stay step-for-step identical.  Masks
live in 64-bit words here, so the selecting wrapper only routes problems
with at most 60 atoms this way.
"""

from libcpp.vector cimport vector

ctypedef unsigned long long u64

SATURATED = 0
REFUTED = 1
CAP = -1

cdef int[8] _PAIR_C = [0, 0, 2, 2, 1, 1, 3, 3]
cdef int[8] _PAIR_P = [1, 3, 1, 3, 0, 2, 0, 2]
cdef int[4] _SLOTS = [0, 2, 1, 3]


cdef inline u64 _pick(u64 s0, u64 s1, u64 s2, u64 s3, int slot):
    if slot == 0:
        return s0
    if slot == 1:
        return s1
    if slot == 2:
        return s2
    return s3


cdef list _materialize(vector[u64]* v0, vector[u64]* v1, vector[u64]* v2, vector[u64]* v3):
    cdef list out = []
    cdef Py_ssize_t k
    for k in range(v0[0].size()):
        out.append((v0[0][k], v1[0][k], v2[0][k], v3[0][k]))
    return out


def saturate(int n_atoms, initial, rules, *, bint narrowing, bint strategy,
             bint subsumption=False, long long max_generated=1000000, bint record=True):
    """See ``_pykernel.saturate``; identical contract and behaviour."""
    cdef vector[u64] m0, m1, m2, m3
    cdef vector[int] rhead
    cdef vector[int] rpos, rneg
    cdef vector[Py_ssize_t] poff, plen, noff, nlen
    cdef vector[u64] bpu, bnu
    cdef set seen = set()
    cdef list steps = []
    cdef long long generated = 0
    cdef Py_ssize_t i = 0, j, k, ri, nrules, doff, dlen, d
    cdef u64 c0, c1, c2, c3, p0, p1, p2, p3, f0, f1, f2, f3, g0, g1, g2, g3
    cdef u64 q0, q1, q2, q3, bit, common, all_lits
    cdef int a, t, cs, ps, slot, flag
    cdef bint c_marked, p_marked, positive, sub

    for c in initial:
        c0 = c[0]; c1 = c[1]; c2 = c[2]; c3 = c[3]
        m0.push_back(c0); m1.push_back(c1); m2.push_back(c2); m3.push_back(c3)
        seen.add((c0, c1, c2, c3))

    for ru in rules:
        rhead.push_back(<int> ru[0])
        # keep conditional expressions away from push_back arguments:
        # cython 3.2 emits an uninitialized temporary for that combination
        if ru[1]:
            flag = 1
        else:
            flag = 0
        rpos.push_back(flag)
        if ru[2]:
            flag = 1
        else:
            flag = 0
        rneg.push_back(flag)
        poff.push_back(bpu.size())
        for dc in ru[3]:
            bpu.push_back(<u64> dc[0]); bnu.push_back(<u64> dc[1])
        plen.push_back(bpu.size() - poff.back())
        noff.push_back(bpu.size())
        for dc in ru[4]:
            bpu.push_back(<u64> dc[0]); bnu.push_back(<u64> dc[1])
        nlen.push_back(bpu.size() - noff.back())
    nrules = rhead.size()

    while i < <Py_ssize_t> m0.size():
        c0 = m0[i]; c1 = m1[i]; c2 = m2[i]; c3 = m3[i]
        c_marked = (c2 | c3) != 0
        for j in range(i):
            p0 = m0[j]; p1 = m1[j]; p2 = m2[j]; p3 = m3[j]
            p_marked = (p2 | p3) != 0
            if strategy and c_marked and p_marked:
                continue
            common = ((c0 | c2) & (p1 | p3)) | ((c1 | c3) & (p0 | p2))
            if common == 0:
                continue
            for a in range(n_atoms):
                bit = (<u64> 1) << a
                if (common & bit) == 0:
                    continue
                for t in range(8):
                    cs = _PAIR_C[t]; ps = _PAIR_P[t]
                    if (_pick(c0, c1, c2, c3, cs) & bit) == 0 or (_pick(p0, p1, p2, p3, ps) & bit) == 0:
                        continue
                    if strategy and ((c_marked and cs < 2) or (p_marked and ps < 2)):
                        continue
                    generated += 1
                    if generated > max_generated:
                        return CAP, _materialize(&m0, &m1, &m2, &m3), steps, generated, i + 1
                    f0 = c0; f1 = c1; f2 = c2; f3 = c3
                    if cs == 0:
                        f0 &= ~bit
                    elif cs == 1:
                        f1 &= ~bit
                    elif cs == 2:
                        f2 &= ~bit
                    else:
                        f3 &= ~bit
                    g0 = p0; g1 = p1; g2 = p2; g3 = p3
                    if ps == 0:
                        g0 &= ~bit
                    elif ps == 1:
                        g1 &= ~bit
                    elif ps == 2:
                        g2 &= ~bit
                    else:
                        g3 &= ~bit
                    q0 = f0 | g0; q1 = f1 | g1; q2 = f2 | g2; q3 = f3 | g3
                    if (q0 & q1) | (q2 & q3):
                        continue
                    key = (q0, q1, q2, q3)
                    if key in seen:
                        continue
                    if subsumption:
                        sub = 0
                        for k in range(<Py_ssize_t> m0.size()):
                            if (m0[k] & ~q0) == 0 and (m1[k] & ~q1) == 0 and (m2[k] & ~q2) == 0 and (m3[k] & ~q3) == 0:
                                sub = 1
                                break
                        if sub:
                            continue
                    m0.push_back(q0); m1.push_back(q1); m2.push_back(q2); m3.push_back(q3)
                    seen.add(key)
                    if record:
                        steps.append(("r", i, j, a, cs, ps))
                    if (q0 | q1 | q2 | q3) == 0:
                        return REFUTED, _materialize(&m0, &m1, &m2, &m3), steps, generated, i + 1
        if narrowing and nrules > 0:
            all_lits = c0 | c1 | c2 | c3
            for a in range(n_atoms):
                bit = (<u64> 1) << a
                if (all_lits & bit) == 0:
                    continue
                for t in range(4):
                    slot = _SLOTS[t]
                    if (_pick(c0, c1, c2, c3, slot) & bit) == 0:
                        continue
                    positive = (slot & 1) == 0
                    for ri in range(nrules):
                        if rhead[ri] != a:
                            continue
                        if positive:
                            if rpos[ri] == 0:
                                continue
                            doff = poff[ri]
                            dlen = plen[ri]
                        else:
                            if rneg[ri] == 0:
                                continue
                            doff = noff[ri]
                            dlen = nlen[ri]
                        f0 = c0; f1 = c1; f2 = c2; f3 = c3
                        if slot == 0:
                            f0 &= ~bit
                        elif slot == 1:
                            f1 &= ~bit
                        elif slot == 2:
                            f2 &= ~bit
                        else:
                            f3 &= ~bit
                        for d in range(doff, doff + dlen):
                            generated += 1
                            if generated > max_generated:
                                return CAP, _materialize(&m0, &m1, &m2, &m3), steps, generated, i + 1
                            q0 = f0 | bpu[d]; q1 = f1 | bnu[d]; q2 = f2; q3 = f3
                            if (q0 & q1) | (q2 & q3):
                                continue
                            key = (q0, q1, q2, q3)
                            if key in seen:
                                continue
                            if subsumption:
                                sub = 0
                                for k in range(<Py_ssize_t> m0.size()):
                                    if (m0[k] & ~q0) == 0 and (m1[k] & ~q1) == 0 and (m2[k] & ~q2) == 0 and (m3[k] & ~q3) == 0:
                                        sub = 1
                                        break
                                if sub:
                                    continue
                            m0.push_back(q0); m1.push_back(q1); m2.push_back(q2); m3.push_back(q3)
                            seen.add(key)
                            if record:
                                steps.append(("n", i, a, slot, ri))
                            if (q0 | q1 | q2 | q3) == 0:
                                return REFUTED, _materialize(&m0, &m1, &m2, &m3), steps, generated, i + 1
        i += 1
    return SATURATED, _materialize(&m0, &m1, &m2, &m3), steps, generated, i
