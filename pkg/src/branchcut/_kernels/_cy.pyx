# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython kernel loops over raw gmpy2 values.

Object-mode twin of _py.py: the arithmetic still dispatches to gmpy2, but
typed loop counters and C-level list indexing cut the interpreter overhead
of the O(n^2) sweeps. Contracts are identical to _py.py; keep in lock-step.
"""
import gmpy2

cdef object _mpc0 = None
cdef object _mpfr = gmpy2.mpfr
cdef object _mpc = gmpy2.mpc


def backend_name():
    return "cython"


def horner(list coeffs, t):
    cdef Py_ssize_t k
    acc = coeffs[len(coeffs) - 1]
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * t + coeffs[k]
    return acc


def horner_scale(list coeffs, t):
    cdef Py_ssize_t k
    at = abs(t)
    acc = coeffs[len(coeffs) - 1]
    sc = abs(acc)
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * t + coeffs[k]
        sc = sc * at + abs(coeffs[k])
    return acc, sc


def conv_slice(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t lo = n - len(b) + 1
    cdef Py_ssize_t hi = n
    cdef Py_ssize_t m
    if lo < 0:
        lo = 0
    if hi > len(a) - 1:
        hi = len(a) - 1
    acc = _mpc(0)
    for m in range(lo, hi + 1):
        acc = acc + a[m] * b[n - m]
    return acc


def gauss_solve(list rows, list rhs, zero_eps):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, k, pr, pc, rank
    cdef list a = [list(rows[i]) + [rhs[i]] for i in range(n)]
    cdef list colp = list(range(n))
    cdef list ai, ak
    rank = n
    for k in range(n):
        pr = k
        pc = k
        pv = abs(a[k][k])
        for i in range(k, n):
            ai = a[i]
            for j in range(k, n):
                m_ = abs(ai[j])
                if m_ > pv:
                    pr = i
                    pc = j
                    pv = m_
        if pv <= zero_eps:
            rank = k
            break
        if pr != k:
            a[k], a[pr] = a[pr], a[k]
        if pc != k:
            colp[k], colp[pc] = colp[pc], colp[k]
            for i in range(n):
                ai = a[i]
                ai[k], ai[pc] = ai[pc], ai[k]
        ak = a[k]
        piv = ak[k]
        for i in range(k + 1, n):
            ai = a[i]
            f = ai[k] / piv
            if f == 0:
                continue
            ai[k] = _mpc(0)
            for j in range(k + 1, n + 1):
                ai[j] = ai[j] - f * ak[j]
    consistent = True
    for i in range(rank, n):
        if abs(a[i][n]) > zero_eps:
            consistent = False
            break
    if not consistent:
        return None, rank, False
    cdef list y = [_mpc(0)] * n
    for i in range(rank - 1, -1, -1):
        ai = a[i]
        s = ai[n]
        for j in range(i + 1, rank):
            s = s - ai[j] * y[j]
        y[i] = s / ai[i]
    cdef list x = [_mpc(0)] * n
    for i in range(n):
        x[colp[i]] = y[i]
    return x, rank, True


def aberth_sweep(list coeffs, list dcoeffs, list z, nudge):
    cdef Py_ssize_t n = len(z)
    cdef Py_ssize_t k, j
    maxc = _mpfr(0)
    one = _mpfr(1)
    for k in range(n):
        zk = z[k]
        p = horner(coeffs, zk)
        if p == 0:
            continue
        dp = horner(dcoeffs, zk)
        if dp == 0:
            z[k] = zk + nudge * (1 + abs(zk))
            a_ = abs(nudge)
            if a_ > maxc:
                maxc = a_
            continue
        w = p / dp
        s = _mpc(0)
        for j in range(n):
            if j == k:
                continue
            d = zk - z[j]
            if d == 0:
                continue
            s = s + 1 / d
        den = 1 - w * s
        corr = w if den == 0 else w / den
        z[k] = zk - corr
        az = abs(zk)
        if az < one:
            az = one
        rel = abs(corr) / az
        if rel > maxc:
            maxc = rel
    return maxc
