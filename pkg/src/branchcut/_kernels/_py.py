"""Pure-Python kernel loops over raw gmpy2 values.

Callers must hold an activated PrecisionContext; these functions do no
context management of their own. The Cython twin (_cy.pyx) implements the
same contracts; keep the two in lock-step.
"""
import gmpy2


def backend_name():
    return "pure"


def horner(coeffs, t):
    """Evaluate sum(coeffs[k] * t^k) by Horner's scheme (ascending input)."""
    acc = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * t + coeffs[k]
    return acc


def horner_scale(coeffs, t):
    """Horner value plus the cancellation scale sum(|coeffs[k]| |t|^k)."""
    at = abs(t)
    acc = coeffs[-1]
    sc = abs(coeffs[-1])
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * t + coeffs[k]
        sc = sc * at + abs(coeffs[k])
    return acc, sc


def conv_slice(a, b, n):
    """Convolution coefficient sum(a[m]*b[n-m]) over the valid index range."""
    lo = max(0, n - len(b) + 1)
    hi = min(n, len(a) - 1)
    acc = gmpy2.mpc(0)
    for m in range(lo, hi + 1):
        acc += a[m] * b[n - m]
    return acc


def gauss_solve(rows, rhs, zero_eps):
    """Full-pivot Gaussian elimination with free-variable handling.

    rows: list of n lists (copied, not mutated); rhs: list of n values.
    zero_eps: absolute threshold below which a pivot counts as zero.
    Returns (x, rank, consistent); x is None when inconsistent, otherwise
    the solution with all free variables pinned to 0.
    """
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    colp = list(range(n))
    rank = n
    for k in range(n):
        # locate the largest remaining entry (full pivoting)
        pr, pc, pv = k, k, abs(a[k][k])
        for i in range(k, n):
            for j in range(k, n):
                m = abs(a[i][j])
                if m > pv:
                    pr, pc, pv = i, j, m
        if pv <= zero_eps:
            rank = k
            break
        if pr != k:
            a[k], a[pr] = a[pr], a[k]
        if pc != k:
            colp[k], colp[pc] = colp[pc], colp[k]
            for i in range(n):
                a[i][k], a[i][pc] = a[i][pc], a[i][k]
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f == 0:
                continue
            a[i][k] = gmpy2.mpc(0)
            for j in range(k + 1, n + 1):
                a[i][j] -= f * a[k][j]
    consistent = True
    for i in range(rank, n):
        if abs(a[i][n]) > zero_eps:
            consistent = False
            break
    if not consistent:
        return None, rank, False
    y = [gmpy2.mpc(0)] * n
    for i in range(rank - 1, -1, -1):
        s = a[i][n]
        for j in range(i + 1, rank):
            s -= a[i][j] * y[j]
        y[i] = s / a[i][i]
    x = [gmpy2.mpc(0)] * n
    for i in range(n):
        x[colp[i]] = y[i]
    return x, rank, True


def aberth_sweep(coeffs, dcoeffs, z, nudge):
    """One Gauss-Seidel Ehrlich-Aberth sweep, updating z in place.

    coeffs/dcoeffs: polynomial and derivative, ascending. nudge: relative
    displacement applied when a derivative vanishes at an iterate.
    Returns the largest relative correction applied.
    """
    n = len(z)
    maxc = gmpy2.mpfr(0)
    for k in range(n):
        zk = z[k]
        p = horner(coeffs, zk)
        if p == 0:
            continue
        dp = horner(dcoeffs, zk)
        if dp == 0:
            # sitting on a critical point: shove deterministically and retry next sweep
            z[k] = zk + nudge * (1 + abs(zk))
            maxc = max(maxc, abs(nudge))
            continue
        w = p / dp
        s = gmpy2.mpc(0)
        for j in range(n):
            if j == k:
                continue
            d = zk - z[j]
            if d == 0:
                continue
            s += 1 / d
        den = 1 - w * s
        corr = w if den == 0 else w / den
        z[k] = zk - corr
        rel = abs(corr) / max(gmpy2.mpfr(1), abs(zk))
        if rel > maxc:
            maxc = rel
    return maxc
