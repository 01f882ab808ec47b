"""[L/M] Pade approximants via the matrix method.

Given f[0..L+M], the denominator b solves the MxM Toeplitz-structured
system that kills coefficients L+1..L+M of f*b, normalized to b[0] = 1;
the numerator follows by convolution. Solved by full-pivot Gaussian
elimination at working precision. Rank-deficient-but-consistent systems
(interior of a Pade block) are resolved by pinning free variables to
zero; inconsistent ones raise DegeneracyError rather than being
regularized away, since silent perturbation manufactures spurious
pole-zero doublets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import gmpy2

from . import _kernels
from .errors import DegeneracyError, NearPoleError
from .kernel import BigComplex, PrecisionContext
from .series import ExpansionPoint, PowerSeries


@dataclass(frozen=True)
class PadeApproximant:
    """Rational a/b in the expansion variable, b[0] = 1.

    The expansion variable is alpha for ZERO-developments and w = 1/alpha
    for INFINITY-developments; evaluate() takes points in that variable.
    """

    L: int
    M: int
    a: Tuple[BigComplex, ...]
    b: Tuple[BigComplex, ...]
    expansion_point: ExpansionPoint
    ctx: PrecisionContext

    def raw_a(self) -> List["gmpy2.mpc"]:
        return [c.v for c in self.a]

    def raw_b(self) -> List["gmpy2.mpc"]:
        return [c.v for c in self.b]


def _solve_denominator(f, L: int, M: int, zero_eps):
    """Try the [L/M] denominator system; returns b (len M+1) or None."""
    if M == 0:
        return [gmpy2.mpc(1)]
    rows = []
    rhs = []
    for j in range(L + 1, L + M + 1):
        rows.append([f[j - m] if 0 <= j - m < len(f) else gmpy2.mpc(0) for m in range(1, M + 1)])
        rhs.append(-f[j] if j < len(f) else gmpy2.mpc(0))
    x, rank, consistent = _kernels.gauss_solve(rows, rhs, zero_eps)
    if not consistent:
        return None
    return [gmpy2.mpc(1)] + x


def _growth_exponent(f, n: int) -> int:
    """Nearest power-of-two exponent of the coefficient growth rate.

    A series with radius of convergence rho has |f[k]| ~ rho^(-k); its
    Toeplitz system spans ~n log10(1/rho) decades, which wrecks any single
    pivot threshold. Substituting x -> 2^(-e) x with e = round(log2(1/rho))
    equilibrates the system, and scaling by powers of two is exact, so
    exact inputs stay exact.
    """
    best = None
    for k in range(max(1, n // 2), n + 1):
        a = abs(f[k])
        if a > 0:
            r = gmpy2.log2(a) / k
            if best is None or r > best:
                best = r
    if best is None:
        return 0
    return int(gmpy2.rint(best))


def build(series: PowerSeries, L: int, M: int) -> PadeApproximant:
    """Construct the [L/M] approximant of the leading L+M+1 coefficients.

    Raises DegeneracyError (carrying the largest solvable M' < M) when the
    denominator system is inconsistent.
    """
    if L < 0 or M < 0:
        raise ValueError("L and M must be non-negative")
    if len(series) < L + M + 1:
        raise ValueError(f"series has {len(series)} coefficients; [L={L}/M={M}] needs {L + M + 1}")
    ctx = series.ctx
    f = series.raw()
    with ctx.activate():
        e = _growth_exponent(f, L + M) if L + M > 0 else 0
        if e:
            g = [f[k] * gmpy2.exp2(-e * k) for k in range(L + M + 1)]
        else:
            g = f
        scale = max((abs(c) for c in g[: L + M + 1]), default=gmpy2.mpfr(0))
        zero_eps = scale * gmpy2.exp2(-(3 * ctx.bits) // 4)
        if zero_eps == 0:
            zero_eps = gmpy2.exp2(-(3 * ctx.bits) // 4)
        b = _solve_denominator(g, L, M, zero_eps)
        if b is None:
            mprime = M - 1
            while mprime > 0 and _solve_denominator(g, L, mprime, zero_eps) is None:
                mprime -= 1
            raise DegeneracyError(L, M, mprime)
        a = [_kernels.conv_slice(b, g, i) for i in range(L + 1)]
        if e:
            # undo the substitution: coefficients of x^k pick up 2^(e k)
            a = [c * gmpy2.exp2(e * i) for i, c in enumerate(a)]
            b = [c * gmpy2.exp2(e * m) for m, c in enumerate(b)]
        bits = ctx.bits
        return PadeApproximant(
            L,
            M,
            tuple(BigComplex(c, bits) for c in a),
            tuple(BigComplex(c, bits) for c in b),
            series.expansion_point,
            ctx,
        )


def near_diagonal_sequence(
    series: PowerSeries, degrees: Sequence[int], l_minus_m: int = -1
) -> List[Union[PadeApproximant, DegeneracyError]]:
    """[m/m+1] approximants (or [m/m-l_minus_m] off-diagonals) per degree.

    Degeneracies do not abort the sweep: the failing slot holds the
    DegeneracyError instance so callers can rebuild or skip per degree.
    """
    out: List[Union[PadeApproximant, DegeneracyError]] = []
    for m in degrees:
        L, M = m, m - l_minus_m
        if M < 0:
            raise ValueError(f"degree {m} with offset {l_minus_m} gives negative M")
        if len(series) < L + M + 1:
            raise ValueError(f"series too short for [{L}/{M}]: has {len(series)}, needs {L + M + 1}")
        try:
            out.append(build(series, L, M))
        except DegeneracyError as e:
            out.append(e)
    return out


def evaluate(pa: PadeApproximant, t: BigComplex) -> BigComplex:
    """Horner evaluation of a(t)/b(t) in the expansion variable.

    Near a denominator root -- |b(t)| below 2^(-bits/2) of the
    cancellation scale sum |b_i| |t|^i -- raises NearPoleError carrying
    both polynomial values.
    """
    ctx = pa.ctx
    with ctx.activate():
        num = _kernels.horner(pa.raw_a(), t.v)
        den, dscale = _kernels.horner_scale(pa.raw_b(), t.v)
        if abs(den) <= dscale * gmpy2.exp2(-ctx.bits // 2):
            raise NearPoleError(BigComplex(num, ctx.bits), BigComplex(den, ctx.bits))
        return BigComplex(num / den, ctx.bits)


def reexpand(pa: PadeApproximant, n: int) -> List[BigComplex]:
    """First n+1 Maclaurin coefficients of a/b by series division.

    Test plumbing for the accuracy-through-order invariant: g[k] solves
    sum_m b[m] g[k-m] = a[k] with a[k] = 0 beyond L.
    """
    ctx = pa.ctx
    with ctx.activate():
        a = pa.raw_a()
        b = pa.raw_b()
        g: List["gmpy2.mpc"] = []
        for k in range(n + 1):
            acc = a[k] if k < len(a) else gmpy2.mpc(0)
            for m in range(1, min(k, len(b) - 1) + 1):
                acc -= b[m] * g[k - m]
            g.append(acc)  # b[0] = 1
        return [BigComplex(c, ctx.bits) for c in g]
