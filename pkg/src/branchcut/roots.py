"""All roots of a polynomial at high precision, Ehrlich-Aberth style.

Dense eigen-solvers are costly at 512 bits; simultaneous iteration reuses
the kernel arithmetic and certifies itself through the scaled residual
|p(r)| / sum |c_k r^k|, which a converged cluster cannot fake.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import gmpy2

from . import _kernels
from .errors import NonConvergenceError
from .kernel import BigComplex, PrecisionContext

_MAX_SWEEPS = 400


@dataclass(frozen=True)
class RootSet:
    """Roots plus the worst certified scaled residual among them.

    degree_reduction counts leading coefficients stripped as numerically
    zero before iteration.
    """

    roots: Tuple[BigComplex, ...]
    residual_bound: "gmpy2.mpfr"
    degree_reduction: int = 0


def _strip_leading(c, rel_eps):
    """Drop trailing (highest-order) coefficients below rel_eps * max|c|."""
    mx = gmpy2.mpfr(0)
    for v in c:
        mx = max(mx, abs(v))
    if mx == 0:
        raise ValueError("all coefficients are zero")
    cut = mx * rel_eps
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= cut:
        n -= 1
    return list(c[:n]), len(c) - n


def _initial_points(c, n, seed_angle):
    """Perturbed circle at the Fujiwara root bound; deterministic by construction.

    Fujiwara's 2 max_k (|c_{n-k}|/|c_n|)^(1/k) stays usable even when the
    leading coefficient is orders of magnitude below the others, where the
    plain coefficient-ratio bound would start the iteration hopelessly far
    out.
    """
    lead = abs(c[n])
    r = gmpy2.mpfr(0)
    for k in range(1, n + 1):
        q = abs(c[n - k]) / lead
        if q > 0:
            r = max(r, gmpy2.root(q, k))
    radius = 2 * r if r > 0 else gmpy2.mpfr(1)
    two_pi = 2 * gmpy2.const_pi()
    pts = []
    for k in range(n):
        # irrational-ish offset keeps starts off the axes of symmetric inputs
        theta = two_pi * k / n + two_pi * seed_angle + gmpy2.mpfr(1) / (2 * n)
        pts.append(radius * gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
    return pts


def roots(
    coeffs: Sequence[BigComplex],
    ctx: PrecisionContext,
    tol: Optional["gmpy2.mpfr"] = None,
    warm_start: Optional[Sequence[BigComplex]] = None,
) -> RootSet:
    """Find all roots of sum coeffs[k] x^k.

    tol defaults to 2^(-bits/2); every returned root satisfies the scaled
    residual bound. warm_start seeds the iteration (e.g. with roots from a
    lower precision); its length must match the effective degree.
    """
    if not coeffs:
        raise ValueError("empty coefficient list")
    with ctx.activate():
        if tol is None:
            tol = gmpy2.exp2(-ctx.bits // 2)
        else:
            tol = gmpy2.mpfr(tol)
        c, reduction = _strip_leading([x.v for x in coeffs], gmpy2.exp2(-ctx.bits // 2))
        n = len(c) - 1
        if n == 0:
            return RootSet((), gmpy2.mpfr(0), reduction)
        dc = [c[k] * k for k in range(1, n + 1)]
        if warm_start is not None:
            if len(warm_start) != n:
                raise ValueError(f"warm start has {len(warm_start)} points, need {n}")
            z = [w.v + gmpy2.mpc(0) for w in warm_start]
        else:
            z = _initial_points(c, n, gmpy2.mpfr("0.1327"))
        stop = tol * gmpy2.exp2(-16)
        nudge = gmpy2.exp2(-ctx.bits // 4)
        for _ in range(_MAX_SWEEPS):
            maxc = _kernels.aberth_sweep(c, dc, z, nudge)
            if maxc <= stop:
                break
        worst = gmpy2.mpfr(0)
        for r in z:
            val, sc = _kernels.horner_scale(c, r)
            res = abs(val) / sc if sc > 0 else abs(val)
            if not gmpy2.is_finite(res):
                raise NonConvergenceError(
                    "root iteration escaped to a non-finite iterate", diagnostic=res
                )
            worst = max(worst, res)
        if worst >= tol:
            raise NonConvergenceError(
                f"root iteration failed its residual certificate ({float(worst):.3e} >= {float(tol):.3e})",
                diagnostic=worst,
            )
        ordered = sorted(z, key=lambda w: (w.real, w.imag))
        return RootSet(tuple(BigComplex(r, ctx.bits) for r in ordered), worst, reduction)
