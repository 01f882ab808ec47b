"""Diagnostics on Pade root sets: plane mapping, Froissart filtering,
real-axis extent and blocking, convergence-factor fits, convergence in
capacity, and the arcsine equilibrium check.

Plane convention: a portrait tagged ALPHA holds the roots of the
coefficient polynomials read in the formal variable (ascending powers);
INVERSE_ALPHA applies r -> 1/r, with roots too close to the origin
counted in ``excluded_at_infinity`` instead of emitted. For a series
developed at infinity the INVERSE_ALPHA portrait is therefore the one in
the function's own plane, which is where cuts and blocking live.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import gmpy2

from .errors import (
    DegeneracyError,
    InsufficientSampleError,
    NearPoleError,
    PrecisionFloorError,
)
from .kernel import BigComplex, PrecisionContext, format_sig
from .pade import PadeApproximant, build, evaluate
from .roots import roots as find_roots
from .series import ExpansionPoint, LogRatioSpec, PowerSeries, eval_reference

_FLOOR_GUARD = 32  # reliable-digits floor: 2^(-bits+32)


class Plane(enum.Enum):
    ALPHA = "alpha"
    INVERSE_ALPHA = "inverse-alpha"


class Reach(enum.Enum):
    REACHABLE = "reachable"
    BLOCKED = "blocked"


@dataclass(frozen=True)
class RootPortrait:
    poles: Tuple[BigComplex, ...]
    zeros: Tuple[BigComplex, ...]
    plane: Plane
    degree: int
    excluded_at_infinity: int = 0


@dataclass(frozen=True)
class ConvergenceReport:
    """Error-vs-degree trace and the fitted per-coefficient factor.

    g_est = exp(slope/2) since an [m/m+1] step consumes two series
    coefficients; g_step = exp(slope) (per diagonal step) is recorded
    alongside because the literature is ambiguous about which one the
    asymptotic statement means.
    """

    point: BigComplex
    degrees: Tuple[int, ...]
    errors: Tuple["gmpy2.mpfr", ...]
    g_est: "gmpy2.mpfr"
    g_step: "gmpy2.mpfr"
    g_pred: Optional["gmpy2.mpfr"] = None


@dataclass(frozen=True)
class ReachabilityVerdict:
    target: float
    status: Reach
    blocking_abscissa: Optional["gmpy2.mpfr"] = None


@dataclass(frozen=True)
class BadnessDetail:
    badness: float
    bad: int
    evaluated: int
    skipped: int


def portrait(
    pa: PadeApproximant,
    out_plane: Plane,
    ctx: Optional[PrecisionContext] = None,
    tol=None,
) -> RootPortrait:
    """Pole/zero locations of the approximant in the requested plane."""
    ctx = ctx or pa.ctx
    zeros_rs = find_roots(pa.a, ctx, tol)
    poles_rs = find_roots(pa.b, ctx, tol)
    if out_plane is Plane.ALPHA:
        return RootPortrait(poles_rs.roots, zeros_rs.roots, Plane.ALPHA, pa.L, 0)
    excluded = 0
    mapped: List[List[BigComplex]] = []
    with ctx.activate():
        tiny = gmpy2.exp2(-ctx.bits // 2)
        for rs in (poles_rs, zeros_rs):
            out = []
            for r in rs.roots:
                if abs(r.v) < tiny:
                    excluded += 1
                else:
                    out.append(BigComplex(1 / r.v, ctx.bits))
            out.sort(key=lambda w: (w.re, w.im))
            mapped.append(out)
    return RootPortrait(tuple(mapped[0]), tuple(mapped[1]), Plane.INVERSE_ALPHA, pa.L, excluded)


def _mod_angle_key(r: BigComplex):
    return (abs(r.v), gmpy2.atan2(r.im, r.re))


def froissart_filter(
    p: RootPortrait, pair_tol=None
) -> Tuple[RootPortrait, List[Tuple[BigComplex, BigComplex]]]:
    """Split near-coincident pole-zero pairs out of a portrait.

    Greedy: poles in (modulus, angle) order each grab the nearest unpaired
    zero under pair_tol. Default pair_tol is 1e-6 of the portrait's
    bounding-box diagonal — doublet spacing collapses with precision, so
    any small threshold separates doublets from genuine cut roots.
    """
    allr = list(p.poles) + list(p.zeros)
    if not allr:
        return p, []
    ctx = PrecisionContext(allr[0].bits)
    with ctx.activate():
        if pair_tol is None:
            res = [r.re for r in allr]
            ims = [r.im for r in allr]
            dre = max(res) - min(res)
            dim = max(ims) - min(ims)
            diam = gmpy2.sqrt(dre * dre + dim * dim)
            pair_tol = gmpy2.mpfr("1e-6") * (diam if diam > 0 else gmpy2.mpfr(1))
        else:
            pair_tol = gmpy2.mpfr(pair_tol)
        poles = sorted(p.poles, key=_mod_angle_key)
        zeros = sorted(p.zeros, key=_mod_angle_key)
        taken = [False] * len(zeros)
        doublets: List[Tuple[BigComplex, BigComplex]] = []
        clean_poles: List[BigComplex] = []
        for pl in poles:
            best, bestd = -1, None
            for i, zr in enumerate(zeros):
                if taken[i]:
                    continue
                d = abs(pl.v - zr.v)
                if d < pair_tol and (bestd is None or d < bestd):
                    best, bestd = i, d
            if best >= 0:
                taken[best] = True
                doublets.append((pl, zeros[best]))
            else:
                clean_poles.append(pl)
        clean_zeros = [z for i, z in enumerate(zeros) if not taken[i]]
        clean_poles.sort(key=lambda w: (w.re, w.im))
        clean_zeros.sort(key=lambda w: (w.re, w.im))
    clean = RootPortrait(
        tuple(clean_poles), tuple(clean_zeros), p.plane, p.degree, p.excluded_at_infinity
    )
    return clean, doublets


def real_axis_extent(p: RootPortrait, band) -> Optional[Tuple["gmpy2.mpfr", "gmpy2.mpfr"]]:
    """[min, max] real part of poles within |Im| < band, or None."""
    ctx = PrecisionContext(p.poles[0].bits) if p.poles else PrecisionContext(64)
    with ctx.activate():
        band = gmpy2.mpfr(band)
        xs = [pl.re for pl in p.poles if abs(pl.im) < band]
        if not xs:
            return None
        return min(xs), max(xs)


def reachability(p: RootPortrait, target: float, band) -> ReachabilityVerdict:
    """Can the function be continued along the real axis to ``target``?

    The path starts at large |x| on the side of target's sign (target 0 is
    approached from +infinity); on-axis poles crossing the open path
    segment block it, and the first crossing is reported.
    """
    ext = real_axis_extent(p, band)
    if ext is None:
        return ReachabilityVerdict(target, Reach.REACHABLE)
    xmin, xmax = ext
    if target < 0:
        if xmin < target:
            return ReachabilityVerdict(target, Reach.BLOCKED, xmin)
    else:
        if xmax > target:
            return ReachabilityVerdict(target, Reach.BLOCKED, xmax)
    return ReachabilityVerdict(target, Reach.REACHABLE)


def _fit_loglinear(ms, logs):
    n = len(ms)
    xbar = sum(ms) / n
    ybar = sum(logs) / n
    num = gmpy2.mpfr(0)
    den = gmpy2.mpfr(0)
    for x, y in zip(ms, logs):
        num += (x - xbar) * (y - ybar)
        den += (x - xbar) * (x - xbar)
    return num / den


def convergence_factor_series(
    series: PowerSeries,
    reference: BigComplex,
    t: BigComplex,
    point: BigComplex,
    degrees: Sequence[int],
    cap=None,
) -> ConvergenceReport:
    """Fit |reference - [m/m+1](t)| against m in log space.

    ``t`` is the evaluation point in the expansion variable, ``point`` the
    same point in the function plane (they differ for infinity
    developments). All errors at the precision floor mean the input is
    rational at this degree range: g_est = 0. A partial hit of the floor
    is unfittable and raises PrecisionFloorError.

    Degenerate table entries (odd/even coefficient structure, say) are
    skipped: their value equals a neighbouring entry's and would flatten
    the fit. At least 3 degrees must survive.
    """
    degrees = list(degrees)
    if len(degrees) < 3 or any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be strictly increasing with >= 3 entries")
    ctx = series.ctx
    errors = []
    fitted = []
    last_degenerate = None
    for m in degrees:
        try:
            pa = build(series, m, m + 1)
        except DegeneracyError as exc:
            last_degenerate = exc
            continue
        val = evaluate(pa, t)
        fitted.append(m)
        with ctx.activate():
            errors.append(abs(reference.v - val.v))
    if len(fitted) < 3:
        raise last_degenerate if last_degenerate is not None else ValueError(
            "fewer than 3 usable degrees"
        )
    degrees = fitted
    with ctx.activate():
        floor = gmpy2.exp2(-ctx.bits + _FLOOR_GUARD) * max(gmpy2.mpfr(1), abs(reference.v))
        below = [e < floor for e in errors]
        if all(below):
            g_est = gmpy2.mpfr(0)
            g_step = gmpy2.mpfr(0)
        elif any(below):
            raise PrecisionFloorError(
                f"errors straddle the precision floor at {ctx.bits} bits; "
                "raise bits or lower the degrees"
            )
        else:
            s = _fit_loglinear(
                [gmpy2.mpfr(m) for m in degrees], [gmpy2.log(e) for e in errors]
            )
            g_est = gmpy2.exp(s / 2)
            g_step = gmpy2.exp(s)
        g_pred = None
        if cap is not None:
            g_pred = gmpy2.mpfr(cap) / abs(point.v)
    return ConvergenceReport(point, tuple(degrees), tuple(errors), g_est, g_step, g_pred)


def convergence_factor(
    spec: LogRatioSpec,
    point: BigComplex,
    degrees: Sequence[int],
    ctx: PrecisionContext,
    expansion: ExpansionPoint = ExpansionPoint.INFINITY,
    cap=None,
) -> ConvergenceReport:
    """Convergence-factor fit for a log-ratio function at ``point``.

    The caller keeps the point off the cut; cap, when given, supplies the
    predicted leading term g_pred = cap / |point|.
    """
    from .series import expand_at_infinity, expand_at_zero

    N = 2 * max(degrees) + 2
    if expansion is ExpansionPoint.INFINITY:
        series = expand_at_infinity(spec, N, ctx)
        with ctx.activate():
            t = BigComplex(1 / point.v, ctx.bits)
    else:
        series = expand_at_zero(spec, N, ctx)
        t = point
    ref = eval_reference(spec, point)
    return convergence_factor_series(series, ref, t, point, degrees, cap=cap)


def badness_detail(
    spec: LogRatioSpec,
    pa: PadeApproximant,
    rect: Tuple[float, float, float, float],
    grid_n: int,
    eps,
) -> BadnessDetail:
    """Grid census of the eps-bad set of a PA against the reference.

    Cell centers within 10 cell-sizes of a spec root are skipped (the
    reference blows up there); near-pole evaluations count as bad.
    """
    if grid_n < 8:
        raise ValueError("grid_n must be >= 8")
    ctx = pa.ctx
    x0, x1, y0, y1 = rect
    with ctx.activate():
        x0, x1, y0, y1 = (gmpy2.mpfr(v) for v in (x0, x1, y0, y1))
        dx = (x1 - x0) / grid_n
        dy = (y1 - y0) / grid_n
        skip_r = 10 * max(dx, dy)
        eps = gmpy2.mpfr(eps)
        rts = [r.v for r in spec.all_roots()]
        bad = 0
        evaluated = 0
        skipped = 0
        invert = pa.expansion_point is ExpansionPoint.INFINITY
        for i in range(grid_n):
            zx = x0 + (i + gmpy2.mpfr("0.5")) * dx
            for j in range(grid_n):
                zy = y0 + (j + gmpy2.mpfr("0.5")) * dy
                z = gmpy2.mpc(zx, zy)
                if any(abs(z - r) < skip_r for r in rts) or (invert and z == 0):
                    skipped += 1
                    continue
                evaluated += 1
                zb = BigComplex(z, ctx.bits)
                ref = eval_reference(spec, zb)
                t = BigComplex(1 / z, ctx.bits) if invert else zb
                try:
                    val = evaluate(pa, t)
                except NearPoleError:
                    bad += 1
                    continue
                if abs(ref.v - val.v) > eps:
                    bad += 1
        return BadnessDetail(float(bad * dx * dy), bad, evaluated, skipped)


def capacity_badness(spec, pa, rect, grid_n, eps) -> float:
    """Area proxy for the eps-bad set: bad-cell count times cell area."""
    return badness_detail(spec, pa, rect, grid_n, eps).badness


def equilibrium_check(p: RootPortrait, band=1e-6) -> "gmpy2.mpfr":
    """Kolmogorov-Smirnov distance of on-segment pole abscissae from the
    arcsine law F(x) = 1/2 + arcsin(x)/pi, after normalizing the detected
    extent to [-1, 1]. Needs at least 10 on-axis poles.
    """
    if not p.poles:
        raise InsufficientSampleError("portrait has no poles")
    ctx = PrecisionContext(p.poles[0].bits)
    with ctx.activate():
        band = gmpy2.mpfr(band)
        xs = sorted(pl.re for pl in p.poles if abs(pl.im) < band)
        n = len(xs)
        if n < 10:
            raise InsufficientSampleError(f"only {n} on-axis poles; need >= 10")
        lo, hi = xs[0], xs[-1]
        if hi <= lo:
            raise InsufficientSampleError("on-axis poles span a single point")
        pi = gmpy2.const_pi()
        half = gmpy2.mpfr("0.5")
        ks = gmpy2.mpfr(0)
        for i, x in enumerate(xs):
            u = (2 * x - lo - hi) / (hi - lo)
            u = min(max(u, gmpy2.mpfr(-1)), gmpy2.mpfr(1))
            fx = half + gmpy2.asin(u) / pi
            ks = max(ks, abs(fx - gmpy2.mpfr(i) / n), abs(gmpy2.mpfr(i + 1) / n - fx))
        return ks


CSV_HEADER = "kind,re,im,plane,degree"


def portrait_csv_lines(
    clean: RootPortrait, doublets: Sequence[Tuple[BigComplex, BigComplex]]
) -> List[str]:
    """CSV rows (30 significant digits) for a filtered portrait."""
    lines = [CSV_HEADER]

    def row(kind: str, r: BigComplex):
        lines.append(
            f"{kind},{format_sig(r.re)},{format_sig(r.im)},{clean.plane.value},{clean.degree}"
        )

    for r in clean.poles:
        row("pole", r)
    for r in clean.zeros:
        row("zero", r)
    for pl, zr in doublets:
        row("doublet_pole", pl)
        row("doublet_zero", zr)
    return lines


def write_portrait_csv(path, clean, doublets) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(portrait_csv_lines(clean, doublets)) + "\n")
