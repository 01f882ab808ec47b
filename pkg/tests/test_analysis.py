"""Portraits, filtering, extent/reachability, convergence fits, badness."""
import random

import gmpy2
import pytest

from branchcut import analysis, pade, series
from branchcut.analysis import Plane, Reach, RootPortrait
from branchcut.errors import (
    DegeneracyError,
    InsufficientSampleError,
    PrecisionFloorError,
)
from branchcut.kernel import BigComplex, PrecisionContext
from branchcut.series import ExpansionPoint

ctx = PrecisionContext(256)


def _pt(re, im=0, bits=256):
    return PrecisionContext(bits).big(re, im)


def _eq13(c):
    return series.LogRatioSpec((c.big(1, 0),), (c.big(-1, 0),))


def _portrait1_2():
    ser = series.expand_at_infinity(_eq13(ctx), 10, ctx)
    return pade.build(ser, 1, 2)


# ---------------------------------------------------------------- portraits


def test_alpha_portrait_is_raw_roots():
    pa = _portrait1_2()
    p = analysis.portrait(pa, Plane.ALPHA)
    assert p.plane is Plane.ALPHA
    assert p.degree == 1
    assert p.excluded_at_infinity == 0
    with ctx.activate():
        r3 = gmpy2.sqrt(gmpy2.mpfr(3))
        assert len(p.poles) == 2
        assert abs(p.poles[0].v + r3) < 1e-60
        assert abs(p.poles[1].v - r3) < 1e-60
        # numerator -2t has its zero at the origin
        assert len(p.zeros) == 1 and abs(p.zeros[0].v) < 1e-60


def test_inverse_portrait_reciprocates_and_excludes_origin():
    pa = _portrait1_2()
    p = analysis.portrait(pa, Plane.INVERSE_ALPHA)
    assert p.plane is Plane.INVERSE_ALPHA
    # the origin zero has no image; it is counted, not mapped
    assert p.excluded_at_infinity == 1
    assert len(p.zeros) == 0
    with ctx.activate():
        inv = 1 / gmpy2.sqrt(gmpy2.mpfr(3))
        assert abs(p.poles[0].v + inv) < 1e-60
        assert abs(p.poles[1].v - inv) < 1e-60


def test_plane_involution():
    """Mapping ALPHA roots through 1/r reproduces the INVERSE_ALPHA portrait."""
    ser = series.expand_at_infinity(series.case_spec("B", ctx), 30, ctx)
    pa = pade.build(ser, 11, 12)
    pa_alpha = analysis.portrait(pa, Plane.ALPHA)
    pa_inv = analysis.portrait(pa, Plane.INVERSE_ALPHA)
    with ctx.activate():
        excluded = 0
        for group_a, group_i in ((pa_alpha.poles, pa_inv.poles), (pa_alpha.zeros, pa_inv.zeros)):
            finite = [r.v for r in group_a if abs(r.v) > gmpy2.exp2(-100)]
            excluded += len(group_a) - len(finite)
            mapped = sorted((1 / v for v in finite), key=lambda v: (v.real, v.imag))
            assert len(mapped) == len(group_i)
            for m, have in zip(mapped, group_i):
                assert abs(m - have.v) < gmpy2.exp2(-200)
        assert pa_inv.excluded_at_infinity == excluded


# ---------------------------------------------------------------- froissart


def _synthetic(poles, zeros, plane=Plane.ALPHA, degree=9):
    mk = lambda pts: tuple(_pt(re, im) for re, im in pts)
    return RootPortrait(mk(poles), mk(zeros), plane, degree)


def test_froissart_filter_pairs_and_keeps():
    p = _synthetic(
        poles=[(0.5, 0.0), (2.0, 1.0)],
        zeros=[(0.5 + 1e-9, 0.0), (-3.0, 0.0)],
    )
    clean, doublets = analysis.froissart_filter(p)
    assert len(doublets) == 1
    dp, dz = doublets[0]
    with ctx.activate():
        assert abs(dp.v - gmpy2.mpc("0.5")) < 1e-20
        assert abs(dz.v - dp.v) < gmpy2.mpfr("1e-8")
    assert [complex(r) for r in clean.poles] == [2 + 1j]
    assert [complex(r) for r in clean.zeros] == [-3 + 0j]
    assert clean.plane is p.plane and clean.degree == p.degree


def test_froissart_explicit_tolerance():
    p = _synthetic(poles=[(0.5, 0.0)], zeros=[(0.5 + 1e-9, 0.0)])
    clean, doublets = analysis.froissart_filter(p, pair_tol=1e-12)
    assert doublets == [] and len(clean.poles) == 1
    clean, doublets = analysis.froissart_filter(p, pair_tol=1e-6)
    assert len(doublets) == 1 and clean.poles == ()


def test_froissart_empty_portrait():
    p = RootPortrait((), (), Plane.ALPHA, 5)
    clean, doublets = analysis.froissart_filter(p)
    assert clean is p and doublets == []


def test_perturbed_coefficients_sprout_doublets(lab, ctx):
    """Relative noise at 2^-66 turns a clean degree-99 portrait into one
    dominated by pole-zero doublets; the filter takes them back out."""
    base = lab.series("A")
    rng = random.Random(7)
    with ctx.activate():
        noisy = tuple(
            BigComplex(c.v * (1 + gmpy2.mpfr(rng.uniform(-1, 1)) * gmpy2.exp2(-66)), ctx.bits)
            for c in base.coeffs
        )
    pser = series.PowerSeries(ExpansionPoint.INFINITY, noisy, ctx)
    ppa = pade.build(pser, 99, 100)
    clean, doublets = analysis.froissart_filter(
        analysis.portrait(ppa, Plane.INVERSE_ALPHA)
    )
    assert len(doublets) == 30
    assert len(clean.poles) == 70
    # the surviving poles still trace the same cuts: none drift on-axis
    clean0, doublets0, _ = lab.filtered("A", 99)
    assert len(doublets0) == 0
    with ctx.activate():
        assert min(abs(r.im) for r in clean.poles) > gmpy2.mpfr("0.8")


# ------------------------------------------------- extent and reachability


def test_real_axis_extent():
    p = _synthetic(poles=[(-0.25, 0.001), (0.8, -0.002), (0.1, 2.0)], zeros=[])
    ext = analysis.real_axis_extent(p, 0.05)
    assert float(ext[0]) == -0.25 and float(ext[1]) == 0.8
    assert analysis.real_axis_extent(p, 1e-6) is None
    empty = RootPortrait((), (), Plane.ALPHA, 3)
    assert analysis.real_axis_extent(empty, 0.05) is None


def test_reachability_rules():
    p = _synthetic(poles=[(-0.5, 0.0), (0.5, 0.0)], zeros=[])
    assert analysis.reachability(p, -0.7, 0.05).status is Reach.REACHABLE
    v = analysis.reachability(p, -0.3, 0.05)
    assert v.status is Reach.BLOCKED and float(v.blocking_abscissa) == -0.5
    v = analysis.reachability(p, 0.3, 0.05)
    assert v.status is Reach.BLOCKED and float(v.blocking_abscissa) == 0.5
    assert analysis.reachability(p, 0.7, 0.05).status is Reach.REACHABLE
    # target 0 is approached from +infinity
    v = analysis.reachability(p, 0.0, 0.05)
    assert v.status is Reach.BLOCKED and float(v.blocking_abscissa) == 0.5
    free = RootPortrait((), (), Plane.ALPHA, 3)
    assert analysis.reachability(free, -5.0, 0.05).status is Reach.REACHABLE


# ------------------------------------------------------- convergence factor


def test_convergence_factor_validation():
    sp = _eq13(ctx)
    with pytest.raises(ValueError, match="strictly increasing"):
        analysis.convergence_factor(sp, ctx.big(4), [10, 10, 12], ctx)
    with pytest.raises(ValueError, match=">= 3"):
        analysis.convergence_factor(sp, ctx.big(4), [10, 12], ctx)


def test_convergence_factor_matches_theory_off_the_cut():
    """G for the segment [-1,1] is 1/|z + sqrt(z^2-1)|; the fit lands close."""
    sp = _eq13(ctx)
    rep = analysis.convergence_factor(sp, ctx.big(4), list(range(10, 26)), ctx, cap=0.5)
    # even degrees are degenerate on this series and must be skipped
    assert rep.degrees == (11, 13, 15, 17, 19, 21, 23, 25)
    assert len(rep.errors) == len(rep.degrees)
    g = float(rep.g_est)
    assert abs(g - 0.12706452097) < 1e-9
    exact = 1 / (4 + 15**0.5)
    assert abs(g - exact) < 5e-5
    assert abs(float(rep.g_pred) - 0.125) < 1e-12
    assert float(rep.g_step) == pytest.approx(g * g, rel=1e-12)


def test_convergence_factor_is_stationary_in_the_degree_window():
    sp = _eq13(ctx)
    a = analysis.convergence_factor(sp, ctx.big(4), list(range(10, 26)), ctx)
    b = analysis.convergence_factor(sp, ctx.big(4), list(range(15, 31)), ctx)
    assert abs(float(a.g_est) - float(b.g_est)) < 2e-4


def test_convergence_factor_farther_point_converges_faster():
    sp = _eq13(ctx)
    rep8 = analysis.convergence_factor(sp, ctx.big(8), list(range(10, 26)), ctx)
    assert abs(float(rep8.g_est) - 0.06276913693) < 1e-8


def test_rational_function_pins_g_to_zero():
    with ctx.activate():
        geo = series.PowerSeries(
            ExpansionPoint.INFINITY,
            tuple(BigComplex(gmpy2.mpc(0 if k == 0 else 1), 256) for k in range(60)),
            ctx,
        )
        t = BigComplex(gmpy2.mpc(1) / 4, 256)
        ref = BigComplex(gmpy2.mpc(1) / 3, 256)
    rep = analysis.convergence_factor_series(geo, ref, t, ctx.big(4), list(range(10, 26)))
    assert float(rep.g_est) == 0.0
    assert float(rep.g_step) == 0.0


def test_floor_straddle_raises():
    c128 = PrecisionContext(128)
    sp = _eq13(c128)
    with pytest.raises(PrecisionFloorError, match="raise bits"):
        analysis.convergence_factor(sp, c128.big(4), list(range(10, 26)), c128)


def test_all_degrees_degenerate_reraises():
    sp = _eq13(ctx)
    with pytest.raises(DegeneracyError):
        analysis.convergence_factor(sp, ctx.big(4), [10, 12, 14], ctx)


# ----------------------------------------------------------------- badness


def test_badness_validation():
    sp = _eq13(ctx)
    ser = series.expand_at_infinity(sp, 20, ctx)
    pa = pade.build(ser, 5, 6)
    with pytest.raises(ValueError, match="grid_n"):
        analysis.badness_detail(sp, pa, (-2, 2, -2, 2), 4, 1e-3)


def test_badness_census_and_eps_monotonicity():
    sp = _eq13(ctx)
    ser = series.expand_at_infinity(sp, 40, ctx)
    pa = pade.build(ser, 9, 10)
    rect = (-2, 2, -2, 2)
    d_tight = analysis.badness_detail(sp, pa, rect, 32, 1e-8)
    d_loose = analysis.badness_detail(sp, pa, rect, 32, 1e-2)
    assert d_tight.evaluated + d_tight.skipped == 32 * 32
    assert d_tight.skipped > 0  # branch-point exclusion zones
    # the ring just outside the exclusion zones converges, but slowly:
    # bad at 1e-8, fine at 1e-2
    assert d_tight.bad > d_loose.bad
    assert d_tight.badness >= d_loose.badness
    assert analysis.capacity_badness(sp, pa, rect, 32, 1e-2) == d_loose.badness


def test_badness_cell_area_accounting():
    sp = _eq13(ctx)
    ser = series.expand_at_infinity(sp, 40, ctx)
    pa = pade.build(ser, 9, 10)
    d = analysis.badness_detail(sp, pa, (-2, 2, -2, 2), 32, 1e-8)
    cell = (4 / 32) * (4 / 32)
    assert d.bad > 0
    assert d.badness == pytest.approx(d.bad * cell, rel=1e-12)


# ----------------------------------------------------------- equilibrium KS


def test_equilibrium_check_needs_a_sample():
    with pytest.raises(InsufficientSampleError, match="no poles"):
        analysis.equilibrium_check(RootPortrait((), (), Plane.ALPHA, 3))
    few = _synthetic(poles=[(x / 10, 0.0) for x in range(5)], zeros=[])
    with pytest.raises(InsufficientSampleError, match="need >= 10"):
        analysis.equilibrium_check(few)
    stacked = _synthetic(poles=[(0.5, 0.0)] * 12, zeros=[])
    with pytest.raises(InsufficientSampleError, match="single point"):
        analysis.equilibrium_check(stacked)
    off_axis = _synthetic(poles=[(x / 10, 1.0) for x in range(12)], zeros=[])
    with pytest.raises(InsufficientSampleError):
        analysis.equilibrium_check(off_axis)


def test_equilibrium_check_uniform_control_value():
    """Equispaced points are measurably NOT arcsine-distributed: KS ~ 0.106."""
    n = 99
    with ctx.activate():
        pts = tuple(
            BigComplex(gmpy2.mpc(gmpy2.mpfr(-1) + gmpy2.mpfr(2 * i + 1) / n), 256)
            for i in range(n)
        )
    ks = float(analysis.equilibrium_check(RootPortrait(pts, (), Plane.ALPHA, n)))
    assert abs(ks - 0.1063815980) < 1e-9


def test_equilibrium_check_on_arcsine_quantiles():
    """Points placed at arcsine quantiles score the minimal possible KS ~ 1/n."""
    n = 40
    with ctx.activate():
        pi = gmpy2.const_pi()
        pts = tuple(
            BigComplex(
                gmpy2.mpc(-gmpy2.cos(pi * (gmpy2.mpfr(2 * i + 1) / (2 * n)))), 256
            )
            for i in range(n)
        )
        ks = analysis.equilibrium_check(RootPortrait(pts, (), Plane.ALPHA, n))
    # extent normalization pins the endpoints, so the bound is ~1.5/n
    assert float(ks) < 1.6 / n


# ------------------------------------------------------------------ anchors


def test_case_b_on_axis_sextet(lab):
    """Case B keeps six symmetric on-axis poles at degree 99."""
    clean, doublets, _ = lab.filtered("B", 99)
    assert len(doublets) == 2
    with lab.ctx.activate():
        onax = sorted(float(r.re) for r in clean.poles if abs(r.im) < 0.05)
    assert len(onax) == 6
    want = [-0.670983079, -0.368241887, -0.119273190, 0.119273190, 0.368241887, 0.670983079]
    for have, expect in zip(onax, want):
        assert have == pytest.approx(expect, abs=1e-8)


def test_case_d_blocking_anchor(lab):
    clean, doublets, _ = lab.filtered("D", 99)
    assert len(doublets) == 2
    v = analysis.reachability(clean, -0.7, 0.05)
    assert v.status is Reach.BLOCKED
    assert float(v.blocking_abscissa) == pytest.approx(-0.7111555637, abs=1e-8)
    ext = analysis.real_axis_extent(clean, 0.05)
    assert float(ext[1]) == pytest.approx(1.6021677626, abs=1e-8)
    # the mirrored case C is clean through -0.7: its verdict must be REACHABLE
    # (asymmetry of D pushes the left junction inward past the target)


def test_csv_lines():
    p = _synthetic(poles=[(1.5, -0.5)], zeros=[(-2.0, 0.25)], degree=7)
    clean, doublets = analysis.froissart_filter(p)
    lines = analysis.portrait_csv_lines(clean, doublets)
    assert lines[0] == analysis.CSV_HEADER == "kind,re,im,plane,degree"
    assert lines[1].startswith("pole,1.5")
    assert lines[2].startswith("zero,-2.0")
    assert all(line.endswith(",alpha,7") for line in lines[1:])
    d = _synthetic(poles=[(0.5, 0.0)], zeros=[(0.5 + 1e-9, 0.0)], degree=3)
    clean, doublets = analysis.froissart_filter(d, pair_tol=1e-6)
    lines = analysis.portrait_csv_lines(clean, doublets)
    kinds = [ln.split(",")[0] for ln in lines[1:]]
    assert kinds == ["doublet_pole", "doublet_zero"]
