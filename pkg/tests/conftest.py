"""Shared fixtures.

The degree-99 portraits dominate the runtime of the whole suite (a
degree-100 root find at 512 bits is seconds, not milliseconds), so every
heavy artifact is built once per session and shared between the unit
tests and the acceptance gate.
"""
import gmpy2
import pytest

from branchcut import analysis, pade, series
from branchcut.analysis import Plane
from branchcut.kernel import BigComplex, PrecisionContext

BITS = 512
SERIES_LEN = 201  # supports [m/m+1] up to m = 99


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(BITS)


@pytest.fixture(scope="session")
def eq13_spec(ctx):
    """ln((z-1)/(z+1)): the one-cut workhorse with closed-form everything."""
    return series.LogRatioSpec((ctx.big(1, 0),), (ctx.big(-1, 0),))


class _Lab:
    """Memoized builders for series / approximants / filtered portraits."""

    def __init__(self, ctx, eq13):
        self.ctx = ctx
        self._eq13 = eq13
        self._memo = {}

    def spec(self, name):
        if name == "eq13":
            return self._eq13
        return series.case_spec(name, self.ctx)

    def series(self, name, expansion="infinity"):
        key = ("series", name, expansion)
        if key not in self._memo:
            sp = self.spec(name)
            if expansion == "infinity":
                self._memo[key] = series.expand_at_infinity(sp, SERIES_LEN, self.ctx)
            else:
                self._memo[key] = series.expand_at_zero(sp, SERIES_LEN, self.ctx)
        return self._memo[key]

    def pa(self, name, m, expansion="infinity"):
        key = ("pa", name, m, expansion)
        if key not in self._memo:
            self._memo[key] = pade.build(self.series(name, expansion), m, m + 1)
        return self._memo[key]

    def filtered(self, name, m, expansion="infinity", plane=Plane.INVERSE_ALPHA):
        """(clean portrait, doublets, raw portrait) after Froissart filtering."""
        key = ("filtered", name, m, expansion, plane)
        if key not in self._memo:
            raw = analysis.portrait(self.pa(name, m, expansion), plane)
            clean, doublets = analysis.froissart_filter(raw)
            self._memo[key] = (clean, doublets, raw)
        return self._memo[key]

    def reference(self, name, re, im=0):
        key = ("ref", name, str(re), str(im))
        if key not in self._memo:
            self._memo[key] = series.eval_reference(self.spec(name), self.ctx.big(re, im))
        return self._memo[key]

    def err_at(self, name, m, re, expansion="infinity"):
        """|PA - reference| at a real point, t formed at full precision."""
        z = self.ctx.big(re, 0)
        with self.ctx.activate():
            t = BigComplex(1 / z.v, self.ctx.bits) if expansion == "infinity" else z
        val = pade.evaluate(self.pa(name, m, expansion), t)
        ref = self.reference(name, re)
        with self.ctx.activate():
            return abs(ref.v - val.v)


@pytest.fixture(scope="session")
def lab(ctx, eq13_spec):
    return _Lab(ctx, eq13_spec)
