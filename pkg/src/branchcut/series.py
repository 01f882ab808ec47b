"""Truncated power series of log-ratio test functions.

A LogRatioSpec lists the branch points of h(z) = sum ln(z - a_i) -
sum ln(z - b_j). With equally many numerator and denominator factors the
logs cancel at large |z|, h is holomorphic at infinity with h(inf) = 0,
and both the infinity-development and (when no root sits at the origin)
the zero-development have closed-form coefficients from the power sums of
the roots.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import gmpy2

from .errors import BranchPointEvalError, InputError, RootAtOriginError
from .kernel import BigComplex, PrecisionContext, branch_normalize


class ExpansionPoint(enum.Enum):
    ZERO = "zero"
    INFINITY = "infinity"


@dataclass(frozen=True)
class LogRatioSpec:
    """Branch points of a logarithmic ratio function.

    num_roots and den_roots must have equal length so the function decays
    at infinity (h(inf) = 0).
    """

    num_roots: Tuple[BigComplex, ...]
    den_roots: Tuple[BigComplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "num_roots", tuple(self.num_roots))
        object.__setattr__(self, "den_roots", tuple(self.den_roots))
        if len(self.num_roots) != len(self.den_roots):
            raise InputError(
                f"spec needs equally many numerator and denominator roots, "
                f"got {len(self.num_roots)} vs {len(self.den_roots)}"
            )

    def all_roots(self) -> Tuple[BigComplex, ...]:
        return self.num_roots + self.den_roots


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients f[0..N] of a development at zero or at infinity.

    For INFINITY these multiply alpha^(-k); equivalently they are the
    Maclaurin coefficients in w = 1/alpha. For ZERO they multiply alpha^k.
    """

    expansion_point: ExpansionPoint
    coeffs: Tuple[BigComplex, ...]
    ctx: PrecisionContext

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("a series needs at least one coefficient")

    def raw(self) -> List["gmpy2.mpc"]:
        """Fresh list of the underlying mpc values (internal plumbing)."""
        return [c.v for c in self.coeffs]

    def __len__(self) -> int:
        return len(self.coeffs)


def _power_sum_diff(spec: LogRatioSpec, invert: bool, N: int):
    """Running powers a^k (or a^-k) of all roots; yields the num-den gap per k."""
    num = [r.v for r in spec.num_roots]
    den = [r.v for r in spec.den_roots]
    if invert:
        num = [1 / a for a in num]
        den = [1 / b for b in den]
    pn = list(num)
    pd = list(den)
    for k in range(1, N + 1):
        if k > 1:
            pn = [p * a for p, a in zip(pn, num)]
            pd = [p * b for p, b in zip(pd, den)]
        diff = gmpy2.mpc(0)
        for p in pn:
            diff += p
        for p in pd:
            diff -= p
        yield k, diff


def expand_at_infinity(spec: LogRatioSpec, N: int, ctx: PrecisionContext) -> PowerSeries:
    """Development h(z) = sum_{k>=1} f[k] z^(-k); f[0] = 0 always.

    Uses ln(z - a) = ln z - sum_k a^k / (k z^k), so
    f[k] = -(1/k) (sum_num a^k - sum_den b^k).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    with ctx.activate():
        out = [gmpy2.mpc(0)]
        for k, diff in _power_sum_diff(spec, invert=False, N=N):
            out.append(-diff / k)
        return PowerSeries(
            ExpansionPoint.INFINITY, tuple(BigComplex(c, ctx.bits) for c in out), ctx
        )


def expand_at_zero(spec: LogRatioSpec, N: int, ctx: PrecisionContext) -> PowerSeries:
    """Development at the origin: f[0] = sum Ln(-a) - sum Ln(-b), and
    f[k] = -(1/k) (sum_num a^(-k) - sum_den b^(-k)) from ln(z-a) =
    Ln(-a) - sum_k z^k a^(-k) / k.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    for r in spec.all_roots():
        if r.v == 0:
            raise RootAtOriginError("cannot develop at zero: spec has a root at the origin")
    with ctx.activate():
        f0 = gmpy2.mpc(0)
        for a in spec.num_roots:
            f0 += gmpy2.log(branch_normalize(-a.v))
        for b in spec.den_roots:
            f0 -= gmpy2.log(branch_normalize(-b.v))
        out = [f0]
        for k, diff in _power_sum_diff(spec, invert=True, N=N):
            out.append(-diff / k)
        return PowerSeries(
            ExpansionPoint.ZERO, tuple(BigComplex(c, ctx.bits) for c in out), ctx
        )


def eval_reference(spec: LogRatioSpec, z: BigComplex) -> BigComplex:
    """Direct evaluation sum Ln(z-a) - sum Ln(z-b), principal branch per factor.

    Valid off the branch cuts; on a cut the per-factor branch choice is a
    convention. Raises at the branch points themselves.
    """
    ctx = PrecisionContext(z.bits)
    with ctx.activate():
        acc = gmpy2.mpc(0)
        for a in spec.num_roots:
            d = z.v - a.v
            if d == 0:
                raise BranchPointEvalError("evaluation point equals a numerator root")
            acc += gmpy2.log(branch_normalize(d))
        for b in spec.den_roots:
            d = z.v - b.v
            if d == 0:
                raise BranchPointEvalError("evaluation point equals a denominator root")
            acc -= gmpy2.log(branch_normalize(d))
        return BigComplex(acc, z.bits)


# Built-in demonstration cases: two conjugate pairs mirrored across the
# imaginary axis, optionally augmented with a real pair. C and D differ
# only in where the added numerator root sits.
_CASES = {
    "A": ((("2", "3"), ("2", "-3")), (("-2", "3"), ("-2", "-3"))),
    "B": ((("2", "1.5"), ("2", "-1.5")), (("-2", "1.5"), ("-2", "-1.5"))),
    "C": (
        (("2", "1.5"), ("2", "-1.5"), ("-1.6", "0")),
        (("-2", "1.5"), ("-2", "-1.5"), ("1.6", "0")),
    ),
    "D": (
        (("2", "1.5"), ("2", "-1.5"), ("-0.7", "0")),
        (("-2", "1.5"), ("-2", "-1.5"), ("1.6", "0")),
    ),
}


def case_spec(case_id: str, ctx: PrecisionContext) -> LogRatioSpec:
    """One of the built-in cases A-D."""
    try:
        num, den = _CASES[case_id.upper()]
    except KeyError:
        raise InputError(f"unknown case {case_id!r}; expected one of A, B, C, D") from None
    return LogRatioSpec(
        tuple(ctx.big(re, im) for re, im in num),
        tuple(ctx.big(re, im) for re, im in den),
    )


def _parse_pair(item, ctx: PrecisionContext, where: str) -> BigComplex:
    if not isinstance(item, (list, tuple)) or len(item) != 2:
        raise InputError(f"{where}: each root must be a [re, im] pair, got {item!r}")
    parts = []
    for p in item:
        if isinstance(p, bool) or not isinstance(p, (int, float, str)):
            raise InputError(f"{where}: numbers or decimal strings expected, got {p!r}")
        try:
            parts.append(ctx.real(p))
        except ValueError:
            raise InputError(f"{where}: cannot parse {p!r} as a decimal") from None
    return ctx.big(parts[0], parts[1])


def spec_from_dict(data, ctx: PrecisionContext) -> LogRatioSpec:
    """Build a LogRatioSpec from the function-spec JSON object."""
    if not isinstance(data, dict):
        raise InputError("function spec must be a JSON object")
    unknown = set(data) - {"num_roots", "den_roots"}
    if unknown:
        raise InputError(f"unknown function-spec keys: {sorted(unknown)}")
    for key in ("num_roots", "den_roots"):
        if key not in data:
            raise InputError(f"function spec missing {key!r}")
        if not isinstance(data[key], list):
            raise InputError(f"{key} must be a list of [re, im] pairs")
    num = tuple(_parse_pair(p, ctx, "num_roots") for p in data["num_roots"])
    den = tuple(_parse_pair(p, ctx, "den_roots") for p in data["den_roots"])
    return LogRatioSpec(num, den)


def load_spec(path: Union[str, "object"], ctx: PrecisionContext) -> LogRatioSpec:
    """Read a function-spec JSON file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"cannot read spec file {path}: {e}") from None
    return spec_from_dict(data, ctx)
