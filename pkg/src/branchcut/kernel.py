"""Arbitrary-precision complex arithmetic under an explicit precision context.

Built on gmpy2 (MPFR/MPC). The one rule that matters: gmpy2 rounds every
operation to the precision of the *active thread context*, not of the
operands, so all arithmetic in this package runs inside
``with ctx.activate():`` blocks. Values escaping a block keep their
precision; touching them outside a block would silently round to the
ambient (53-bit) default, which is why :class:`BigComplex` deliberately
grows no arithmetic operators of its own.

Principal branches throughout: Im(ln) in (-pi, pi], sqrt along the
standard cut on the negative real axis.
"""
from __future__ import annotations

import contextlib
from typing import Iterator, Optional, Union

import gmpy2

from .errors import SingularOperandError

RealLike = Union[int, float, str, "gmpy2.mpfr"]


class PrecisionContext:
    """An explicit significand width, threaded through every API.

    bits >= 64; the default of 512 matches the portrait experiments.
    """

    __slots__ = ("bits",)

    def __init__(self, bits: int = 512):
        if not isinstance(bits, int) or bits < 64:
            raise ValueError(f"bits must be an integer >= 64, got {bits!r}")
        self.bits = bits

    @contextlib.contextmanager
    def activate(self) -> Iterator["PrecisionContext"]:
        """Make this precision the active gmpy2 rounding target."""
        saved = gmpy2.get_context()
        gmpy2.set_context(gmpy2.context(precision=self.bits))
        try:
            yield self
        finally:
            gmpy2.set_context(saved)

    def real(self, x: RealLike) -> "gmpy2.mpfr":
        """Parse a real at this precision; decimal strings stay exact to 1 ulp."""
        with self.activate():
            return gmpy2.mpfr(x)

    def big(self, re: RealLike = 0, im: RealLike = 0) -> "BigComplex":
        with self.activate():
            return BigComplex(gmpy2.mpc(gmpy2.mpfr(re), gmpy2.mpfr(im)), self.bits)

    def from_complex(self, z: complex) -> "BigComplex":
        return self.big(z.real, z.imag)

    # Tolerances derived from the width; used all over the higher modules.
    def eps(self, guard: int = 0) -> "gmpy2.mpfr":
        """2^(-bits+guard) as an mpfr of this context."""
        with self.activate():
            return gmpy2.exp2(-self.bits + guard)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrecisionContext) and other.bits == self.bits

    def __hash__(self) -> int:
        return hash(("PrecisionContext", self.bits))

    def __repr__(self) -> str:
        return f"PrecisionContext(bits={self.bits})"


class BigComplex:
    """Immutable arbitrary-precision complex value tagged with its context width.

    Thin wrapper over gmpy2.mpc. Construct through PrecisionContext.big()
    or kernel operations; ``v`` is the raw mpc for internal consumers.
    """

    __slots__ = ("v", "bits")

    def __init__(self, v: "gmpy2.mpc", bits: int):
        self.v = v
        self.bits = bits

    @property
    def re(self) -> "gmpy2.mpfr":
        return self.v.real

    @property
    def im(self) -> "gmpy2.mpfr":
        return self.v.imag

    def conj(self) -> "BigComplex":
        # Conjugation is exact: no rounding context needed.
        return BigComplex(gmpy2.mpc(self.v.real, -self.v.imag), self.bits)

    def is_finite(self) -> bool:
        return bool(gmpy2.is_finite(self.v))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigComplex):
            return NotImplemented
        return self.v == other.v

    def __hash__(self) -> int:
        return hash(self.v)

    def __complex__(self) -> complex:
        return complex(self.v)

    def __repr__(self) -> str:
        return f"BigComplex({format_sig(self.v.real, 20)}, {format_sig(self.v.imag, 20)}; bits={self.bits})"


_UNARY = {"sqrt", "ln", "abs", "conj"}
_BINARY = {"add", "sub", "mul", "div"}


def branch_normalize(v: "gmpy2.mpc") -> "gmpy2.mpc":
    """Collapse a signed-zero imaginary part to +0.

    MPC's principal branch follows the sign of zero, so ln(-1 - 0j) would
    give -i pi; the contract here is Im(ln) in (-pi, pi], which means the
    +0 side everywhere on the cut.
    """
    if v.imag == 0:
        return gmpy2.mpc(v.real, 0)
    return v


def arith(op: str, x: BigComplex, y: Optional[BigComplex] = None) -> BigComplex:
    """Elementary operation at the precision recorded on the operands.

    Binary ops require both operands from the same-width context; ln/sqrt
    return principal branches. Division by zero and ln(0) raise
    SingularOperandError, and no non-finite value is ever returned.
    """
    if op in _BINARY:
        if y is None:
            raise ValueError(f"{op} needs two operands")
        if y.bits != x.bits:
            raise ValueError(f"mixed precisions: {x.bits} vs {y.bits}")
    elif op in _UNARY:
        if y is not None:
            raise ValueError(f"{op} takes one operand")
    else:
        raise ValueError(f"unknown op {op!r}")

    ctx = PrecisionContext(x.bits)
    with ctx.activate():
        if op == "add":
            r = x.v + y.v
        elif op == "sub":
            r = x.v - y.v
        elif op == "mul":
            r = x.v * y.v
        elif op == "div":
            if y.v == 0:
                raise SingularOperandError("division by zero")
            r = x.v / y.v
        elif op == "sqrt":
            r = gmpy2.sqrt(branch_normalize(x.v))
        elif op == "ln":
            if x.v == 0:
                raise SingularOperandError("ln(0)")
            r = gmpy2.log(branch_normalize(x.v))
        elif op == "abs":
            r = gmpy2.mpc(abs(x.v), 0)
        else:  # conj
            return x.conj()
        if not gmpy2.is_finite(r):
            raise SingularOperandError(f"{op} produced a non-finite value")
        return BigComplex(r, x.bits)


def format_sig(x: "gmpy2.mpfr", sig: int = 30) -> str:
    """Decimal scientific string with exactly ``sig`` significant digits.

    gmpy2's __format__ lacks 'e' support, so this assembles the string from
    gmpy2.digits(); exact zero prints as plain "0".
    """
    if gmpy2.is_nan(x):
        return "nan"
    if not gmpy2.is_finite(x):
        return "-inf" if x < 0 else "inf"
    if x == 0:
        return "0"
    digs, exp, _ = gmpy2.digits(x, 10, sig)
    sign = ""
    if digs.startswith("-"):
        sign, digs = "-", digs[1:]
    # digits() yields value = 0.<digs> * 10^exp
    return f"{sign}{digs[0]}.{digs[1:]}e{exp - 1:+03d}"
