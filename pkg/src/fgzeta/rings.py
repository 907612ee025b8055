"""Coefficient rings: exact rationals and fixed-precision binary reals.

Series arithmetic is generic over a ring object so the same code runs exactly
over Q (for algebraic identity checking) and numerically over R (for prime
sums). RealField wraps gmpy2.mpfr at a chosen mantissa width, default 256
bits. Every real operation goes through the field's own gmpy2 context; bare
operators on mpfr values would silently round at the 53-bit global context.
"""
from __future__ import annotations

import math
from fractions import Fraction

import gmpy2

DEFAULT_PRECISION_BITS = 256


class RingMismatchError(ValueError):
    """Operands belong to different coefficient rings."""


class ConstantTermError(ValueError):
    """A series constant term lies outside the domain of exp/log/reciprocal."""


class RationalField:
    """Exact rational coefficients. Nothing rounds, ever."""

    name = "rational"
    exact = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def lift(self, x):
        # floats are rejected: an inexact literal in an exact computation is a bug
        if isinstance(x, float):
            raise TypeError("float coefficient in exact rational mode")
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def mul_int(self, a, n):
        return a * n

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ConstantTermError("division by zero in rational mode")
        return a / b

    def div_int(self, a, n):
        return a / n

    def pow_int(self, a, n):
        return a ** n

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def abs(self, a):
        return abs(a)

    def exp(self, a):
        if a != 0:
            raise ConstantTermError(
                "exp of a nonzero constant term is transcendental; not exact")
        return Fraction(1)

    def log(self, a):
        if a != 1:
            raise ConstantTermError(
                "log requires constant term 1 in exact rational mode")
        return Fraction(0)

    def format(self, a):
        return f"{a.numerator}/{a.denominator}"

    def parse(self, s):
        return Fraction(s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "RationalField()"


class RealField:
    """Binary floating-point coefficients at a fixed mantissa width.

    decimal_digits is the shortest decimal length guaranteed to round-trip a
    value of this width; format/parse use it so serialization is lossless.
    """

    name = "bigreal"
    exact = False

    def __init__(self, precision_bits: int = DEFAULT_PRECISION_BITS):
        if precision_bits < 8:
            raise ValueError("precision must be at least 8 bits")
        self.precision_bits = precision_bits
        self.decimal_digits = math.ceil(precision_bits * math.log10(2)) + 2
        self._ctx = gmpy2.context(precision=precision_bits)

    @property
    def ctx(self):
        return self._ctx

    def zero(self):
        return gmpy2.mpfr(0, self.precision_bits)

    def one(self):
        return gmpy2.mpfr(1, self.precision_bits)

    def from_int(self, n):
        return gmpy2.mpfr(n, self.precision_bits)

    def lift(self, x):
        return gmpy2.mpfr(x, self.precision_bits)

    def add(self, a, b):
        return self._ctx.add(a, b)

    def sub(self, a, b):
        return self._ctx.sub(a, b)

    def mul(self, a, b):
        return self._ctx.mul(a, b)

    def mul_int(self, a, n):
        return self._ctx.mul(a, n)

    def neg(self, a):
        return self._ctx.minus(a)

    def div(self, a, b):
        if b == 0:
            raise ConstantTermError("division by zero constant term")
        return self._ctx.div(a, b)

    def div_int(self, a, n):
        return self._ctx.div(a, n)

    def pow_int(self, a, n):
        return self._ctx.pow(a, n)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def abs(self, a):
        return abs(gmpy2.mpfr(a, self.precision_bits))

    def exp(self, a):
        return self._ctx.exp(a)

    def log(self, a):
        if a == 0:
            raise ConstantTermError("log of a zero constant term")
        if a < 0:
            raise ConstantTermError("log of a negative constant term")
        return self._ctx.log(a)

    def sqrt(self, a):
        if a < 0:
            raise ConstantTermError("sqrt of a negative value")
        return self._ctx.sqrt(a)

    def tolerance(self):
        # loose identity tolerance: 2^(16 - precision)
        return self._ctx.pow(gmpy2.mpfr(2, self.precision_bits),
                             16 - self.precision_bits)

    def format(self, a):
        return format(a, f".{self.decimal_digits}g")

    def parse(self, s):
        return gmpy2.mpfr(s, self.precision_bits)

    def __eq__(self, other):
        return (isinstance(other, RealField)
                and other.precision_bits == self.precision_bits)

    def __hash__(self):
        return hash(("bigreal", self.precision_bits))

    def __repr__(self):
        return f"RealField({self.precision_bits})"
