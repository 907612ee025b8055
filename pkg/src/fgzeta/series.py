"""Truncated power series over a coefficient ring.

A TruncatedSeries stores coefficients c_0..c_N of sum c_n u^n; every operation
truncates at the smaller operand order. Values are immutable; all functions
are pure. exp and log run the standard derivative recurrences, O(N^2)
coefficient operations, and defer their constant-term preconditions to the
ring (exact mode demands exp(0)/log(1); real mode demands a positive constant
for log).

SeriesRing makes series themselves usable as coefficients, which is how the
formal-group checks realize bivariate and trivariate expansions: a series in Y
whose coefficients are series in X. Only polynomial ring operations plus
exp/log towers are provided there.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .rings import (ConstantTermError, RationalField, RealField,
                    RingMismatchError, DEFAULT_PRECISION_BITS)


@dataclass(frozen=True)
class TruncatedSeries:
    ring: Any
    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def zeros(ring, order: int) -> "TruncatedSeries":
        if order < 0:
            raise ValueError("order must be >= 0")
        return TruncatedSeries(ring, tuple(ring.zero() for _ in range(order + 1)))

    @staticmethod
    def constant(ring, value, order: int) -> "TruncatedSeries":
        return TruncatedSeries(
            ring, (value,) + tuple(ring.zero() for _ in range(order)))

    @staticmethod
    def variable(ring, order: int) -> "TruncatedSeries":
        if order < 1:
            raise ValueError("a variable needs order >= 1")
        tail = tuple(ring.zero() for _ in range(order - 1))
        return TruncatedSeries(ring, (ring.zero(), ring.one()) + tail)

    @staticmethod
    def build(ring, values, order: int | None = None) -> "TruncatedSeries":
        """Coerce a list of scalars through ring.lift; pad with zeros to order."""
        coeffs = [ring.lift(v) for v in values]
        if order is not None:
            if len(coeffs) > order + 1:
                coeffs = coeffs[:order + 1]
            while len(coeffs) < order + 1:
                coeffs.append(ring.zero())
        if not coeffs:
            raise ValueError("empty coefficient list")
        return TruncatedSeries(ring, tuple(coeffs))

    def _check_ring(self, other: "TruncatedSeries"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"cannot combine {self.ring!r} with {other.ring!r}")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_ring(other)
        n = min(self.order, other.order)
        ring = self.ring
        return TruncatedSeries(ring, tuple(
            ring.add(self.coeffs[k], other.coeffs[k]) for k in range(n + 1)))

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_ring(other)
        n = min(self.order, other.order)
        ring = self.ring
        return TruncatedSeries(ring, tuple(
            ring.sub(self.coeffs[k], other.coeffs[k]) for k in range(n + 1)))

    def __neg__(self):
        ring = self.ring
        return TruncatedSeries(ring, tuple(ring.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_ring(other)
        n = min(self.order, other.order)
        ring = self.ring
        out = [ring.zero() for _ in range(n + 1)]
        # skip zero coefficients: nested operands are usually sparse
        nz = [j for j in range(n + 1) if not ring.is_zero(other.coeffs[j])]
        for i in range(n + 1):
            a = self.coeffs[i]
            if ring.is_zero(a):
                continue
            for j in nz:
                if i + j > n:
                    break
                out[i + j] = ring.add(out[i + j], ring.mul(a, other.coeffs[j]))
        return TruncatedSeries(ring, tuple(out))

    def scale(self, c) -> "TruncatedSeries":
        """Multiply every coefficient by the scalar c."""
        ring = self.ring
        c = ring.lift(c) if not _is_ring_element(ring, c) else c
        return TruncatedSeries(ring, tuple(ring.mul(a, c) for a in self.coeffs))

    def truncate(self, order: int) -> "TruncatedSeries":
        if order < 0:
            raise ValueError("order must be >= 0")
        if order >= self.order:
            return self
        return TruncatedSeries(self.ring, self.coeffs[:order + 1])

    def exp(self) -> "TruncatedSeries":
        """exp of the series; n e_n = sum_{j=1..n} j c_j e_{n-j}."""
        ring = self.ring
        c = self.coeffs
        out = [ring.exp(c[0])]
        for m in range(1, self.order + 1):
            acc = ring.zero()
            for j in range(1, m + 1):
                if ring.is_zero(c[j]):
                    continue
                acc = ring.add(acc, ring.mul(ring.mul_int(c[j], j), out[m - j]))
            out.append(ring.div_int(acc, m))
        return TruncatedSeries(ring, tuple(out))

    def log(self) -> "TruncatedSeries":
        """log of the series; c_0 n l_n = n c_n - sum_{j=1..n-1} j l_j c_{n-j}."""
        ring = self.ring
        c = self.coeffs
        out = [ring.log(c[0])]
        if self.order >= 1:
            inv_c0 = ring.div(ring.one(), c[0])
            for m in range(1, self.order + 1):
                acc = ring.mul_int(c[m], m)
                for j in range(1, m):
                    if ring.is_zero(c[m - j]):
                        continue
                    acc = ring.sub(acc, ring.mul(ring.mul_int(out[j], j), c[m - j]))
                out.append(ring.div_int(ring.mul(acc, inv_c0), m))
        return TruncatedSeries(ring, tuple(out))

    def reciprocal(self) -> "TruncatedSeries":
        ring = self.ring
        c = self.coeffs
        if ring.is_zero(c[0]):
            raise ConstantTermError("reciprocal of a series with zero constant term")
        r0 = ring.div(ring.one(), c[0])
        out = [r0]
        for m in range(1, self.order + 1):
            acc = ring.zero()
            for j in range(1, m + 1):
                if ring.is_zero(c[j]):
                    continue
                acc = ring.add(acc, ring.mul(c[j], out[m - j]))
            out.append(ring.neg(ring.mul(r0, acc)))
        return TruncatedSeries(ring, tuple(out))

    def derivative(self) -> "TruncatedSeries":
        ring = self.ring
        if self.order == 0:
            return TruncatedSeries(ring, (ring.zero(),))
        return TruncatedSeries(ring, tuple(
            ring.mul_int(self.coeffs[k + 1], k + 1) for k in range(self.order)))

    def integrate(self) -> "TruncatedSeries":
        """Termwise antiderivative with zero constant; raises order by one."""
        ring = self.ring
        out = [ring.zero()]
        for k in range(self.order + 1):
            out.append(ring.div_int(self.coeffs[k], k + 1))
        return TruncatedSeries(ring, tuple(out))

    def even_part(self) -> "TruncatedSeries":
        ring = self.ring
        return TruncatedSeries(ring, tuple(
            c if k % 2 == 0 else ring.zero() for k, c in enumerate(self.coeffs)))

    def odd_part(self) -> "TruncatedSeries":
        ring = self.ring
        return TruncatedSeries(ring, tuple(
            c if k % 2 == 1 else ring.zero() for k, c in enumerate(self.coeffs)))

    def scale_variable(self, lam) -> "TruncatedSeries":
        """u -> lam*u: c_n maps to c_n lam^n."""
        ring = self.ring
        lam = ring.lift(lam) if not _is_ring_element(ring, lam) else lam
        out = [self.coeffs[0]]
        power = ring.one()
        for k in range(1, self.order + 1):
            power = ring.mul(power, lam)
            out.append(ring.mul(self.coeffs[k], power))
        return TruncatedSeries(ring, tuple(out))

    def evaluate(self, x):
        """Horner evaluation of the truncating polynomial at x."""
        ring = self.ring
        x = ring.lift(x) if not _is_ring_element(ring, x) else x
        acc = self.coeffs[self.order]
        for k in range(self.order - 1, -1, -1):
            acc = ring.add(ring.mul(acc, x), self.coeffs[k])
        return acc

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        if self.order > 5:
            shown += ", ..."
        return f"TruncatedSeries(order={self.order}, [{shown}])"


def _is_ring_element(ring, x) -> bool:
    # lift() is idempotent for scalar rings but a series must not be re-lifted
    return isinstance(x, TruncatedSeries)


class SeriesRing:
    """Series-valued coefficients, enabling nested (multivariate) expansions."""

    def __init__(self, base, order: int):
        if order < 0:
            raise ValueError("order must be >= 0")
        self.base = base
        self.order = order
        self.name = f"series[{getattr(base, 'name', repr(base))}]"

    @property
    def exact(self):
        return self.base.exact

    def zero(self):
        return TruncatedSeries.zeros(self.base, self.order)

    def one(self):
        return TruncatedSeries.constant(self.base, self.base.one(), self.order)

    def from_int(self, n):
        return TruncatedSeries.constant(self.base, self.base.from_int(n), self.order)

    def lift(self, x):
        if isinstance(x, TruncatedSeries):
            # already an element: lift is the identity (padded to our order)
            if x.ring != self.base:
                raise RingMismatchError(
                    f"cannot lift a {x.ring!r} series into {self!r}")
            if x.order == self.order:
                return x
            return TruncatedSeries.build(self.base, x.coeffs, order=self.order)
        return TruncatedSeries.constant(self.base, self.base.lift(x), self.order)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def mul_int(self, a, n):
        base = self.base
        return TruncatedSeries(base, tuple(base.mul_int(c, n) for c in a.coeffs))

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a * b.reciprocal()

    def div_int(self, a, n):
        base = self.base
        return TruncatedSeries(base, tuple(base.div_int(c, n) for c in a.coeffs))

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return (a.order == b.order
                and all(self.base.eq(x, y) for x, y in zip(a.coeffs, b.coeffs)))

    def exp(self, a):
        return a.exp()

    def log(self, a):
        return a.log()

    def __eq__(self, other):
        return (isinstance(other, SeriesRing)
                and other.base == self.base and other.order == self.order)

    def __hash__(self):
        return hash(("series", self.base, self.order))

    def __repr__(self):
        return f"SeriesRing({self.base!r}, order={self.order})"


def to_json_dict(s: TruncatedSeries) -> dict:
    name = getattr(s.ring, "name", "")
    if name not in ("rational", "bigreal"):
        raise ValueError(f"ring {name!r} has no serialization")
    return {
        "order": s.order,
        "ring": name,
        "coeffs": [s.ring.format(c) for c in s.coeffs],
    }


def from_json_dict(obj: dict, precision_bits: int | None = None) -> TruncatedSeries:
    try:
        order = obj["order"]
        tag = obj["ring"]
        raw = obj["coeffs"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed series object: missing {exc}") from exc
    if tag == "rational":
        ring = RationalField()
    elif tag == "bigreal":
        ring = RealField(precision_bits or DEFAULT_PRECISION_BITS)
    else:
        raise ValueError(f"malformed ring tag {tag!r}")
    if not isinstance(order, int) or order < 0:
        raise ValueError(f"malformed order {order!r}")
    if not isinstance(raw, list) or len(raw) != order + 1:
        raise ValueError("coefficient count does not match order")
    try:
        coeffs = tuple(ring.parse(c) for c in raw)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"unparseable coefficient: {exc}") from exc
    return TruncatedSeries(ring, coeffs)
