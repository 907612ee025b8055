"""Prime generation, Chebyshev theta, and the weighted prime sums feeding the
cumulant coefficients.

The inner k-sums sum_{k>=1} k^m x^k are evaluated in closed form through the
Eulerian-number triangle: sum k^m x^k = (sum_j A(m,j) x^(j+1)) / (1-x)^(m+1).
A truncated brute-force variant with a certified geometric tail bound is kept
alongside as the oracle path and as the k-limited weight used by the reduced
fluctuation object.

All floating sums over primes go through one deterministic balanced pairwise
reduction tree, so results are bit-identical run to run.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .rings import RealField

SIEVE_CAP = 2 ** 31


def _sieve_odd(pmax: int) -> list[int]:
    """Odd-only sieve of Eratosthenes; returns all primes <= pmax."""
    if pmax < 3:
        return [2] if pmax >= 2 else []
    half = (pmax - 1) // 2          # flags[i] stands for 2i + 1, i >= 1
    flags = bytearray([1]) * (half + 1)
    flags[0] = 0
    i = 1
    while (2 * i + 1) ** 2 <= pmax:
        if flags[i]:
            p = 2 * i + 1
            start = (p * p - 1) // 2
            flags[start::p] = bytearray(len(flags[start::p]))
        i += 1
    return [2] + [2 * i + 1 for i in range(1, half + 1) if flags[i]]


@dataclass(frozen=True)
class PrimeTable:
    pmax: int
    primes: tuple
    theta_prefix: tuple
    ring: RealField
    logs: tuple = field(repr=False, default=())
    inv_sqrt: tuple = field(repr=False, default=())

    def prime_count(self) -> int:
        return len(self.primes)

    def theta(self, x):
        """theta(x) = sum of log p over primes p <= x; 0 below the first prime."""
        i = bisect.bisect_right(self.primes, x)
        if i == 0:
            return self.ring.zero()
        return self.theta_prefix[i - 1]


def sieve_primes(pmax: int, ring: RealField | None = None) -> PrimeTable:
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    if pmax > SIEVE_CAP:
        raise ValueError(f"pmax above sieve cap {SIEVE_CAP}")
    if ring is None:
        ring = RealField()
    ctx = ring.ctx
    primes = _sieve_odd(pmax)
    bits = ring.precision_bits
    logs = [ctx.log(gmpy2.mpfr(p, bits)) for p in primes]
    prefix = []
    acc = ring.zero()
    for lp in logs:                  # deterministic left-to-right accumulation
        acc = ctx.add(acc, lp)
        prefix.append(acc)
    half = gmpy2.mpfr(Fraction(-1, 2), bits)
    inv_sqrt = [ctx.pow(gmpy2.mpfr(p, bits), half) for p in primes]
    return PrimeTable(pmax=pmax, primes=tuple(primes), theta_prefix=tuple(prefix),
                      ring=ring, logs=tuple(logs), inv_sqrt=tuple(inv_sqrt))


def chebyshev_error(x, table: PrimeTable):
    """E(x) = theta(x) - x for 2 <= x <= pmax."""
    ring = table.ring
    xr = ring.lift(x)
    if xr < 2 or xr > table.pmax:
        raise ValueError(f"x = {x} outside covered range [2, {table.pmax}]")
    return ring.sub(table.theta(xr), xr)


@dataclass(frozen=True)
class EulerianRow:
    m: int
    entries: tuple

    def row_sum(self) -> int:
        return sum(self.entries)


_EULERIAN_ROWS: list[tuple] = [(1,)]


def eulerian_row(m: int) -> EulerianRow:
    """Row m of the Eulerian triangle, A(m,j) = (j+1)A(m-1,j) + (m-j)A(m-1,j-1)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    while len(_EULERIAN_ROWS) <= m:
        k = len(_EULERIAN_ROWS)
        prev = _EULERIAN_ROWS[k - 1]

        def at(j):
            return prev[j] if 0 <= j < len(prev) else 0

        row = tuple((j + 1) * at(j) + (k - j) * at(j - 1) for j in range(k))
        _EULERIAN_ROWS.append(row)
    return EulerianRow(m, _EULERIAN_ROWS[m])


def sum_k_pow(m: int, x, ring=None):
    """sum_{k>=1} k^m x^k for 0 < x < 1, by the Eulerian closed form.

    Exact when x is a Fraction (or int-free rational) and no ring is given;
    otherwise evaluated in the given RealField.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if ring is None:
        if not isinstance(x, (Fraction, int)):
            raise TypeError("a RealField is required for non-rational x")
        x = Fraction(x)
        if not 0 < x < 1:
            raise ValueError("x must lie in (0, 1)")
        row = eulerian_row(m).entries
        num = sum(a * x ** (j + 1) for j, a in enumerate(row))
        return num / (1 - x) ** (m + 1)
    ctx = ring.ctx
    x = ring.lift(x)
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    row = eulerian_row(m).entries
    num = ring.zero()
    xp = ring.one()
    for a in row:
        xp = ctx.mul(xp, x)
        num = ctx.add(num, ctx.mul(xp, a))
    return ctx.div(num, ctx.pow(ctx.sub(ring.one(), x), m + 1))


def sum_k_pow_truncated(m: int, x, kmax: int, ring=None):
    """Brute-force partial sum sum_{k=1..kmax} k^m x^k."""
    if m < 0 or kmax < 1:
        raise ValueError("need m >= 0 and kmax >= 1")
    if ring is None:
        x = Fraction(x)
        return sum(Fraction(k) ** m * x ** k for k in range(1, kmax + 1))
    ctx = ring.ctx
    x = ring.lift(x)
    acc = ring.zero()
    xp = ring.one()
    for k in range(1, kmax + 1):
        xp = ctx.mul(xp, x)
        acc = ctx.add(acc, ctx.mul(xp, k ** m))
    return acc


def sum_k_pow_tail_bound(m: int, x, kmax: int, ring=None):
    """Upper bound on the tail sum_{k>kmax} k^m x^k.

    Term ratios k^m x^k are dominated by the geometric ratio
    r = x * ((kmax+2)/(kmax+1))^m for k > kmax, so the tail is at most
    first_neglected_term / (1 - r). Requires r < 1.
    """
    if ring is None:
        x = Fraction(x)
        r = x * Fraction(kmax + 2, kmax + 1) ** m
        if r >= 1:
            raise ValueError("kmax too small for a geometric tail bound")
        return Fraction(kmax + 1) ** m * x ** (kmax + 1) / (1 - r)
    ctx = ring.ctx
    x = ring.lift(x)
    ratio = ctx.div(ring.from_int(kmax + 2), ring.from_int(kmax + 1))
    r = ctx.mul(x, ctx.pow(ratio, m))
    if r >= 1:
        raise ValueError("kmax too small for a geometric tail bound")
    first = ctx.mul(ctx.pow(ring.from_int(kmax + 1), m), ctx.pow(x, kmax + 1))
    return ctx.div(first, ctx.sub(ring.one(), r))


def pairwise_sum(ring: RealField, terms):
    """Sum by a fixed balanced pairwise tree; bit-identical regardless of how
    the term list was produced."""
    ctx = ring.ctx
    items = list(terms)
    if not items:
        return ring.zero()
    while len(items) > 1:
        nxt = []
        for i in range(0, len(items) - 1, 2):
            nxt.append(ctx.add(items[i], items[i + 1]))
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def _prime_slice(table: PrimeTable, pmax: int | None) -> int:
    if pmax is None:
        return len(table.primes)
    if pmax > table.pmax:
        raise ValueError(f"pmax {pmax} beyond table range {table.pmax}")
    return bisect.bisect_right(table.primes, pmax)


def weighted_prime_sum(n: int, table: PrimeTable, pmax: int | None = None,
                       kmax: int | None = None):
    """sum_{p <= pmax} (log p)^n * sum_k k^(n-1) p^(-k/2), n >= 1.

    kmax truncates the inner k-sum; None means the full closed form.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ring = table.ring
    ctx = ring.ctx
    count = _prime_slice(table, pmax)
    terms = []
    for i in range(count):
        x = table.inv_sqrt[i]
        if kmax is None:
            s = sum_k_pow(n - 1, x, ring)
        else:
            s = sum_k_pow_truncated(n - 1, x, kmax, ring)
        terms.append(ctx.mul(ctx.pow(table.logs[i], n), s))
    return pairwise_sum(ring, terms)


def weighted_prime_sums(n_values, table: PrimeTable, pmax: int | None = None):
    """weighted_prime_sum for several n sharing per-prime power computations."""
    ns = sorted(set(n_values))
    if not ns:
        return {}
    if ns[0] < 1:
        raise ValueError("n must be >= 1")
    ring = table.ring
    ctx = ring.ctx
    one = ring.one()
    count = _prime_slice(table, pmax)
    mmax = ns[-1] - 1
    rows = [eulerian_row(m).entries for m in range(mmax + 1)]
    terms = {n: [] for n in ns}
    for i in range(count):
        x = table.inv_sqrt[i]
        lp = table.logs[i]
        xpow = [one]
        for _ in range(mmax + 1):
            xpow.append(ctx.mul(xpow[-1], x))
        om = ctx.sub(one, x)
        ompow = [one]
        for _ in range(mmax + 2):
            ompow.append(ctx.mul(ompow[-1], om))
        lppow = {1: lp}
        for n in range(2, ns[-1] + 1):
            lppow[n] = ctx.mul(lppow[n - 1], lp)
        for n in ns:
            m = n - 1
            num = ring.zero()
            for j, a in enumerate(rows[m]):
                num = ctx.add(num, ctx.mul(xpow[j + 1], a))
            s = ctx.div(num, ompow[m + 1])
            terms[n].append(ctx.mul(lppow[n], s))
    return {n: pairwise_sum(ring, terms[n]) for n in ns}


def is_prime_trial(n: int) -> bool:
    """Trial-division primality test; the oracle the sieve is checked against."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True
