"""Boundary-bulk decomposition of cumulant coefficients through the Chebyshev
error E(x) = theta(x) - x.

The weight phi_2m(x) = (1/(2m)!) (log x)^(2m-1) sum_k k^(2m-1) x^(-k/2) is
chosen so the Stieltjes integral of phi against dtheta reproduces a_2m(P)
as an exact prime-sum identity (each atom at p carries mass log p). Writing
dtheta = dx + dE and integrating the E part by parts splits the coefficient
into a smooth main term, a boundary term phi(P)E(P), and the bulk fluctuation
-integral of E phi'. theta jumps from 0 to log 2 at x = 2, so E(2^-) = -2 and
the lower boundary contributes the deterministic term 2 phi(2); it belongs to
the main term, not to the E-driven pieces.

Only the two smooth integrals use quadrature. The integral of theta(x)phi'(x)
is evaluated exactly over prime gaps, where theta is constant, so the closure
residual total - main - boundary - bulkFluct witnesses quadrature error alone.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .primes import (PrimeTable, chebyshev_error, pairwise_sum, sum_k_pow,
                     sum_k_pow_truncated, weighted_prime_sum)
from .quadrature import integrate


@dataclass(frozen=True)
class WeightFunction:
    """phi_2m and its derivative; kmax truncates the inner k-sum (None: full)."""
    m: int
    ring: object
    kmax: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.kmax is not None and self.kmax < 1:
            raise ValueError("kmax must be >= 1 when given")

    def _ksum(self, power: int, y):
        if self.kmax is None:
            return sum_k_pow(power, y, self.ring)
        return sum_k_pow_truncated(power, y, self.kmax, self.ring)

    def value(self, x):
        ring = self.ring
        ctx = ring.ctx
        x = ring.lift(x)
        if x < 2:
            raise ValueError("phi is defined on x >= 2")
        lx = ctx.log(x)
        y = ctx.pow(x, ring.lift("-0.5"))
        s = self._ksum(2 * self.m - 1, y)
        val = ctx.mul(ctx.pow(lx, 2 * self.m - 1), s)
        return ctx.div(val, math.factorial(2 * self.m))

    def derivative(self, x):
        """d/dx of value, by product and chain rule.

        With y = x^(-1/2): dS_m(y)/dx = -S_{m+1}(y) / (2x), since
        y dS_m/dy = S_{m+1} and dy/dx = -y/(2x).
        """
        ring = self.ring
        ctx = ring.ctx
        x = ring.lift(x)
        if x < 2:
            raise ValueError("phi is defined on x >= 2")
        lx = ctx.log(x)
        y = ctx.pow(x, ring.lift("-0.5"))
        m2 = 2 * self.m
        s_low = self._ksum(m2 - 1, y)
        s_high = self._ksum(m2, y)
        left = ctx.mul(ctx.mul(ctx.pow(lx, m2 - 2), s_low), m2 - 1)
        right = ctx.div(ctx.mul(ctx.pow(lx, m2 - 1), s_high), 2)
        return ctx.div(ctx.sub(left, right),
                       ctx.mul(x, math.factorial(m2)))


def phi(m: int, x, table: PrimeTable, kmax: int | None = None):
    """phi_2m(x); the dtheta-weight reproducing a_2m as a Stieltjes integral."""
    return WeightFunction(m, table.ring, kmax).value(x)


def phi_derivative(m: int, x, table: PrimeTable, kmax: int | None = None):
    """Analytic phi_2m'(x)."""
    return WeightFunction(m, table.ring, kmax).derivative(x)


def coefficient_total(m: int, P: int, table: PrimeTable,
                      kmax: int | None = None):
    """a_2m(P) = (1/(2m)!) sum_{p<=P} (log p)^(2m) sum_k k^(2m-1) p^(-k/2)."""
    ring = table.ring
    s = weighted_prime_sum(2 * m, table, pmax=P, kmax=kmax)
    return ring.ctx.div(s, math.factorial(2 * m))


def stieltjes_identity_check(m: int, P: int, table: PrimeTable,
                             kmax: int | None = None):
    """sum_{p<=P} phi(p) log p minus a_2m(P); zero up to roundoff by design."""
    if P > table.pmax:
        raise ValueError(f"P {P} beyond table range {table.pmax}")
    ring = table.ring
    ctx = ring.ctx
    w = WeightFunction(m, ring, kmax)
    cut = bisect.bisect_right(table.primes, P)
    terms = [ctx.mul(w.value(table.primes[i]), table.logs[i])
             for i in range(cut)]
    lhs = pairwise_sum(ring, terms)
    return ctx.sub(lhs, coefficient_total(m, P, table, kmax))


@dataclass(frozen=True)
class FluctDecomposition:
    m: int
    P: int
    total: object
    main: object
    boundary: object
    bulk_fluct: object
    residual: object
    e_at_p: object


def decompose(m: int, P: int, table: PrimeTable, quad_tol,
              kmax: int | None = None) -> FluctDecomposition:
    """Split a_2m(P) into main + boundary + bulkFluct; report the residual.

    main       = integral of phi over [2, P] plus the lower boundary term
                 2 phi(2) from integration by parts (E(2^-) = -2);
    boundary   = phi(P) E(P);
    bulkFluct  = -integral of E phi' = -(sum over prime gaps of
                 theta * delta phi  -  integral of x phi'(x) dx),
                 the gap sum exact, the x phi' integral by quadrature.
    """
    if P < 2:
        raise ValueError("cutoff P must be at least 2")
    if P > table.pmax:
        raise ValueError(f"P {P} beyond table range {table.pmax}")
    ring = table.ring
    ctx = ring.ctx
    tol = ring.lift(quad_tol)
    if not tol > 0:
        raise ValueError("quadTol must be positive")
    w = WeightFunction(m, ring, kmax)
    total = coefficient_total(m, P, table, kmax)
    # absolute-plus-relative budget, split between the two quadratures
    budget = ctx.div(ctx.mul(tol, ctx.add(ring.one(), abs(total))), 2)

    int_phi, _ = integrate(w.value, 2, P, ring, budget)
    main = ctx.add(int_phi, ctx.mul(w.value(ring.from_int(2)), 2))

    e_at_p = chebyshev_error(P, table)
    boundary = ctx.mul(w.value(ring.from_int(P)), e_at_p)

    cut = bisect.bisect_right(table.primes, P)
    phis = [w.value(ring.from_int(p)) for p in table.primes[:cut]]
    phi_at_P = w.value(ring.from_int(P))
    gap_terms = []
    for i in range(cut):
        right = phis[i + 1] if i + 1 < cut else phi_at_P
        gap_terms.append(ctx.mul(table.theta_prefix[i],
                                 ctx.sub(right, phis[i])))
    gap_sum = pairwise_sum(ring, gap_terms)

    def x_phi_prime(x):
        return ctx.mul(x, w.derivative(x))

    int_x_phip, _ = integrate(x_phi_prime, 2, P, ring, budget)
    bulk_fluct = ctx.minus(ctx.sub(gap_sum, int_x_phip))

    residual = ctx.sub(ctx.sub(ctx.sub(total, main), boundary), bulk_fluct)
    return FluctDecomposition(m=m, P=P, total=total, main=main,
                              boundary=boundary, bulk_fluct=bulk_fluct,
                              residual=residual, e_at_p=e_at_p)
