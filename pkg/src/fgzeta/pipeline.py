"""Cutoff log-zeta expansion, evenization, and the cumulant hierarchy.

The chain is: expand log of the truncated Euler product around the center,
log zeta_P(1/2 + u) = sum c_n(P) u^n; drop the odd part (evenization), leaving
log xi_P with even coefficients a_0, a_2, ...; normalize by sigma = sqrt(a_2)
and subtract a_0, leaving u^2 + sum_{k>=2} kappa_2k u^(2k) with
kappa_2k = a_2k / a_2^k. The deviation of the kappa tail from zero measures
distance from the pure Gaussian u^2.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .primes import PrimeTable, pairwise_sum, weighted_prime_sums
from .series import TruncatedSeries


@dataclass(frozen=True)
class LogZetaExpansion:
    P: int
    series: TruncatedSeries


@dataclass(frozen=True)
class CompletedXi:
    P: int | None
    log_xi: TruncatedSeries
    odd_removed: TruncatedSeries

    @property
    def h_factor_log(self) -> TruncatedSeries:
        return -self.odd_removed


@dataclass(frozen=True)
class CumulantTable:
    P: int | None
    order: int                 # 2M, the highest extracted index
    a: dict
    sigma: object
    kappa: dict

    @property
    def M(self) -> int:
        return self.order // 2


def log_zeta_cutoff(P: int, order: int, table: PrimeTable) -> LogZetaExpansion:
    """Taylor coefficients of log zeta_P(1/2 + u) through u^order.

    c_0 = -sum_{p<=P} log(1 - p^(-1/2)) summed directly (well-conditioned);
    c_n = ((-1)^n / n!) * sum_p (log p)^n sum_k k^(n-1) p^(-k/2) for n >= 1.
    """
    if P < 2:
        raise ValueError("cutoff P must be at least 2")
    if order < 0:
        raise ValueError("order must be >= 0")
    if P > table.pmax:
        raise ValueError(f"P {P} beyond table range {table.pmax}")
    ring = table.ring
    ctx = ring.ctx
    cut = bisect.bisect_right(table.primes, P)
    c0_terms = [ctx.minus(ctx.log1p(ctx.minus(x))) for x in table.inv_sqrt[:cut]]
    coeffs = [pairwise_sum(ring, c0_terms)]
    if order >= 1:
        sums = weighted_prime_sums(range(1, order + 1), table, pmax=P)
        for n in range(1, order + 1):
            c = ctx.div(sums[n], math.factorial(n))
            if n % 2 == 1:
                c = ctx.minus(c)
            coeffs.append(c)
    return LogZetaExpansion(P, TruncatedSeries(ring, tuple(coeffs)))


def evenize(log_z, cutoff: int | None = None) -> CompletedXi:
    """Split a log-series into its even part (kept) and odd part (removed).

    Working at the log level makes the factorization Z = Xi * exp(O) exact:
    log Xi is the even part, O the odd part, and the parts reconstruct the
    input coefficient for coefficient.
    """
    if isinstance(log_z, LogZetaExpansion):
        cutoff = log_z.P if cutoff is None else cutoff
        log_z = log_z.series
    return CompletedXi(P=cutoff, log_xi=log_z.even_part(),
                       odd_removed=log_z.odd_part())


def cumulants(xi: CompletedXi, M: int) -> CumulantTable:
    """Extract a_0, a_2, .., a_2M, sigma = sqrt(a_2), kappa_2k = a_2k / a_2^k."""
    if M < 1:
        raise ValueError("M must be >= 1")
    s = xi.log_xi
    if s.order < 2 * M:
        raise ValueError(f"series order {s.order} below requested 2M = {2 * M}")
    ring = s.ring
    a = {0: s.coeffs[0]}
    for k in range(1, M + 1):
        a[2 * k] = s.coeffs[2 * k]
    a2 = a[2]
    if not a2 > 0:
        raise ValueError("a_2 must be positive; input is not a genuine cutoff series")
    sigma = ring.sqrt(a2)
    kappa = {}
    a2_pow = a2
    for k in range(2, M + 1):
        a2_pow = ring.mul(a2_pow, a2)
        kappa[2 * k] = ring.div(a[2 * k], a2_pow)
    return CumulantTable(P=xi.P, order=2 * M, a=a, sigma=sigma, kappa=kappa)


def normalize(xi: CompletedXi, table: CumulantTable) -> TruncatedSeries:
    """log of the normalized series: scale u by 1/sigma, subtract a_0.

    The result is u^2 + kappa_4 u^4 + ... with the u^0 coefficient exactly
    zero and the u^2 coefficient 1 up to final-rounding error.
    """
    if xi.P != table.P:
        raise ValueError("cumulant table does not belong to this series")
    ring = xi.log_xi.ring
    lam = ring.div(ring.one(), table.sigma)
    scaled = xi.log_xi.scale_variable(lam)
    coeffs = list(scaled.coeffs)
    coeffs[0] = ring.sub(coeffs[0], table.a[0])
    return TruncatedSeries(ring, tuple(coeffs))


def gaussian_deviation(normalized: TruncatedSeries, M: int):
    """max |kappa_2k| for 2 <= k <= M, read off the normalized log-series."""
    if M < 2:
        raise ValueError("M must be >= 2; no higher cumulants below kappa_4")
    if normalized.order < 2 * M:
        raise ValueError(f"series order {normalized.order} below 2M = {2 * M}")
    ring = normalized.ring
    worst = ring.zero()
    for k in range(2, M + 1):
        v = ring.abs(normalized.coeffs[2 * k])
        if v > worst:
            worst = v
    return worst
