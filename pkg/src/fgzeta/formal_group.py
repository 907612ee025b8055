"""One-dimensional commutative formal group laws and their logarithms.

A law is a bivariate series F(X, Y) presented as an evaluator procedure: it
receives two series (typically nested series standing for the formal variables)
and combines them with ring operations. The two laws of interest are the
multiplicative law X + Y + XY, which encodes how Euler-factor coordinates
combine under multiplication of the factors, and the additive law X + Y.

log_from_law recovers the unique strict logarithm l with l(0) = 0, l'(0) = 1
from the invariant differential: omega = dX / (dF/dY)(X, 0), l = integral of
omega. Over the multiplicative law this produces the Mercator series
log(1 + X), the bridge between multiplicative and additive coordinates.

Multivariate identities (axioms, additivity of the logarithm, strict
isomorphism) are checked by nesting: a series in Y whose coefficients are
series in X. Comparisons are restricted to total degree <= order, which is the
region the truncated computation determines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .rings import ConstantTermError, RationalField, RealField
from .series import SeriesRing, TruncatedSeries


class IsoPreconditionError(ValueError):
    """The candidate isomorphism is not strict: f(0) != 0 or f'(0) != 1."""


@dataclass(frozen=True)
class FormalGroupLaw:
    name: str
    evaluator: Callable


def multiplicative_law() -> FormalGroupLaw:
    return FormalGroupLaw("multiplicative", lambda x, y: x + y + x * y)


def additive_law() -> FormalGroupLaw:
    return FormalGroupLaw("additive", lambda x, y: x + y)


def nested_variables(base, order: int, nvars: int) -> list:
    """Independent formal variables as elements of one nested series ring.

    Variable i is the series variable at nesting depth i + 1, embedded as a
    constant at every outer level; all returned values combine freely. The
    innermost variable comes first.
    """
    if nvars < 1:
        raise ValueError("need at least one variable")
    rings = [base]
    for _ in range(nvars):
        rings.append(SeriesRing(rings[-1], order))
    out = []
    for i in range(nvars):
        v = TruncatedSeries.variable(rings[i], order)
        for j in range(i + 1, nvars):
            v = TruncatedSeries.constant(rings[j], v, order)
        out.append(v)
    return out


def nested_zero(base, order: int, nvars: int):
    ring = base
    for _ in range(nvars - 1):
        ring = SeriesRing(ring, order)
    return TruncatedSeries.zeros(ring, order)


def iter_coefficients(s: TruncatedSeries, depth: int):
    """Yield (multi_index, scalar) pairs; index runs outermost variable first."""
    if depth <= 1:
        for i, c in enumerate(s.coeffs):
            yield (i,), c
    else:
        for i, c in enumerate(s.coeffs):
            for idx, v in iter_coefficients(c, depth - 1):
                yield (i,) + idx, v


def _scalar_ring(ring):
    while isinstance(ring, SeriesRing):
        ring = ring.base
    return ring


def max_residual(s: TruncatedSeries, depth: int, total_degree: int):
    """Largest |coefficient| with total degree <= the bound, plus its index.

    Returns (max_abs, first_nonzero_index or None). Coefficients the
    truncation does not determine (total degree beyond the bound) are ignored.
    """
    base = _scalar_ring(s.ring)
    worst = base.zero()
    worst_idx = None
    first_idx = None
    for idx, c in iter_coefficients(s, depth):
        if sum(idx) > total_degree:
            continue
        if base.is_zero(c):
            continue
        if first_idx is None:
            first_idx = idx
        a = base.abs(c)
        if worst_idx is None or a > worst:
            worst = a
            worst_idx = idx
    return worst, first_idx


def apply_series(f: TruncatedSeries, w: TruncatedSeries, depth: int) -> TruncatedSeries:
    """f(w) for univariate f and a nested argument w with no constant monomial.

    Correct for all monomials of total degree <= the per-level order; beyond
    that the per-variable truncation drops terms, so callers must compare with
    a total-degree cutoff.
    """
    corner = w
    for _ in range(depth):
        corner = corner.coeffs[0]
    base = _scalar_ring(w.ring)
    if not base.is_zero(corner):
        raise ConstantTermError(
            "series substitution requires a vanishing constant monomial")
    ring = w.ring
    order = w.order
    acc = TruncatedSeries.constant(ring, ring.lift(f.coeffs[f.order]), order)
    for k in range(f.order - 1, -1, -1):
        acc = acc * w + TruncatedSeries.constant(ring, ring.lift(f.coeffs[k]), order)
    # degrees above f.order would need powers w^k, k > f.order, not summed here
    return acc.truncate(min(f.order, order))


@dataclass(frozen=True)
class AxiomReport:
    identity_residual: object
    commutativity_residual: object
    associativity_residual: object
    order: int

    def passed(self, tolerance=None) -> bool:
        residuals = (self.identity_residual, self.commutativity_residual,
                     self.associativity_residual)
        if tolerance is None:
            return all(r == 0 for r in residuals)
        return all(r <= tolerance for r in residuals)


def check_law_axioms(law: FormalGroupLaw, ring, order: int) -> AxiomReport:
    """Residuals of F(X,0)=X, F(0,Y)=Y, F(X,Y)=F(Y,X), and associativity."""
    F = law.evaluator
    X, Y = nested_variables(ring, order, 2)
    zero2 = nested_zero(ring, order, 2)
    rid_l, _ = max_residual(F(X, zero2) - X, 2, order)
    rid_r, _ = max_residual(F(zero2, Y) - Y, 2, order)
    rid = max(rid_l, rid_r)
    rcomm, _ = max_residual(F(X, Y) - F(Y, X), 2, order)
    X3, Y3, Z3 = nested_variables(ring, order, 3)
    rassoc, _ = max_residual(F(X3, F(Y3, Z3)) - F(F(X3, Y3), Z3), 3, order)
    return AxiomReport(rid, rcomm, rassoc, order)


def log_from_law(law: FormalGroupLaw, order: int, ring=None) -> TruncatedSeries:
    """The strict logarithm of a law, from its invariant differential.

    Exact rational coefficients only: the construction divides by n and
    inverts a unit series, and its correctness is certified coefficient by
    coefficient, which only exact arithmetic supports.
    """
    if ring is None:
        ring = RationalField()
    if not getattr(ring, "exact", False):
        raise ValueError("the formal-group logarithm requires exact coefficients")
    if order < 1:
        raise ValueError("order must be >= 1")
    report = check_law_axioms(law, ring, order)
    if not report.passed():
        raise ValueError(
            f"law axioms violated: identity {report.identity_residual}, "
            f"commutativity {report.commutativity_residual}, "
            f"associativity {report.associativity_residual}")
    # expand F(X, Y) to first order in Y; coefficient of Y^1 is dF/dY(X, 0)
    inner = SeriesRing(ring, order)
    x_inner = TruncatedSeries.variable(ring, order)
    X = TruncatedSeries.constant(inner, x_inner, 1)
    Y = TruncatedSeries.variable(inner, 1)
    expansion = law.evaluator(X, Y)
    partial = expansion.coeffs[1]
    if not ring.eq(partial.coeffs[0], ring.one()):
        raise ValueError("dF/dY(X, 0) must have constant term 1")
    return partial.reciprocal().integrate().truncate(order)


def fgm_exp(t: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative-law exponential exp(t) - 1; inverse of log(1 + X)."""
    ring = t.ring
    if not ring.is_zero(t.coeffs[0]):
        raise ConstantTermError("the formal exponential needs a vanishing constant term")
    one = TruncatedSeries.constant(ring, ring.one(), t.order)
    return t.exp() - one


def mercator_series(order: int, ring=None) -> TruncatedSeries:
    """log(1 + u) truncated: u - u^2/2 + u^3/3 - ..."""
    if ring is None:
        ring = RationalField()
    coeffs = [ring.zero()]
    for n in range(1, order + 1):
        coeffs.append(ring.div_int(ring.from_int((-1) ** (n + 1)), n))
    return TruncatedSeries(ring, tuple(coeffs))


def additivity_residual(ell: TruncatedSeries, law: FormalGroupLaw,
                        order: int | None = None):
    """max residual of l(F(X,Y)) - l(X) - l(Y) to total degree <= order."""
    ring = ell.ring
    if order is None:
        order = ell.order
    X, Y = nested_variables(ring, order, 2)
    ell = ell.truncate(order)
    lhs = apply_series(ell, law.evaluator(X, Y), 2)
    rhs = apply_series(ell, X, 2) + apply_series(ell, Y, 2)
    resid, _ = max_residual(lhs - rhs, 2, order)
    return resid


def check_strict_iso(f: TruncatedSeries, source: FormalGroupLaw,
                     target: FormalGroupLaw, order: int | None = None):
    """Does f carry the source law to the target law, f(F(X,Y)) = G(f(X), f(Y))?

    Requires f strict: f(0) = 0 and f'(0) = 1. Returns (ok, max_residual);
    in exact mode ok means the residual is exactly zero, otherwise it is
    compared against the ring tolerance.
    """
    ring = f.ring
    if order is None:
        order = f.order
    if f.order < 1 or not ring.is_zero(f.coeffs[0]):
        raise IsoPreconditionError("candidate must vanish at 0")
    if not ring.eq(f.coeffs[1], ring.one()):
        raise IsoPreconditionError("candidate must have derivative 1 at 0")
    f = f.truncate(order)
    X, Y = nested_variables(ring, order, 2)
    lhs = apply_series(f, source.evaluator(X, Y), 2)
    rhs = target.evaluator(apply_series(f, X, 2), apply_series(f, Y, 2))
    resid, _ = max_residual(lhs - rhs, 2, order)
    if getattr(ring, "exact", False):
        return resid == 0, resid
    return resid <= ring.tolerance(), resid


@dataclass(frozen=True)
class EulerFactorElement:
    """The coordinate X_p(1/2 + u) = -p^(-(1/2+u)) of one Euler factor.

    1 + coord has constant term 1 - p^(-1/2) in (0, 1); the coordinates of
    distinct primes combine under the multiplicative law, and the formal
    logarithm carries their combination to a plain sum.
    """
    p: int
    coord: TruncatedSeries


def _require_prime(p: int):
    from .primes import is_prime_trial
    if not is_prime_trial(p):
        raise ValueError(f"{p} is not prime")


def euler_factor_element(p: int, order: int, ring: RealField | None = None
                         ) -> EulerFactorElement:
    """coord coefficients: -p^(-1/2) (-log p)^n / n!."""
    _require_prime(p)
    if ring is None:
        ring = RealField()
    ctx = ring.ctx
    root = ctx.pow(ring.from_int(p), ring.lift("-0.5"))
    neg_log = ctx.minus(ctx.log(ring.from_int(p)))
    coeffs = []
    term = ctx.minus(root)
    coeffs.append(term)
    for n in range(1, order + 1):
        term = ctx.div(ctx.mul(term, neg_log), n)
        coeffs.append(term)
    return EulerFactorElement(p, TruncatedSeries(ring, tuple(coeffs)))


def default_kmax(p: int, precision_bits: int) -> int:
    """Smallest k with p^(-k/2) below one ulp at the working precision."""
    return int(2 * precision_bits * math.log(2) / math.log(p)) + 1


def euler_factor_log_series(p: int, order: int, ring: RealField | None = None,
                            kmax: int | None = None) -> TruncatedSeries:
    """Expansion in u of sum_{k=1..kmax} (1/k) p^(-k(1/2+u)).

    Coefficient of u^n is ((-1)^n / n!) (log p)^n sum_{k<=kmax} k^(n-1) p^(-k/2);
    at u = 0 this is the truncated -log(1 - p^(-1/2)).
    """
    _require_prime(p)
    if order < 0:
        raise ValueError("order must be >= 0")
    if ring is None:
        ring = RealField()
    if kmax is None:
        kmax = default_kmax(p, ring.precision_bits)
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    ctx = ring.ctx
    root = ctx.pow(ring.from_int(p), ring.lift("-0.5"))
    # k-sums S_n = sum_{k<=kmax} k^(n-1) p^(-k/2), n = 0..order
    sums = [ring.zero() for _ in range(order + 1)]
    xk = ring.one()
    for k in range(1, kmax + 1):
        xk = ctx.mul(xk, root)
        kw = ctx.div(xk, k)                   # k^(-1) x^k for n = 0
        sums[0] = ctx.add(sums[0], kw)
        kpow = xk
        for n in range(1, order + 1):
            sums[n] = ctx.add(sums[n], kpow)  # k^(n-1) x^k
            kpow = ctx.mul(kpow, k)
    lp = ctx.log(ring.from_int(p))
    coeffs = [sums[0]]
    factor = ring.one()
    for n in range(1, order + 1):
        factor = ctx.div(ctx.mul(factor, ctx.minus(lp)), n)
        coeffs.append(ctx.mul(factor, sums[n]))
    return TruncatedSeries(ring, tuple(coeffs))
