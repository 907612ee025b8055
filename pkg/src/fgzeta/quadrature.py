"""Adaptive Gauss-Legendre quadrature at coefficient-ring precision.

Nodes and weights are Newton-refined from double-precision seeds up to the
ring's full mantissa width and cached per (rule size, precision). Adaptivity
is plain interval bisection with the two-halves-versus-whole difference as
the error estimate; when the recursion depth cap is hit the panel is accepted
and its estimate charged against the global budget, so the routine always
terminates and reports the achieved error honestly.
"""
from __future__ import annotations

import math

import gmpy2

from .rings import RealField


class QuadratureError(ArithmeticError):
    """Tolerance not met; .estimate carries the achieved error bound."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


_RULE_CACHE: dict = {}

RULE_POINTS = 15
MAX_DEPTH = 18


def legendre_rule(n: int, ring: RealField):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    key = (n, ring.precision_bits)
    if key in _RULE_CACHE:
        return _RULE_CACHE[key]
    ctx = ring.ctx
    bits = ring.precision_bits
    one = ring.one()
    # Newton steps double correct digits; seeds carry ~50 bits
    steps = max(6, int(math.log2(max(bits, 64) / 32)) + 3)
    nodes = []
    weights = []
    def legendre_pair(x):
        # P_n(x) and P_{n-1}(x) by the three-term recurrence
        pm1, p = one, x
        for j in range(2, n + 1):
            pm1, p = p, ctx.div(
                ctx.sub(ctx.mul(ctx.mul(x, p), 2 * j - 1),
                        ctx.mul(pm1, j - 1)), j)
        return p, pm1

    for k in range(1, n + 1):
        x = gmpy2.mpfr(math.cos(math.pi * (4 * k - 1) / (4 * n + 2)), bits)
        for _ in range(steps):
            p, pm1 = legendre_pair(x)
            dp = ctx.div(ctx.mul(ctx.sub(ctx.mul(x, p), pm1), n),
                         ctx.sub(ctx.square(x), one))
            x = ctx.sub(x, ctx.div(p, dp))
        p, pm1 = legendre_pair(x)
        dp = ctx.div(ctx.mul(ctx.sub(ctx.mul(x, p), pm1), n),
                     ctx.sub(ctx.square(x), one))
        w = ctx.div(2, ctx.mul(ctx.sub(one, ctx.square(x)), ctx.square(dp)))
        nodes.append(x)
        weights.append(w)
    _RULE_CACHE[key] = (tuple(nodes), tuple(weights))
    return _RULE_CACHE[key]


def _panel(f, a, b, ring, nodes, weights):
    ctx = ring.ctx
    half = ctx.div(ctx.sub(b, a), 2)
    mid = ctx.div(ctx.add(a, b), 2)
    acc = ring.zero()
    for x, w in zip(nodes, weights):
        acc = ctx.add(acc, ctx.mul(w, f(ctx.add(mid, ctx.mul(half, x)))))
    return ctx.mul(half, acc)


def integrate(f, a, b, ring: RealField, tol):
    """Integral of f over [a, b] with absolute error target tol.

    Returns (value, error_estimate). Raises QuadratureError when the summed
    panel estimates exceed tol after full refinement.
    """
    ctx = ring.ctx
    a = ring.lift(a)
    b = ring.lift(b)
    tol = ring.lift(tol)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    if a == b:
        return ring.zero(), ring.zero()
    nodes, weights = legendre_rule(RULE_POINTS, ring)
    whole = _panel(f, a, b, ring, nodes, weights)
    total = ring.zero()
    achieved = ring.zero()

    def recurse(lo, hi, prior, budget, depth):
        nonlocal total, achieved
        mid = ctx.div(ctx.add(lo, hi), 2)
        left = _panel(f, lo, mid, ring, nodes, weights)
        right = _panel(f, mid, hi, ring, nodes, weights)
        est = abs(ctx.sub(ctx.add(left, right), prior))
        if est <= budget or depth >= MAX_DEPTH:
            total = ctx.add(total, ctx.add(left, right))
            achieved = ctx.add(achieved, est)
            return
        half_budget = ctx.div(budget, 2)
        recurse(lo, mid, left, half_budget, depth + 1)
        recurse(mid, hi, right, half_budget, depth + 1)

    recurse(a, b, whole, tol, 0)
    if achieved > tol:
        raise QuadratureError(
            f"quadrature tolerance {tol} not met; achieved error estimate "
            f"{achieved}", achieved)
    return total, achieved
