"""Cutoff log-zeta expansion, evenization, and the cumulant hierarchy.

The decimal strings pinned here were produced by an independent brute-force
evaluation (direct k-loops to depth 3000 at 512-bit precision) and agree
with the library values to better than 75 significant digits.
"""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgzeta import (CompletedXi, RationalField, RealField, TruncatedSeries,
                    cumulants, evenize, gaussian_deviation, log_zeta_cutoff,
                    normalize, sieve_primes, sum_k_pow, pairwise_sum)

Q = RationalField()
R256 = RealField(256)

# P = 2 expansion of the single-factor log, coefficients of u^0 .. u^4
ORACLE_P2 = {
    0: "1.22794717729951567994122538570888059306591039544176"
       "30378136356134000739952068663",
    1: "-1.6734053240284925011311338450934099493669608334593"
       "099751629262565586847204838845",
    2: "1.98010078038562763046420633318771973452680960082715"
       "25268498185477655221183633147",
    3: "-2.6665078830564697986623625702905083039218168682701"
       "796744421005288231268494711886",
    4: "4.00007788280027633176608739038235551601453050939091"
       "45756394763445636461765635872",
}
ORACLE_SIGMA_P2 = ("1.4071605382420399691472953267692104867905926646958"
                   "614878809329843172949248146801")
ORACLE_KAPPA4_P2 = ("1.0202200572599404288670888477190911863090846355109"
                    "036849608366011643497862821821")

TIGHT = R256.lift("1e-70")


@pytest.fixture(scope="module")
def table1000():
    return sieve_primes(1000, R256)


@pytest.fixture(scope="module")
def exp_p2(table1000):
    return log_zeta_cutoff(2, 8, table1000)


def close(a, b, tol=TIGHT):
    return abs(R256.sub(a, R256.parse(b) if isinstance(b, str) else b)) < tol


def test_p2_coefficients_match_oracle(exp_p2):
    for n, digits in ORACLE_P2.items():
        assert close(exp_p2.series.coeffs[n], digits), f"c{n} drifted"


def test_c0_equals_direct_klog_sum(table1000):
    """c_0 two ways: -log(1 - p^(-1/2)) directly, and sum_k p^(-k/2)/k."""
    ctx = R256.ctx
    exp = log_zeta_cutoff(100, 2, table1000)
    terms = []
    for p, x in zip(table1000.primes, table1000.inv_sqrt):
        if p > 100:
            break
        acc = R256.zero()
        xk = R256.one()
        for k in range(1, 700):
            xk = ctx.mul(xk, x)
            acc = ctx.add(acc, ctx.div(xk, k))
        terms.append(acc)
    want = pairwise_sum(R256, terms)
    assert abs(R256.sub(exp.series.coeffs[0], want)) < abs(want) * R256.lift("1e-65")


def test_signs_alternate_and_evens_positive(table1000):
    exp = log_zeta_cutoff(100, 8, table1000)
    for n, c in enumerate(exp.series.coeffs):
        assert (float(c) > 0) == (n % 2 == 0)


def test_cutoff_monotone_in_p(table1000):
    # every coefficient magnitude grows with the cutoff
    small = log_zeta_cutoff(10, 6, table1000)
    large = log_zeta_cutoff(1000, 6, table1000)
    for a, b in zip(small.series.coeffs, large.series.coeffs):
        assert abs(float(a)) < abs(float(b))


def test_cutoff_validation(table1000):
    with pytest.raises(ValueError):
        log_zeta_cutoff(1, 4, table1000)
    with pytest.raises(ValueError):
        log_zeta_cutoff(5000, 4, table1000)
    with pytest.raises(ValueError):
        log_zeta_cutoff(10, -1, table1000)


# ------------------------------------------------------------ evenize

def test_evenize_splits_exactly(exp_p2):
    xi = evenize(exp_p2)
    assert xi.P == 2
    s = exp_p2.series
    back = xi.log_xi + xi.odd_removed
    assert all(a == b for a, b in zip(back.coeffs, s.coeffs))
    assert all(xi.log_xi.coeffs[i] == 0 for i in range(1, s.order + 1, 2))


def test_evenize_mercator_example():
    """log(1+u) evenizes to -(1/2)log(1-u^2): even coefficients -1/(2k)."""
    order = 10
    one_plus = TruncatedSeries.constant(Q, Fraction(1), order) \
        + TruncatedSeries.variable(Q, order)
    xi = evenize(one_plus.log())
    for k in range(1, order // 2 + 1):
        assert xi.log_xi.coeffs[2 * k] == Fraction(-1, 2 * k)
    assert xi.log_xi.coeffs[0] == 0


def test_evenize_idempotent(exp_p2):
    once = evenize(exp_p2)
    twice = evenize(once.log_xi, cutoff=once.P)
    assert twice.log_xi.coeffs == once.log_xi.coeffs
    assert twice.odd_removed.is_zero()


def test_h_factor_log_is_negated_odd_part(exp_p2):
    xi = evenize(exp_p2)
    assert (xi.h_factor_log + xi.odd_removed).is_zero()


def test_completed_xi_is_even_function(table1000):
    """xi(u) = xi(-u) numerically for small real u."""
    xi = evenize(log_zeta_cutoff(50, 12, table1000))
    for ustr in ("0.1", "0.025", "-0.07"):
        u = R256.lift(ustr)
        left = xi.log_xi.evaluate(u)
        right = xi.log_xi.evaluate(R256.neg(u))
        assert left == right            # even powers only, identical ops


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=8),
                min_size=1, max_size=9))
def test_evenize_product_form(tail):
    """Z = Xi * exp(O) coefficient for coefficient, exactly."""
    L = TruncatedSeries.build(Q, [Fraction(0)] + tail)
    xi = evenize(L)
    direct = L.exp()
    product = xi.log_xi.exp() * xi.odd_removed.exp()
    assert (direct - product).is_zero()


# ----------------------------------------------------------- cumulants

def test_cumulant_table_p2(exp_p2):
    ct = cumulants(evenize(exp_p2), 2)
    assert ct.P == 2 and ct.order == 4 and ct.M == 2
    assert close(ct.a[0], ORACLE_P2[0])
    assert close(ct.a[2], ORACLE_P2[2])
    assert close(ct.a[4], ORACLE_P2[4])
    assert close(ct.sigma, ORACLE_SIGMA_P2)
    assert close(ct.kappa[4], ORACLE_KAPPA4_P2)
    # definitional identities on the reported values
    assert close(R256.mul(ct.sigma, ct.sigma), ct.a[2])
    assert close(ct.kappa[4], R256.div(ct.a[4], R256.mul(ct.a[2], ct.a[2])))


def test_cumulants_reject_thin_series(exp_p2):
    xi = evenize(exp_p2)
    with pytest.raises(ValueError):
        cumulants(xi, 10)       # order 8 only supports M <= 4
    with pytest.raises(ValueError):
        cumulants(xi, 0)


def test_cumulants_reject_nonpositive_a2():
    bad = CompletedXi(P=None, log_xi=TruncatedSeries.build(
        R256, [1, 0, "-3", 0, 2], order=4),
        odd_removed=TruncatedSeries.zeros(R256, 4))
    with pytest.raises(ValueError):
        cumulants(bad, 2)


def test_kappa_invariant_under_variable_scaling(exp_p2):
    """a_2k -> lambda^(2k) a_2k leaves every kappa unchanged."""
    xi = evenize(exp_p2)
    ct = cumulants(xi, 4)
    lam = R256.lift("0.37")
    scaled = CompletedXi(P=2, log_xi=xi.log_xi.scale_variable(lam),
                         odd_removed=xi.odd_removed)
    ct2 = cumulants(scaled, 4)
    for k in (4, 6, 8):
        rel = abs(R256.sub(ct.kappa[k], ct2.kappa[k]))
        assert rel <= abs(R256.lift(ct.kappa[k])) * R256.lift("1e-70")


def test_closed_form_a2_a4_small_p(table1000):
    """a_2 and a_4 against hand-assembled Eulerian sums at P = 10."""
    ctx = R256.ctx
    ct = cumulants(evenize(log_zeta_cutoff(10, 4, table1000)), 2)
    for n, a in ((2, ct.a[2]), (4, ct.a[4])):
        terms = []
        for p, x, lp in zip(table1000.primes, table1000.inv_sqrt,
                            table1000.logs):
            if p > 10:
                break
            terms.append(ctx.mul(ctx.pow(lp, n), sum_k_pow(n - 1, x, R256)))
        want = ctx.div(pairwise_sum(R256, terms), math.factorial(n))
        assert abs(R256.sub(a, want)) <= abs(want) * R256.lift("1e-72")


# --------------------------------------------------------- normalize

def test_normalize_shape(exp_p2):
    xi = evenize(exp_p2)
    ct = cumulants(xi, 4)
    norm = normalize(xi, ct)
    assert norm.coeffs[0] == 0                           # exact by design
    assert abs(R256.sub(norm.coeffs[2], R256.one())) < R256.lift("1e-75")
    rel4 = abs(R256.sub(norm.coeffs[4], ct.kappa[4]))
    assert rel4 <= abs(R256.lift(ct.kappa[4])) * R256.lift("1e-70")


def test_normalize_checks_provenance(exp_p2, table1000):
    xi = evenize(exp_p2)
    other = cumulants(evenize(log_zeta_cutoff(3, 8, table1000)), 2)
    with pytest.raises(ValueError):
        normalize(xi, other)


def test_gaussian_deviation_reads_kappa_tail(table1000):
    xi = evenize(log_zeta_cutoff(100, 12, table1000))
    ct = cumulants(xi, 6)
    norm = normalize(xi, ct)
    dev = gaussian_deviation(norm, 6)
    worst = max(abs(R256.lift(ct.kappa[2 * k])) for k in range(2, 7))
    assert abs(R256.sub(dev, worst)) <= worst * R256.lift("1e-60")
    with pytest.raises(ValueError):
        gaussian_deviation(norm, 1)


def test_deviation_decreases_with_cutoff(table1000):
    devs = []
    for P in (10, 100, 1000):
        xi = evenize(log_zeta_cutoff(P, 12, table1000))
        ct = cumulants(xi, 6)
        devs.append(float(gaussian_deviation(normalize(xi, ct), 6)))
    assert devs[0] > devs[1] > devs[2]
