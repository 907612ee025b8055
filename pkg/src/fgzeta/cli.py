"""Command-line surface: pipelines, grid scans, fluctuation decompositions,
formal-group property checks, evenization of serialized series.

Every command is deterministic given its flags: numeric output goes through
the ring's fixed-width decimal formatting, grids and reduction orders are
fixed, and the only randomness (fg-check probes) is seeded. Exit codes:
0 success, 1 property or tolerance failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .formal_group import (additive_law, additivity_residual, apply_series,
                           check_law_axioms, check_strict_iso, fgm_exp,
                           log_from_law, max_residual, mercator_series,
                           multiplicative_law)
from .pipeline import cumulants, evenize, log_zeta_cutoff, normalize
from .primes import sieve_primes
from .quadrature import QuadratureError
from .rings import DEFAULT_PRECISION_BITS, RationalField, RealField
from .series import TruncatedSeries, from_json_dict, to_json_dict
from . import fluctuation

MAX_ORDER = 64
MAX_FG_ORDER = 32


class UsageError(Exception):
    """Bad flag values; mapped to exit code 2."""


@dataclass(frozen=True)
class ScanConfig:
    pmin: int
    pmax: int
    grid: tuple
    order: int
    precision_bits: int
    output_path: str | None
    format: str


@dataclass(frozen=True)
class SlopeFit:
    label: str
    points: tuple
    slope: float
    r2: float


def slope_fit(label: str, points) -> SlopeFit:
    """Least-squares slope of y against x with r^2; needs >= 4 points."""
    pts = tuple(points)
    if len(pts) < 4:
        raise ValueError("slope fit needs at least 4 points")
    n = len(pts)
    mx = sum(x for x, _ in pts) / n
    my = sum(y for _, y in pts) / n
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in pts)
    ss_tot = sum((y - my) ** 2 for _, y in pts)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return SlopeFit(label, pts, slope, r2)


def _resolve_precision(args) -> int:
    bits = getattr(args, "precision", None)
    if bits is None:
        env = os.environ.get("FGZETA_PRECISION")
        if env is not None:
            try:
                bits = int(env)
            except ValueError:
                raise UsageError(f"FGZETA_PRECISION is not an integer: {env!r}")
    if bits is None:
        bits = DEFAULT_PRECISION_BITS
    if not 8 <= bits <= 65536:
        raise UsageError(f"precision {bits} outside [8, 65536]")
    return bits


def _check_order(order: int, maximum: int = MAX_ORDER) -> int:
    if order % 2 != 0 or not 2 <= order <= maximum:
        raise UsageError(f"--order must be even and within [2, {maximum}]")
    return order


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _cumulant_fields(P: int, order: int, bits: int):
    ring = RealField(bits)
    table = sieve_primes(P, ring)
    expansion = log_zeta_cutoff(P, order, table)
    xi = evenize(expansion)
    ct = cumulants(xi, order // 2)
    fmt = ring.format
    a_out = {str(k): fmt(v) for k, v in sorted(ct.a.items())}
    kappa_out = {"2": fmt(ring.div(ct.a[2], ct.a[2]))}
    kappa_out.update({str(k): fmt(v) for k, v in sorted(ct.kappa.items())})
    return ct, a_out, kappa_out, fmt


def cmd_cumulants(args) -> int:
    if args.pmax < 2:
        raise UsageError("cutoff --pmax must be at least 2")
    order = _check_order(args.order)
    bits = _resolve_precision(args)
    ct, a_out, kappa_out, fmt = _cumulant_fields(args.pmax, order, bits)
    if args.format == "json":
        payload = {"P": ct.P, "order": ct.order, "a": a_out,
                   "sigma": fmt(ct.sigma), "kappa": kappa_out}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        header = (["P", "order"] + [f"a{k}" for k in sorted(ct.a)] + ["sigma"]
                  + [f"kappa{k}" for k in sorted(int(k) for k in kappa_out)])
        row = ([str(ct.P), str(ct.order)] + [a_out[str(k)] for k in sorted(ct.a)]
               + [fmt(ct.sigma)]
               + [kappa_out[str(k)] for k in sorted(int(k) for k in kappa_out)])
        text = ",".join(header) + "\n" + ",".join(row) + "\n"
    _emit(text, args.out)
    return 0


def _parse_grid(spec: str | None, pmin: int, pmax: int) -> tuple:
    if pmin < 2:
        raise UsageError("--pmin must be at least 2")
    if pmax < pmin:
        raise UsageError("--pmax must be >= --pmin")
    if spec is None:
        # powers of 2 inside [pmin, pmax]
        points = []
        p = 1
        while p <= pmax:
            if p >= pmin:
                points.append(p)
            p *= 2
    else:
        if not spec.startswith("geometric:"):
            raise UsageError(f"unsupported grid kind {spec!r}")
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad grid count in {spec!r}")
        if n < 2:
            raise UsageError("geometric grid needs at least 2 points")
        ratio = (pmax / pmin) ** (1.0 / (n - 1))
        points = [round(pmin * ratio ** i) for i in range(n)]
    out = []
    for p in points:
        if not out or p > out[-1]:
            out.append(p)
    if not out:
        raise UsageError("grid is empty after deduplication")
    return tuple(out)


def cmd_scan(args) -> int:
    order = _check_order(args.order)
    bits = _resolve_precision(args)
    grid = _parse_grid(args.grid, args.pmin, args.pmax)
    config = ScanConfig(pmin=args.pmin, pmax=args.pmax, grid=grid, order=order,
                        precision_bits=bits, output_path=args.out,
                        format=args.format)
    ring = RealField(config.precision_bits)
    table = sieve_primes(config.grid[-1], ring)
    fmt = ring.format
    kappa_cols = list(range(4, config.order + 1, 2))
    rows = []
    for P in config.grid:
        expansion = log_zeta_cutoff(P, config.order, table)
        xi = evenize(expansion)
        ct = cumulants(xi, config.order // 2)
        rows.append((P, ct))
    fits = []
    if len(config.grid) >= 4:
        a2_pts = [(math.log(P), math.log(float(ct.a[2]))) for P, ct in rows]
        fits.append(slope_fit("log_a2_vs_log_P", a2_pts))
        if config.order >= 4:
            k4_pts = [(math.log(P), math.log(float(ct.kappa[4])))
                      for P, ct in rows]
            fits.append(slope_fit("log_kappa4_vs_log_P", k4_pts))
    if config.format == "json":
        payload = {
            "rows": [dict(P=P, a2=fmt(ct.a[2]),
                          a4=(fmt(ct.a[4]) if 4 in ct.a else None),
                          sigma=fmt(ct.sigma),
                          kappa={str(k): fmt(ct.kappa[k]) for k in kappa_cols})
                     for P, ct in rows],
            "fits": [dict(label=f.label, slope=f.slope, r2=f.r2,
                          points=len(f.points)) for f in fits],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        header = ["P", "a2", "a4", "sigma"] + [f"kappa{k}" for k in kappa_cols]
        lines = [",".join(header)]
        for P, ct in rows:
            lines.append(",".join(
                [str(P), fmt(ct.a[2]), fmt(ct.a[4]) if 4 in ct.a else "",
                 fmt(ct.sigma)] + [fmt(ct.kappa[k]) for k in kappa_cols]))
        for f in fits:
            lines.append(f"# fit,{f.label},slope={f.slope!r},r2={f.r2!r},"
                         f"points={len(f.points)}")
        if len(config.grid) < 4:
            lines.append("# fit skipped: fewer than 4 grid points")
        text = "\n".join(lines) + "\n"
    _emit(text, config.output_path)
    return 0


def cmd_fluct(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be at least 1")
    if args.pmax < 2:
        raise UsageError("cutoff --pmax must be at least 2")
    bits = _resolve_precision(args)
    ring = RealField(bits)
    try:
        tol = ring.parse(args.quad_tol)
    except ValueError:
        raise UsageError(f"bad --quad-tol value {args.quad_tol!r}")
    if not tol > 0:
        raise UsageError("--quad-tol must be positive")
    table = sieve_primes(args.pmax, ring)
    kmax = 1 if args.k1_only else None
    dec = fluctuation.decompose(args.m, args.pmax, table, tol, kmax=kmax)
    fmt = ring.format
    header = "m,P,total,main,boundary,bulkFluct,residual,E_at_P"
    row = ",".join([str(dec.m), str(dec.P), fmt(dec.total), fmt(dec.main),
                    fmt(dec.boundary), fmt(dec.bulk_fluct), fmt(dec.residual),
                    fmt(dec.e_at_p)])
    _emit(header + "\n" + row + "\n", args.out)
    ctx = ring.ctx
    budget = ctx.mul(ctx.mul(tol, 10), abs(dec.total))
    if abs(dec.residual) > budget:
        print(f"closure residual {fmt(dec.residual)} exceeds budget "
              f"{fmt(budget)}", file=sys.stderr)
        return 1
    return 0


def _fg_properties(order: int, trials: int, seed: int):
    """Yield (name, ok, detail) for every formal-group property probe."""
    ring = RationalField()
    mult = multiplicative_law()
    add = additive_law()

    rep = check_law_axioms(mult, ring, order)
    yield ("multiplicative-law axioms", rep.passed(),
           f"residuals {rep.identity_residual}, {rep.commutativity_residual}, "
           f"{rep.associativity_residual}")
    rep = check_law_axioms(add, ring, order)
    yield ("additive-law axioms", rep.passed(),
           f"residuals {rep.identity_residual}, {rep.commutativity_residual}, "
           f"{rep.associativity_residual}")

    ell = log_from_law(mult, order, ring)
    merc = mercator_series(order, ring)
    diff, idx = max_residual(ell - merc, 1, order)
    yield ("log(multiplicative) = Mercator series", diff == 0,
           f"first failing coefficient {idx}" if diff != 0 else "exact")

    ell_add = log_from_law(add, order, ring)
    u = TruncatedSeries.variable(ring, order)
    diff, idx = max_residual(ell_add - u, 1, order)
    yield ("log(additive) = u", diff == 0,
           f"first failing coefficient {idx}" if diff != 0 else "exact")

    resid = additivity_residual(ell, mult, order)
    yield ("logarithm additivity on the multiplicative law", resid == 0,
           f"max residual {resid}")

    diff, idx = max_residual(apply_series(ell, fgm_exp(u), 1) - u, 1, order)
    ok1 = diff == 0
    diff2, idx2 = max_residual(fgm_exp(ell) - u, 1, order)
    yield ("log/exp inversion", ok1 and diff2 == 0,
           f"first failing coefficient {idx if not ok1 else idx2}")

    bumped = ell + TruncatedSeries.build(ring, [0, 0, 1], order=order)
    resid = additivity_residual(bumped, mult, order)
    yield ("perturbed normalization breaks additivity", resid != 0,
           f"perturbation u^2 left residual {resid}")

    ok, resid = check_strict_iso(ell, mult, add, order)
    yield ("log is a strict isomorphism to the additive law", ok,
           f"residual {resid}")
    ok, resid = check_strict_iso(u, add, add, order)
    yield ("identity is a strict self-isomorphism", ok, f"residual {resid}")

    rng = Random(seed)
    for t in range(trials):
        while True:
            coeffs = [Fraction(0), Fraction(1)]
            for _ in range(2, order + 1):
                coeffs.append(Fraction(rng.randint(-6, 6), rng.randint(1, 6)))
            f = TruncatedSeries.build(ring, coeffs, order=order)
            if (f - ell).is_zero():
                continue
            break
        ok, resid = check_strict_iso(f, mult, add, order)
        yield (f"random non-logarithm probe {t} is rejected", not ok,
               f"probe wrongly accepted with residual {resid}" if ok
               else f"residual {resid}")


def cmd_fg_check(args) -> int:
    order = _check_order(args.order, MAX_FG_ORDER)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    ring = RationalField()
    ell = log_from_law(multiplicative_law(), order, ring)
    coeff_line = ", ".join(str(c) for c in ell.coeffs[1:])
    lines = [f"log(multiplicative) coefficients: {coeff_line}"]
    failures = 0
    for name, ok, detail in _fg_properties(order, args.trials, args.seed):
        if ok:
            lines.append(f"PASS {name}")
        else:
            failures += 1
            lines.append(f"FAIL {name}: {detail}")
    lines.append(f"{failures} failures" if failures
                 else "all properties hold")
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if failures else 0


def cmd_evenize(args) -> int:
    bits = _resolve_precision(args)
    try:
        with open(args.infile) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.infile}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not JSON: {exc}")
    try:
        series = from_json_dict(obj, precision_bits=bits)
    except ValueError as exc:
        raise UsageError(str(exc))
    xi = evenize(series)
    payload = {"xiLog": to_json_dict(xi.log_xi),
               "oddRemoved": to_json_dict(xi.odd_removed)}
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fgzeta",
        description="Truncated Euler products: cumulants, evenization, "
                    "fluctuation decomposition, formal-group checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cumulants", help="cumulant table at one cutoff")
    p.add_argument("--pmax", type=int, required=True, help="prime cutoff P")
    p.add_argument("--order", type=int, default=16, help="expansion order 2M")
    p.add_argument("--precision", type=int, default=None, help="mantissa bits")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_cumulants)

    p = sub.add_parser("scan", help="cumulants over a P grid with slope fits")
    p.add_argument("--pmin", type=int, required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--grid", default=None,
                   help="geometric:<n>; default: powers of 2 in range")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fluct", help="boundary-bulk decomposition of a_2m(P)")
    p.add_argument("--m", type=int, required=True, help="cumulant index a_2m")
    p.add_argument("--pmax", type=int, required=True, help="prime cutoff P")
    p.add_argument("--quad-tol", default="1e-12", help="quadrature tolerance")
    p.add_argument("--k1-only", action="store_true",
                   help="decompose the k=1 reduced object")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fluct)

    p = sub.add_parser("fg-check", help="formal-group property suite")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--trials", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fg_check)

    p = sub.add_parser("evenize", help="split a serialized log-series")
    p.add_argument("--in", dest="infile", required=True,
                   help="path to a series JSON file")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evenize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
