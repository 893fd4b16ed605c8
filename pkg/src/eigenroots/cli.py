"""Command-line front end: classification, eigenpolynomial sweeps, growth
tables, scaled clouds, Cauchy-equation residuals, inequality checks and
interlacing, all persisted as CSV/JSON for plotting elsewhere."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile

from . import bundled_operator
from .analysis import (
    cauchy_equation,
    cauchy_residual,
    growth_report,
    interlace_real,
    lemma2_margin,
    lemma3_rhs,
    scaled_cloud,
)
from .eigensolver import eigenpolynomial, eigenpolynomial_range
from .exact import BigComplex, poly_derivative, _ctx
from .operators import OperatorError, classify, load_operator
from .rootfinder import hull_contains, largest_modulus, roots

import gmpy2
from gmpy2 import mpc, mpfr, mpq


def _decimal_digits(bits: int) -> int:
    return int(bits * 0.30103) + 2


def _fmt(x, bits: int = 64) -> str:
    if isinstance(x, mpfr):
        return format(x, f".{_decimal_digits(bits)}g")
    return repr(float(x))


def _load(path: str):
    if os.path.exists(path):
        return load_operator(path)
    try:
        return bundled_operator(path)
    except FileNotFoundError:
        raise OperatorError(f"no operator file at {path!r} and no bundled operator of that name")


def _parse_grid(args) -> list[int]:
    grid = list(args.n or [])
    if args.n_grid:
        grid += [int(tok) for tok in args.n_grid.split(",") if tok.strip()]
    grid = sorted(set(grid))
    if not grid or grid[0] < 1:
        raise SystemExit("need at least one positive --n / --n-grid value")
    return grid


def _atomic_write_rows(path: str, header: list[str], rows: list[list]) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    with os.fdopen(fd, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    os.replace(tmp, path)


def _rational_str(q) -> str:
    return str(q)


def cmd_classify(args) -> int:
    op = _load(args.operator)
    c = classify(op)
    report = {
        "name": op.name or "",
        "k": c.k,
        "exactly_solvable": c.exactly_solvable,
        "degenerate": c.degenerate,
        "j0": c.j0,
        "d": _rational_str(c.d) if c.d is not None else None,
        "b": _rational_str(c.b) if c.b is not None else None,
        "A": sorted(c.A) if c.A is not None else None,
        "b_equals_d": (c.b == c.d) if (c.b is not None and c.d is not None) else None,
    }
    if c.degenerate:
        pieces = [f"degenerate, j0={c.j0}", f"d={c.d}"]
        pieces.append(f"b={c.b}" if c.b is not None else "b absent")
        pieces.append("A={%s}" % ",".join(str(j) for j in sorted(c.A)))
        print(", ".join(pieces))
    else:
        print(f"exactly-solvable, non-degenerate, j0={c.j0}")
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "classify.json"), "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_eigen(args) -> int:
    op = _load(args.operator)
    grid = _parse_grid(args)
    pairs, failures = eigenpolynomial_range(op, grid, cache_dir=args.cache)
    for n, err in failures:
        print(f"warning: n={n}: {err}", file=sys.stderr)
    if args.dump:
        os.makedirs(args.out, exist_ok=True)
        payload = {
            str(pair.n): {
                "lambda": pair.lam.as_pair(),
                "coeffs": pair.p.serialize(),
            }
            for pair in pairs
        }
        with open(os.path.join(args.out, "eigenpairs.json"), "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    print(f"computed {len(pairs)} eigenpairs, {len(failures)} failures")
    return 0


def cmd_growth(args) -> int:
    op = _load(args.operator)
    grid = _parse_grid(args)
    report = growth_report(
        op,
        grid,
        prefactor=args.prefactor,
        precision_bits=args.precision_bits,
        cache_dir=args.cache,
    )
    rows = [
        [n, repr(r), "" if exp is None else repr(exp)]
        for n, r, exp in report.rows
    ]
    rows.append(["fitted_c", repr(report.fitted_c), ""])
    rows.append(["fitted_gamma", repr(report.fitted_gamma), ""])
    _atomic_write_rows(os.path.join(args.out, "growth.csv"), ["n", "r_n", "exponent_n"], rows)
    for n, r, exp in report.rows:
        line = f"n={n} r_n={r:.10g}"
        if exp is not None:
            line += f" exponent_n={exp:.6f}"
        print(line)
    print(f"fit: r_n ~ {report.fitted_c:.6g} * n^{report.fitted_gamma:.6f}")
    return 0


def _cloud_rows(n: int, cloud, bits: int, scaled: bool) -> list[list]:
    rows = []
    for idx, (v, err) in enumerate(cloud.roots):
        row = [
            n,
            idx,
            _fmt(v.re, bits),
            _fmt(v.im, bits),
            _fmt(abs(v), bits),
            repr(err),
        ]
        if scaled:
            row.append(1)
        rows.append(row)
    return rows


def cmd_scaled(args) -> int:
    op = _load(args.operator)
    c = classify(op)
    grid = _parse_grid(args)
    d = mpq(args.d) if args.d else c.d
    if d is None:
        raise SystemExit("operator is non-degenerate; pass --d explicitly")
    for n in grid:
        pair = eigenpolynomial(op, n, cache_dir=args.cache)
        cloud = scaled_cloud(pair, d, args.precision_bits)
        rows = _cloud_rows(n, cloud, cloud.precision_bits, scaled=True)
        _atomic_write_rows(
            os.path.join(args.out, f"scaled_{n}.csv"),
            ["n", "index", "re", "im", "abs", "err_radius", "scaled"],
            rows,
        )
        print(f"n={n}: {len(rows)} scaled roots, max |z| = {largest_modulus(cloud):.6g}")
    return 0


def cmd_cauchy(args) -> int:
    op = _load(args.operator)
    eq = cauchy_equation(op)
    print(eq.format())
    grid = _parse_grid(args)
    rows = []
    medians = []
    for n in grid:
        pair = eigenpolynomial(op, n, cache_dir=args.cache)
        report = cauchy_residual(
            op,
            pair,
            num_samples=args.samples,
            radius_factor=args.radius_factor,
            precision_bits=args.precision_bits,
        )
        medians.append((n, report.median))
        for z, res in zip(report.sample_points, report.residuals):
            rows.append([n, _fmt(z.re, 64), _fmt(z.im, 64), repr(res)])
    _atomic_write_rows(
        os.path.join(args.out, "cauchy_residuals.csv"),
        ["n", "sample_re", "sample_im", "residual"],
        rows,
    )
    for n, med in medians:
        print(f"n={n}: median residual {med:.6g}")
    return 0


def cmd_checks(args) -> int:
    op = _load(args.operator)
    c = classify(op)
    grid = _parse_grid(args)
    results: list[tuple[str, bool, str]] = []

    clouds = {}
    pairs = {}
    for n in grid:
        pairs[n] = eigenpolynomial(op, n, cache_dir=args.cache)
        clouds[n] = roots(pairs[n].p, args.precision_bits)

    r = {n: largest_modulus(clouds[n]) for n in grid}
    mono = all(r[a] < r[b] for a, b in zip(grid, grid[1:]))
    results.append(("theorem1-monotonicity", mono, f"r_n over {grid}"))

    if c.b is not None:
        gamma = float(c.b) / 2.0
        scaled = [r[n] / n**gamma for n in grid]
        mono2 = all(u < v for u, v in zip(scaled, scaled[1:]))
        results.append(("theorem2-monotonicity", mono2, f"r_n/n^{gamma:.4g}"))

    lemma2_ok = True
    detail = ""
    for n in grid:
        radius = 1.0001 * r[n]
        bits = clouds[n].precision_bits
        with _ctx(bits):
            two_pi = 2 * gmpy2.const_pi()
            for m in range(32):
                theta = two_pi * m / 32
                z0 = BigComplex.from_mpc(
                    mpfr(radius) * mpc(gmpy2.cos(theta), gmpy2.sin(theta)), bits
                )
                for j in range(c.k):
                    margin = lemma2_margin(pairs[n], j, z0)
                    if margin < -1e-9:
                        lemma2_ok = False
                        detail = f"n={n} j={j} margin={margin:.3g}"
    results.append(("lemma2-margins", lemma2_ok, detail or "all margins >= -1e-9"))

    lemma3_ok = True
    detail = ""
    for n in grid:
        if n <= c.k:
            continue
        rhs = lemma3_rhs(op, n, r[n])
        if rhs < 1 - 1e-9:
            lemma3_ok = False
            detail = f"n={n} rhs={rhs:.6g}"
    results.append(("lemma3-inequality", lemma3_ok, detail or "RHS >= 1 at all n"))

    gl_ok = True
    detail = ""
    for n in grid:
        tol = 1e-6 * r[n]
        outer = clouds[n]
        for j in range(1, min(c.k, n) + 1):
            deriv = poly_derivative(pairs[n].p, j)
            if deriv.degree < 1:
                break
            inner = roots(deriv, args.precision_bits)
            if not hull_contains(outer, inner, tol):
                gl_ok = False
                detail = f"n={n} order={j}"
            outer = inner
    results.append(("gauss-lucas-chain", gl_ok, detail or "all derivative hulls nest"))

    failed = 0
    for name, ok, info in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:24s} {info}")
        failed += 0 if ok else 1
    return 1 if failed else 0


def cmd_interlace(args) -> int:
    op = _load(args.operator)
    c = classify(op)
    grid = _parse_grid(args)
    if len(grid) < 2:
        raise SystemExit("interlace needs at least two degrees")
    d = mpq(args.d) if args.d else (c.d if c.d is not None else mpq(1))
    all_ok = True
    for n_small, n_big in zip(grid, grid[1:]):
        if n_big != n_small + 1:
            print(f"skipping non-consecutive pair ({n_small},{n_big})", file=sys.stderr)
            continue
        a = scaled_cloud(eigenpolynomial(op, n_big, cache_dir=args.cache), d, args.precision_bits)
        b = scaled_cloud(eigenpolynomial(op, n_small, cache_dir=args.cache), d, args.precision_bits)
        verdict = interlace_real(a, b, imag_tol=args.imag_tol)
        text = "indeterminate" if verdict is None else str(verdict).lower()
        print(f"interlace({n_big},{n_small}): {text}")
        if verdict is not True:
            all_ok = False
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigenroots",
        description="Eigenpolynomial root asymptotics for exactly-solvable differential operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--operator", required=True, help="operator JSON file or bundled name")
        p.add_argument("--n", action="append", type=int, help="degree (repeatable)")
        p.add_argument("--n-grid", help="comma-separated degrees")
        p.add_argument("--precision-bits", type=int, default=192)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--cache", default=None, help="eigenpair cache directory")

    p = sub.add_parser("classify", help="operator constants k, j0, d, b, A")
    p.add_argument("--operator", required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("eigen", help="exact eigenpolynomials into the cache")
    common(p)
    p.add_argument("--dump", action="store_true", help="write exact coefficients JSON")
    p.set_defaults(fn=cmd_eigen)

    p = sub.add_parser("growth", help="largest-root growth table and power-law fit")
    common(p)
    p.add_argument("--prefactor", type=float, default=None)
    p.set_defaults(fn=cmd_growth)

    p = sub.add_parser("scaled", help="scaled root clouds as CSV")
    common(p)
    p.add_argument("--d", help="override scaling exponent (exact rational)")
    p.set_defaults(fn=cmd_scaled)

    p = sub.add_parser("cauchy", help="limiting equation and empirical residuals")
    common(p)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--radius-factor", type=float, default=2.0)
    p.set_defaults(fn=cmd_cauchy)

    p = sub.add_parser("checks", help="inequality and monotonicity suites")
    common(p)
    p.set_defaults(fn=cmd_checks)

    p = sub.add_parser("interlace", help="real-root interlacing of consecutive degrees")
    common(p)
    p.add_argument("--d", help="override scaling exponent (exact rational)")
    p.add_argument("--imag-tol", type=float, default=1e-9)
    p.set_defaults(fn=cmd_interlace)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (OperatorError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
