"""Root-asymptotic measurements: scaling, growth fitting, Cauchy-transform
empirics, proof-inequality checks and interlacing.

Everything consumes exact Eigenpairs and multiprecision RootClouds; limits
are probed in desk form (monotonicity over finite degree grids).
"""
from __future__ import annotations

import dataclasses
import math
import statistics
from typing import Optional, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr, mpq
from scipy.spatial.distance import directed_hausdorff

from .eigensolver import Eigenpair
from .exact import BigComplex, GaussianRational, Polynomial, _ctx, poly_derivative, poly_eval
from .operators import Classification, NotDegenerateError, Operator, classify
from .rootfinder import RootCloud, largest_modulus, roots

DEFAULT_SAMPLES = 64
DEFAULT_RADIUS_FACTOR = 2.0
_TIE_TOLERANCE = 1e-12


class AnalysisError(Exception):
    pass


class EvaluationAtRootError(AnalysisError):
    """Denominator polynomial vanished (to working precision) at the point."""


class NotRealRootedError(AnalysisError):
    """Interlacing is only defined here for real-rooted clouds."""


@dataclasses.dataclass(frozen=True)
class GrowthReport:
    rows: tuple[tuple[int, float, Optional[float]], ...]  # (n, r_n, exponent_n)
    fitted_gamma: float
    fitted_c: float
    prefactor_used: Optional[float]


@dataclasses.dataclass(frozen=True)
class CauchyEquation:
    """The limiting algebraic relation z^j0 C^j0 + sum_A alpha z^degQj C^j = 1."""

    j0: int
    terms: tuple[tuple[int, GaussianRational, int], ...]  # (j, coeff, zpow)

    def format(self) -> str:
        rendered = []
        for j, coeff, zpow in self.terms:
            zpart = "" if zpow == 0 else ("z" if zpow == 1 else f"z^{zpow}")
            cpart = "C" if j == 1 else f"C^{j}"
            if coeff == GaussianRational(1):
                prefix = ""
            elif coeff.im == 0 and coeff.re > 0:
                prefix = str(coeff)
            else:
                prefix = f"({coeff})"
            rendered.append(f"{prefix}{zpart}{cpart}")
        return "+".join(rendered) + "=1"

    def __str__(self) -> str:
        return self.format()


@dataclasses.dataclass(frozen=True)
class ResidualReport:
    n: int
    sample_points: tuple[BigComplex, ...]
    residuals: tuple[float, ...]
    median: float
    skipped: int


def _pow_nd(n: int, d, precision_bits: int) -> mpfr:
    with _ctx(precision_bits):
        return mpfr(n) ** mpq(d)


def scaled_cloud(e: Eigenpair, d, precision_bits: int) -> RootCloud:
    """Roots of q_n(z) = p_n(n^d z): the cloud of p_n shrunk by n^d."""
    if mpq(d) <= 0:
        raise ValueError("scaling exponent d must be positive")
    cloud = roots(e.p, precision_bits)
    s = _pow_nd(e.n, d, cloud.precision_bits)
    with _ctx(cloud.precision_bits):
        scaled = tuple(
            (BigComplex.from_mpc(v.to_mpc() / s, cloud.precision_bits), float(err / s))
            for v, err in cloud.roots
        )
    return RootCloud(scaled, cloud.degree, cloud.precision_bits, cloud.source_digest)


def growth_report(
    op: Operator,
    n_grid: Sequence[int],
    prefactor: Optional[float] = None,
    precision_bits: int = 192,
    cache_dir: Optional[str] = None,
) -> GrowthReport:
    """r_n over the grid, per-n exponents for a given prefactor, and the
    least-squares power-law fit of r_n = c * n^gamma."""
    from .eigensolver import eigenpolynomial

    if not n_grid or list(n_grid) != sorted(set(n_grid)):
        raise ValueError("n_grid must be nonempty and strictly ascending")
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("growth report requires a degenerate operator")
    rows = []
    for n in n_grid:
        pair = eigenpolynomial(op, n, cache_dir=cache_dir)
        r = largest_modulus(roots(pair.p, precision_bits))
        exponent = math.log(r / prefactor) / math.log(n) if prefactor else None
        rows.append((n, r, exponent))
    if len(rows) >= 2:
        xs = np.log([row[0] for row in rows])
        ys = np.log([row[1] for row in rows])
        gamma, log_c = np.polyfit(xs, ys, 1)
        fitted_gamma, fitted_c = float(gamma), float(np.exp(log_c))
    else:
        fitted_gamma, fitted_c = math.nan, math.nan
    return GrowthReport(tuple(rows), fitted_gamma, fitted_c, prefactor)


def _abs_eval(p: Polynomial, radius: mpfr, bits: int) -> mpfr:
    """sum |a_i| radius^i; magnitude scale for the precision floor."""
    with _ctx(bits):
        acc = mpfr(0)
        for cf in reversed(p.coeffs):
            acc = acc * radius + abs(cf.to_mpc(bits))
    return acc


def _cauchy_quotient(p: Polynomial, n: int, j: int, z: BigComplex) -> BigComplex:
    pj = poly_derivative(p, j)
    pj1 = poly_derivative(p, j + 1)
    den = poly_eval(pj, z)
    bits = z.precision_bits
    floor = _abs_eval(pj, abs(z), bits) * (mpfr(2) ** (8 - bits))
    if abs(den) <= floor:
        raise EvaluationAtRootError(
            f"|p^({j})| below precision floor at sample point"
        )
    num = poly_eval(pj1, z)
    return num / ((n - j) * den)


def empirical_cauchy(e: Eigenpair, j: int, z: BigComplex) -> BigComplex:
    """C_{n,j}(z) = p^(j+1)(z) / ((n-j) p^(j)(z)), exact derivatives."""
    if not 0 <= j <= e.n - 1:
        raise ValueError("derivative order j must lie in [0, n-1]")
    return _cauchy_quotient(e.p, e.n, j, z)


def _scaled_cauchy(e: Eigenpair, s: mpfr, j: int, z: BigComplex) -> BigComplex:
    """Cauchy transform of order j for q_n(z) = p_n(s z)."""
    bits = z.precision_bits
    with _ctx(bits):
        w = BigComplex.from_mpc(z.to_mpc() * s, bits)
    inner = _cauchy_quotient(e.p, e.n, j, w)
    with _ctx(bits):
        return BigComplex.from_mpc(inner.to_mpc() * s, bits)


def cauchy_equation(op: Operator) -> CauchyEquation:
    """Limiting algebraic equation for C(z), with Q_j0 normalized monic."""
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("Cauchy equation requires a degenerate operator")
    lead = op.coefficient(c.j0, c.j0)
    terms = [(c.j0, GaussianRational(1), c.j0)]
    for j in sorted(c.A):
        q = op.term_map[j]
        terms.append((j, q[q.degree] / lead, q.degree))
    return CauchyEquation(j0=c.j0, terms=tuple(terms))


def equation_residual(eq: CauchyEquation, z: BigComplex, C: BigComplex) -> float:
    """|LHS - 1| of the limiting equation at (z, C)."""
    bits = max(z.precision_bits, C.precision_bits)
    with _ctx(bits):
        zz = z.to_mpc()
        cc = C.to_mpc()
        total = mpc(0)
        for j, coeff, zpow in eq.terms:
            total += coeff.to_mpc(bits) * zz**zpow * cc**j
        return float(abs(total - 1))


def _sample_circle(radius: float, num_samples: int, bits: int) -> list[BigComplex]:
    with _ctx(bits):
        r = mpfr(radius)
        two_pi = 2 * gmpy2.const_pi()
        out = []
        for m in range(num_samples):
            theta = two_pi * m / num_samples
            out.append(
                BigComplex.from_mpc(r * mpc(gmpy2.cos(theta), gmpy2.sin(theta)), bits)
            )
    return out


def cauchy_residual(
    op: Operator,
    e: Eigenpair,
    d=None,
    num_samples: int = DEFAULT_SAMPLES,
    radius_factor: float = DEFAULT_RADIUS_FACTOR,
    precision_bits: int = 192,
) -> ResidualReport:
    """Residual of the limiting equation against the empirical transform of q_n,
    sampled on a circle outside the scaled cloud."""
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("residual test requires a degenerate operator")
    if d is None:
        d = c.d
    eq = cauchy_equation(op)
    sc = scaled_cloud(e, d, precision_bits)
    radius = radius_factor * largest_modulus(sc)
    bits = sc.precision_bits
    s = _pow_nd(e.n, d, bits)
    samples = _sample_circle(radius, num_samples, bits)
    kept = []
    residuals = []
    skipped = 0
    for z in samples:
        try:
            C = _scaled_cauchy(e, s, 0, z)
        except EvaluationAtRootError:
            skipped += 1
            continue
        kept.append(z)
        residuals.append(equation_residual(eq, z, C))
    if not residuals:
        raise AnalysisError("all sample points hit roots; no residuals computed")
    return ResidualReport(
        n=e.n,
        sample_points=tuple(kept),
        residuals=tuple(residuals),
        median=float(statistics.median(residuals)),
        skipped=skipped,
    )


def lemma2_margin(e: Eigenpair, j: int, z0: BigComplex) -> float:
    """|C_{n,j}(z0)| - 1/(2|z0|); nonnegative whenever |z0| >= r_n."""
    modulus = float(abs(z0))
    if modulus <= 0:
        raise ValueError("z0 must be nonzero")
    C = empirical_cauchy(e, j, z0)
    return float(abs(C)) - 1.0 / (2.0 * modulus)


def lemma3_rhs(op: Operator, n: int, r_n: float) -> float:
    """Right-hand side of the largest-root inequality, Q_k normalized monic.

    The value is >= 1 whenever r_n is the true largest root modulus."""
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("inequality requires a degenerate operator")
    k = c.k
    if r_n <= 0:
        raise ValueError("r_n must be positive")
    if n <= k:
        raise ValueError("need n > k")
    qk = op.term_map[k]
    deg_qk = qk.degree
    lead = math.sqrt(float(qk[deg_qk].abs_squared()))
    total = 0.0
    for j, q in op.terms:
        if j >= k:
            continue
        for i in range(q.degree + 1):
            mag = math.sqrt(float(q[i].abs_squared())) / lead
            if mag == 0:
                continue
            total += mag * 2.0 ** (k - j) * r_n ** (k - j - deg_qk + i) / (n - k + 1) ** (k - j)
    for i in range(deg_qk):
        mag = math.sqrt(float(qk[i].abs_squared())) / lead
        total += mag / r_n ** (deg_qk - i)
    return total


def derivative_measure_distance(
    e: Eigenpair,
    d,
    orders: Sequence[int],
    num_samples: int = DEFAULT_SAMPLES,
    radius_factor: float = DEFAULT_RADIUS_FACTOR,
    precision_bits: int = 192,
) -> float:
    """Sup over an external circle of the max pairwise distance between the
    Cauchy transforms of the scaled polynomial's derivative root measures."""
    orders = sorted(set(orders))
    if not orders:
        raise ValueError("need at least one derivative order")
    if orders[-1] >= e.n:
        raise ValueError("orders must be below the polynomial degree")
    if len(orders) == 1:
        return 0.0
    sc = scaled_cloud(e, d, precision_bits)
    radius = radius_factor * largest_modulus(sc)
    bits = sc.precision_bits
    s = _pow_nd(e.n, d, bits)
    worst = 0.0
    for z in _sample_circle(radius, num_samples, bits):
        try:
            values = [_scaled_cauchy(e, s, j, z).to_mpc() for j in orders]
        except EvaluationAtRootError:
            continue
        with _ctx(bits):
            for a in range(len(values)):
                for b in range(a + 1, len(values)):
                    worst = max(worst, float(abs(values[a] - values[b])))
    return worst


def interlace_real(
    a: RootCloud, b: RootCloud, imag_tol: float = 1e-9
) -> Optional[bool]:
    """Strict interlacing of sorted real parts; |a| must equal |b| + 1.

    Returns None (indeterminate) when roots tie within 1e-12 of each other.
    Raises NotRealRootedError when any root has |Im| > imag_tol."""
    for cloud in (a, b):
        for v, _ in cloud.roots:
            if abs(float(v.im)) > imag_tol:
                raise NotRealRootedError(
                    "cloud has a root with imaginary part beyond imag_tol"
                )
    if len(a.roots) != len(b.roots) + 1:
        raise ValueError("outer cloud must have exactly one more root")
    xs = sorted(float(v.re) for v, _ in a.roots)
    ys = sorted(float(v.re) for v, _ in b.roots)
    merged = sorted(xs + ys)
    for u, v in zip(merged, merged[1:]):
        if abs(u - v) < _TIE_TOLERANCE:
            return None
    return all(xs[i] < ys[i] < xs[i + 1] for i in range(len(ys)))


def cloud_hausdorff(a: RootCloud, b: RootCloud) -> float:
    """Symmetric Hausdorff distance between two clouds in the root plane."""
    pa = np.array([[z.real, z.imag] for z in a.points()])
    pb = np.array([[z.real, z.imag] for z in b.points()])
    return max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0])
