"""Multiprecision computation of all roots of an exact polynomial.

Simultaneous Aberth-Ehrlich iteration in gmpy2 multiprecision arithmetic,
with deterministic initial guesses, per-root first-order error radii and
automatic precision doubling on non-convergence.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math

import gmpy2
from gmpy2 import mpc, mpfr

from .exact import BigComplex, MIN_PRECISION_BITS, Polynomial, _ctx

DEFAULT_PRECISION_BITS = 192
_INITIAL_ANGLE_OFFSET = 0.376  # radians; fixed for reproducible clouds
_MAX_DOUBLINGS = 4


class RootfinderError(Exception):
    pass


class DegreeZeroError(RootfinderError):
    """Root finding needs degree >= 1."""


class NoConvergenceError(RootfinderError):
    """Aberth iteration failed to converge after all precision doublings."""


@dataclasses.dataclass(frozen=True)
class RootCloud:
    """All roots of a polynomial with per-root heuristic error radii."""

    roots: tuple[tuple[BigComplex, float], ...]
    degree: int
    precision_bits: int
    source_digest: str

    def values(self) -> list[BigComplex]:
        return [v for v, _ in self.roots]

    def moduli(self) -> list[float]:
        return [float(abs(v)) for v, _ in self.roots]

    def points(self) -> list[complex]:
        return [v.to_complex() for v, _ in self.roots]

    def extreme(self) -> tuple[float, float]:
        """(largest modulus, max err_radius among the argmax candidates)."""
        mods = self.moduli()
        m = max(mods)
        err = max(
            e for (v, e), mod in zip(self.roots, mods) if mod >= m * (1 - 1e-12)
        )
        return m, err


def poly_digest(p: Polynomial) -> str:
    blob = json.dumps(p.serialize(), separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _coeff_bit_length(p: Polynomial) -> int:
    bits = 1
    for c in p.coeffs:
        for q in (c.re, c.im):
            bits = max(
                bits, int(q.numerator).bit_length(), int(q.denominator).bit_length()
            )
    return bits


_memo: dict[tuple[Polynomial, int], RootCloud] = {}


def roots(p: Polynomial, precision_bits: int = DEFAULT_PRECISION_BITS) -> RootCloud:
    """All roots of p (with multiplicity) at certified-by-heuristic accuracy.

    Initial guesses sit on the Fujiwara-bound circle with a fixed angular
    offset; convergence requires every update below 2^(-prec/2)*(1+|root|).
    On non-convergence the working precision doubles, up to 4 times.
    """
    if p.degree < 1:
        raise DegreeZeroError("cannot find roots of a constant polynomial")
    key = (p, precision_bits)
    if key in _memo:
        return _memo[key]
    digest = poly_digest(p)
    deg = p.degree
    # Precision floor keeps huge exact coefficients from rounding to garbage.
    work = max(precision_bits, MIN_PRECISION_BITS, _coeff_bit_length(p) // 8)

    if all(c.is_zero() for c in p.coeffs[:-1]):
        # Monomial: the origin with multiplicity deg, exactly.
        zero = BigComplex.from_complex(0j, work)
        cloud = RootCloud(tuple((zero, 0.0) for _ in range(deg)), deg, work, digest)
        _memo[key] = cloud
        return cloud

    prec = work
    zs = None
    for _ in range(_MAX_DOUBLINGS + 1):
        with _ctx(prec):
            cs = [c.to_mpc(prec) for c in p.coeffs]
            if zs is None:
                zs = _initial_guesses(cs, deg, prec)
            else:
                zs = [mpc(z) for z in zs]
            ok, zs = _aberth(cs, zs, prec)
        if ok:
            break
        prec *= 2
    else:
        raise NoConvergenceError(
            f"degree {deg} polynomial did not converge at {prec} bits"
        )

    out = []
    err_prec = 2 * prec
    with _ctx(err_prec):
        cs2 = [c.to_mpc(err_prec) for c in p.coeffs]
        for z in sorted(zs, key=lambda w: (w.real, w.imag)):
            zz = mpc(z)
            pv, dv = _horner_pair(cs2, zz)
            if pv == 0:
                err = 0.0
            elif dv == 0:
                err = float(1 + abs(zz))  # clustered multiple root, no Newton bound
            else:
                err = float(deg * abs(pv) / abs(dv))
            out.append((BigComplex.from_mpc(z, prec), err))
    cloud = RootCloud(tuple(out), deg, prec, digest)
    _memo[key] = cloud
    return cloud


def _initial_guesses(cs: list[mpc], deg: int, prec: int) -> list[mpc]:
    """Deterministic starting points from the Newton polygon of |coefficients|.

    The upper convex hull of (i, log|a_i|) splits the degree into groups; a
    group spanning powers i1..i2 holds i2-i1 roots of modulus about
    exp((log|a_i1| - log|a_i2|)/(i2 - i1)). Points go on those circles with
    the fixed angular offset, which beats a single bounding circle by orders
    of magnitude in iteration count for spread-out root moduli.
    """
    pts = [(i, float(gmpy2.log(abs(c)))) for i, c in enumerate(cs) if c != 0]
    # Valuation v > 0 means v exact roots at the origin; the polygon edges
    # below only account for the remaining deg - v roots.
    out: list[mpc] = [mpc(0)] * pts[0][0]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    two_pi = 2 * gmpy2.const_pi()
    for edge, ((i1, y1), (i2, y2)) in enumerate(zip(hull, hull[1:])):
        count = i2 - i1
        radius = gmpy2.exp(mpfr(y1 - y2) / count)
        for m in range(count):
            theta = (
                two_pi * m / count
                + mpfr(_INITIAL_ANGLE_OFFSET)
                + two_pi * edge / (7 * max(1, len(hull) - 1))
            )
            out.append(radius * mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
    return out


def _horner_pair(cs: list[mpc], z: mpc) -> tuple[mpc, mpc]:
    """(p(z), p'(z)) in one pass."""
    pv = mpc(0)
    dv = mpc(0)
    for c in reversed(cs):
        dv = dv * z + pv
        pv = pv * z + c
    return pv, dv


def _aberth(cs: list[mpc], zs: list[mpc], prec: int) -> tuple[bool, list[mpc]]:
    deg = len(zs)
    tol = mpfr(2) ** (-(prec // 2))
    nudge = mpfr(2) ** (-(prec // 3))
    max_iter = 100 + 4 * deg
    # When evaluation noise swamps |p(z)| the iteration stops making progress;
    # bail out early so the precision-doubling restart kicks in.
    stall_limit = 30
    last_progress = 0
    done = [False] * deg
    for sweep in range(max_iter):
        moved = False
        settled = sum(done)
        for i in range(deg):
            if done[i]:
                continue
            z = zs[i]
            pv, dv = _horner_pair(cs, z)
            if pv == 0:
                done[i] = True
                continue
            if dv == 0:
                zs[i] = z + nudge * (1 + abs(z))
                moved = True
                continue
            newton = pv / dv
            s = mpc(0)
            collision = False
            for j in range(deg):
                if j == i:
                    continue
                diff = z - zs[j]
                if diff == 0:
                    collision = True
                    break
                s += 1 / diff
            if collision:
                zs[i] = z + nudge * (1 + abs(z))
                moved = True
                continue
            denom = 1 - newton * s
            w = newton if denom == 0 else newton / denom
            zs[i] = z - w
            moved = True
            if abs(w) < tol * (1 + abs(zs[i])):
                done[i] = True
        if all(done):
            return True, zs
        if not moved:
            return True, zs
        if sum(done) > settled:
            last_progress = sweep
        elif sweep - last_progress >= stall_limit:
            return False, zs
    return False, zs


def largest_modulus(cloud: RootCloud) -> float:
    """Max root modulus r_n; err radius of the argmax is cloud.extreme()[1]."""
    if not cloud.roots:
        raise ValueError("empty root cloud")
    return cloud.extreme()[0]


def _convex_hull(points: list[complex]) -> list[complex]:
    pts = sorted(set((z.real, z.imag) for z in points))
    if len(pts) <= 2:
        return [complex(x, y) for x, y in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    upper: list = []
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    hull = lower[:-1] + upper[:-1]
    return [complex(x, y) for x, y in hull]


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(z - a)
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def hull_distance(z: complex, hull: list[complex]) -> float:
    """Euclidean distance from z to the convex hull (0 when inside)."""
    if not hull:
        return math.inf
    if len(hull) == 1:
        return abs(z - hull[0])
    if len(hull) >= 3:
        inside = True
        for a, b in zip(hull, hull[1:] + hull[:1]):
            cr = (b.real - a.real) * (z.imag - a.imag) - (b.imag - a.imag) * (
                z.real - a.real
            )
            if cr < 0:
                inside = False
                break
        if inside:
            return 0.0
    return min(
        _segment_distance(z, a, b) for a, b in zip(hull, hull[1:] + hull[:1])
    )


def hull_contains(outer: RootCloud, inner: RootCloud, tol: float) -> bool:
    """True iff every inner root is within tol of the hull of the outer roots."""
    if not outer.roots or not inner.roots:
        raise ValueError("clouds must be nonempty")
    hull = _convex_hull(outer.points())
    return all(hull_distance(z, hull) <= tol for z in inner.points())
