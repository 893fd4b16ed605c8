"""Exact eigenvalues and monic eigenpolynomials via triangular back-substitution.

For an exactly-solvable operator the eigenproblem T(p_n) = lambda_n p_n is an
upper-triangular linear system in the coefficients of p_n. Everything here is
exact Gaussian-rational arithmetic; the residual T(p) - lambda*p is verified
to be identically zero before an Eigenpair is returned.
"""
from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from typing import Iterable, Optional

from .exact import (
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    Polynomial,
    falling_factorial,
    poly_derivative,
)
from .operators import Operator, classify


class EigensolverError(Exception):
    pass


class NonUniqueEigenpolynomialError(EigensolverError):
    """A diagonal entry of the triangular system vanished."""

    def __init__(self, n: int, s: int):
        self.n = n
        self.s = s
        super().__init__(
            f"eigenpolynomial of degree {n} is not unique: diagonal vanishes at s={s}"
        )


class ResidualError(EigensolverError):
    """Internal consistency failure: T(p) - lambda*p is not identically zero."""


@dataclasses.dataclass(frozen=True)
class Eigenpair:
    n: int
    lam: GaussianRational
    p: Polynomial
    operator_digest: str


# In-process memo; the disk cache below survives across runs.
_memo: dict[tuple[str, int], Eigenpair] = {}


def eigenvalue(op: Operator, n: int) -> GaussianRational:
    """lambda_n = sum over diagonal terms of alpha_{j,j} * n(n-1)...(n-j+1)."""
    classify(op)  # raises unless exactly-solvable with a diagonal order
    total = GR_ZERO
    for j, q in op.terms:
        if q.degree == j:
            total = total + q[j] * falling_factorial(n, j)
    return total


def diagonal_entry(op: Operator, n: int, s: int) -> GaussianRational:
    """Diagonal element of the triangular system for row s (coefficient a_s)."""
    classify(op)
    total = GR_ZERO
    for j, q in op.terms:
        if q.degree == j:
            total = total + q[j] * (falling_factorial(s, j) - falling_factorial(n, j))
    return total


def apply_operator(op: Operator, p: Polynomial) -> Polynomial:
    """T(p) computed exactly."""
    out = Polynomial.zero()
    for j, q in op.terms:
        out = out + q * poly_derivative(p, j)
    return out


def eigenpolynomial(
    op: Operator, n: int, cache_dir: Optional[str] = None
) -> Eigenpair:
    """Unique monic eigenpolynomial of degree n, exact, residual-checked.

    Raises NonUniqueEigenpolynomialError when a diagonal entry vanishes
    (the only legitimate failure, per the triangular structure).
    """
    if n < 1:
        raise ValueError("degree n must be a positive integer")
    digest = op.digest()
    key = (digest, n)
    if key in _memo:
        pair = _memo[key]
        # A memo hit must still materialize the requested cache file.
        if cache_dir and not os.path.exists(_cache_path(cache_dir, digest, n)):
            _cache_store(cache_dir, pair)
        return pair
    cached = _cache_load(cache_dir, digest, n) if cache_dir else None
    if cached is not None:
        _memo[key] = cached
        return cached

    lam = eigenvalue(op, n)
    # a_s for s in [0, n]; monic top coefficient, back-substitute downwards.
    a = [GR_ZERO] * (n + 1)
    a[n] = GR_ONE
    # Contribution of a_m to the z^s coefficient of T(p): alpha_{j,i} * ff(m, j)
    # with m = s + j - i; i = j gives the diagonal, i < j the strict upper part.
    for s in range(n - 1, -1, -1):
        off = GR_ZERO
        for j, q in op.terms:
            for i in range(q.degree + 1):
                if i == j:
                    continue
                m = s + j - i
                if m > n:
                    continue
                c = q[i]
                if c.is_zero():
                    continue
                ff = falling_factorial(m, j)
                if ff:
                    off = off + c * ff * a[m]
        diag = diagonal_entry(op, n, s)
        if diag.is_zero():
            raise NonUniqueEigenpolynomialError(n, s)
        a[s] = -off / diag

    p = Polynomial(a)
    residual = apply_operator(op, p) - p * lam
    if not residual.is_zero():
        raise ResidualError(
            f"nonzero residual for degree {n}; internal inconsistency"
        )
    pair = Eigenpair(n=n, lam=lam, p=p, operator_digest=digest)
    _memo[key] = pair
    if cache_dir:
        _cache_store(cache_dir, pair)
    return pair


def eigenpolynomial_range(
    op: Operator, n_list: Iterable[int], cache_dir: Optional[str] = None
) -> tuple[list[Eigenpair], list[tuple[int, EigensolverError]]]:
    """Batch driver; per-n errors are collected, the batch continues."""
    pairs: list[Eigenpair] = []
    failures: list[tuple[int, EigensolverError]] = []
    for n in n_list:
        try:
            pairs.append(eigenpolynomial(op, n, cache_dir=cache_dir))
        except EigensolverError as e:
            failures.append((n, e))
    return pairs, failures


def _cache_path(cache_dir: str, digest: str, n: int) -> str:
    return os.path.join(cache_dir, f"{digest}-{n}.json")


def _cache_load(cache_dir, digest: str, n: int) -> Optional[Eigenpair]:
    path = _cache_path(cache_dir, digest, n)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    lam = GaussianRational.from_pair(data["lambda"])
    p = Polynomial.deserialize(data["coeffs"])
    return Eigenpair(n=data["n"], lam=lam, p=p, operator_digest=digest)


def _cache_store(cache_dir: str, pair: Eigenpair) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, pair.operator_digest, pair.n)
    payload = {
        "n": pair.n,
        "lambda": pair.lam.as_pair(),
        "coeffs": pair.p.serialize(),
    }
    # Atomic write: temp file in the same directory, then rename.
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
