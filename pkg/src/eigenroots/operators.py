"""Differential operators with polynomial coefficients and their derived constants.

An operator is a finite sum of terms Q_j * D^j with D = d/dz. The module
classifies operators (exactly-solvable / degenerate), and computes the
constants that the degrees of the Q_j determine: the diagonal order j0, the
scaling exponent d with its attainment set A, and the lower-bound exponent b.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from typing import Optional

from gmpy2 import mpq

from .exact import GaussianRational, Polynomial


class OperatorError(Exception):
    pass


class OperatorFormatError(OperatorError):
    """Malformed operator description (file or constructor input)."""


class NotExactlySolvableError(OperatorError):
    """Some term has deg Q_j > j."""


class NoDiagonalOrderError(OperatorError):
    """No j with deg Q_j = j; every eigenvalue would be zero."""


class NotDegenerateError(OperatorError):
    """Operation requires a degenerate operator (deg Q_k < k)."""


class ConditionInapplicableError(OperatorError):
    """b is absent, so the b = d condition cannot be evaluated."""


@dataclasses.dataclass(frozen=True)
class Operator:
    """T = sum over j of Q_j D^j, keyed by derivative order j >= 1."""

    terms: tuple[tuple[int, Polynomial], ...]
    name: Optional[str] = None

    def __init__(self, terms, name: Optional[str] = None):
        if hasattr(terms, "items"):
            items = list(terms.items())
        else:
            items = list(terms)
        cleaned = []
        seen = set()
        for j, q in items:
            if not isinstance(j, int) or j < 1:
                raise OperatorFormatError(f"derivative order must be a positive integer, got {j!r}")
            if j in seen:
                raise OperatorFormatError(f"duplicate derivative order {j}")
            seen.add(j)
            if not isinstance(q, Polynomial):
                q = Polynomial(q)
            if q.is_zero():
                raise OperatorFormatError(f"coefficient Q_{j} is identically zero")
            cleaned.append((j, q))
        if not cleaned:
            raise OperatorFormatError("operator must have at least one term")
        cleaned.sort(key=lambda t: t[0])
        object.__setattr__(self, "terms", tuple(cleaned))
        object.__setattr__(self, "name", name)

    @property
    def order(self) -> int:
        return self.terms[-1][0]

    @property
    def term_map(self) -> dict[int, Polynomial]:
        return dict(self.terms)

    def coefficient(self, j: int, i: int) -> GaussianRational:
        """alpha_{j,i}: coefficient of z^i in Q_j (zero when absent)."""
        for order, q in self.terms:
            if order == j:
                return q[i]
        return GaussianRational(0)

    def to_dict(self) -> dict:
        return {
            "name": self.name or "",
            "terms": [
                {"order": j, "coeffs": q.serialize()} for j, q in self.terms
            ],
        }

    @staticmethod
    def from_dict(data: dict) -> "Operator":
        try:
            terms = [
                (int(t["order"]), Polynomial.deserialize(t["coeffs"]))
                for t in data["terms"]
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise OperatorFormatError(f"bad operator description: {e}") from e
        return Operator(terms, name=data.get("name") or None)

    def digest(self) -> str:
        """SHA-256 over the canonical serialization; stable cache key."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __str__(self) -> str:
        parts = [f"({q})D^{j}" for j, q in self.terms]
        return " + ".join(parts)


def load_operator(path) -> Operator:
    with open(path) as fh:
        return Operator.from_dict(json.load(fh))


def save_operator(op: Operator, path) -> None:
    with open(path, "w") as fh:
        json.dump(op.to_dict(), fh, indent=2)
        fh.write("\n")


@dataclasses.dataclass(frozen=True)
class Classification:
    k: int
    exactly_solvable: bool
    degenerate: bool
    j0: Optional[int]
    d: Optional[mpq]
    b: Optional[mpq]
    A: Optional[frozenset[int]]


def classify(op: Operator) -> Classification:
    """Classify T and compute j0, d, b and the attainment set A.

    Raises NotExactlySolvableError when some deg Q_j > j, and
    NoDiagonalOrderError when no j satisfies deg Q_j = j.
    """
    k = op.order
    degs = {j: q.degree for j, q in op.terms}
    for j, dq in degs.items():
        if dq > j:
            raise NotExactlySolvableError(
                f"deg Q_{j} = {dq} > {j}; operator does not preserve the polynomial flag"
            )
    diagonal_orders = [j for j, dq in degs.items() if dq == j]
    if not diagonal_orders:
        raise NoDiagonalOrderError("no term with deg Q_j = j; all eigenvalues vanish")
    j0 = max(diagonal_orders)
    degenerate = degs[k] < k
    if not degenerate:
        return Classification(k, True, False, j0, None, None, None)

    # d = max over present j in [j0+1, k] of (j - j0)/(j - deg Q_j); ties kept in A.
    candidates = {
        j: mpq(j - j0, j - degs[j]) for j in degs if j0 < j <= k
    }
    d = max(candidates.values())
    A = frozenset(j for j, v in candidates.items() if v == d)

    # b = restricted min over present j in [1, k-1] with positive denominator.
    b_vals = []
    for j, dq in degs.items():
        if j >= k:
            continue
        den = k - j + dq - degs[k]
        if den > 0:
            b_vals.append(mpq(k - j, den))
    b = min(b_vals) if b_vals else None
    return Classification(k, True, True, j0, d, b, A)


def exponent_d(op: Operator) -> mpq:
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("d is defined for degenerate operators only")
    return c.d


def exponent_b(op: Operator) -> Optional[mpq]:
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("b is defined for degenerate operators only")
    return c.b


def attainment_set(op: Operator) -> frozenset[int]:
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("attainment set is defined for degenerate operators only")
    return c.A


def check_b_equals_d(op: Operator) -> bool:
    c = classify(op)
    if not c.degenerate:
        raise NotDegenerateError("b = d check requires a degenerate operator")
    if c.b is None:
        raise ConditionInapplicableError("b is absent for this operator")
    return c.b == c.d
