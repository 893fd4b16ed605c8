"""Exact Gaussian-rational scalars, multiprecision complex numbers and polynomials.

All values here are immutable; operations are pure functions. Exact
arithmetic is used for everything algebraic, floating point enters only
through :class:`BigComplex` at evaluation boundaries.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Iterable, Union

import gmpy2
from gmpy2 import mpq, mpfr, mpc

MIN_PRECISION_BITS = 64


class InvalidScaleError(ValueError):
    """Raised when a polynomial argument scaling factor is zero."""


def _ctx(bits: int):
    return gmpy2.context(precision=bits)


RationalLike = Union[int, str, mpq]


def _as_mpq(x: RationalLike) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _mpq_str(q: mpq) -> str:
    # "num/den", den omitted when 1; mpq keeps lowest terms / positive den.
    return str(q)


@dataclasses.dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: mpq
    im: mpq

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", _as_mpq(re))
        object.__setattr__(self, "im", _as_mpq(im))

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, str, mpq)):
            return GaussianRational(x)
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return GaussianRational(x[0], x[1])
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_squared(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def __add__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        den = o.abs_squared()
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other) -> "GaussianRational":
        return GaussianRational.coerce(other) / self

    def to_mpc(self, precision_bits: int) -> mpc:
        with _ctx(precision_bits):
            return mpc(mpfr(self.re), mpfr(self.im))

    def to_bigcomplex(self, precision_bits: int) -> "BigComplex":
        z = self.to_mpc(precision_bits)
        return BigComplex(z.real, z.imag, precision_bits)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def as_pair(self) -> list[str]:
        """Serialize as ["re", "im"] exact rational strings."""
        return [_mpq_str(self.re), _mpq_str(self.im)]

    @staticmethod
    def from_pair(pair) -> "GaussianRational":
        if isinstance(pair, (int, str)):
            return GaussianRational(pair)
        re, im = pair
        return GaussianRational(_as_mpq(re), _as_mpq(im))

    def __str__(self) -> str:
        if self.im == 0:
            return _mpq_str(self.re)
        if self.re == 0:
            return f"{_mpq_str(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{_mpq_str(self.re)}{sign}{_mpq_str(abs(self.im))}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)


@dataclasses.dataclass(frozen=True)
class BigComplex:
    """Arbitrary-precision complex number tagged with its precision in bits.

    Arithmetic results carry the max precision of the operands.
    """

    re: mpfr
    im: mpfr
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION_BITS:
            raise ValueError(
                f"precision_bits must be >= {MIN_PRECISION_BITS}, got {self.precision_bits}"
            )

    @staticmethod
    def from_mpc(z: mpc, precision_bits: int) -> "BigComplex":
        with _ctx(precision_bits):
            z = mpc(z)
        return BigComplex(z.real, z.imag, precision_bits)

    @staticmethod
    def from_complex(z: complex, precision_bits: int = MIN_PRECISION_BITS) -> "BigComplex":
        with _ctx(precision_bits):
            return BigComplex(mpfr(z.real), mpfr(z.imag), precision_bits)

    def to_mpc(self) -> mpc:
        with _ctx(self.precision_bits):
            return mpc(self.re, self.im)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def _coerce(self, other) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, GaussianRational):
            return other.to_bigcomplex(self.precision_bits)
        if isinstance(other, (int, mpq, float, mpfr)):
            with _ctx(self.precision_bits):
                return BigComplex(mpfr(other), mpfr(0), self.precision_bits)
        if isinstance(other, complex):
            return BigComplex.from_complex(other, self.precision_bits)
        raise TypeError(f"cannot combine BigComplex with {type(other).__name__}")

    def _binop(self, other, op) -> "BigComplex":
        o = self._coerce(other)
        bits = max(self.precision_bits, o.precision_bits)
        with _ctx(bits):
            z = op(self.to_mpc(), o.to_mpc())
        return BigComplex.from_mpc(z, bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._coerce(other)._binop(self, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._coerce(other)._binop(self, lambda a, b: a / b)

    def __neg__(self):
        return BigComplex(-self.re, -self.im, self.precision_bits)

    def __abs__(self) -> mpfr:
        with _ctx(self.precision_bits):
            return abs(self.to_mpc())

    def __str__(self) -> str:
        return f"({self.re} {'+' if self.im >= 0 else '-'} {abs(self.im)}i)"


@dataclasses.dataclass(frozen=True)
class Polynomial:
    """Dense exact polynomial; coeffs ascending by power, trailing zeros trimmed."""

    coeffs: tuple[GaussianRational, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def of(*coeffs) -> "Polynomial":
        return Polynomial(coeffs)

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def monomial(power: int, coeff=GR_ONE) -> "Polynomial":
        return Polynomial([GR_ZERO] * power + [GaussianRational.coerce(coeff)])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> GaussianRational:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return GR_ZERO

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] - other[i] for i in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            s = GaussianRational.coerce(other)
            return Polynomial([c * s for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def scale(self, s) -> "Polynomial":
        """Multiply all coefficients by the exact scalar s."""
        return self * s

    def serialize(self) -> list[list[str]]:
        return [c.as_pair() for c in self.coeffs]

    @staticmethod
    def deserialize(pairs) -> "Polynomial":
        return Polynomial([GaussianRational.from_pair(p) for p in pairs])

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = "z" if i == 1 else f"z^{i}"
                parts.append(z if c == GR_ONE else f"({c}){z}")
        return " + ".join(parts)


@dataclasses.dataclass(frozen=True)
class NumericPolynomial:
    """Polynomial with multiprecision floating coefficients, ascending powers."""

    coeffs: tuple[mpc, ...]
    precision_bits: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, z: BigComplex) -> BigComplex:
        bits = max(self.precision_bits, z.precision_bits)
        with _ctx(bits):
            acc = mpc(0)
            zz = z.to_mpc()
            for c in reversed(self.coeffs):
                acc = acc * zz + c
        return BigComplex.from_mpc(acc, bits)


def falling_factorial(m: int, j: int) -> int:
    """m(m-1)...(m-j+1); 0 when m < j, 1 when j = 0."""
    if j == 0:
        return 1
    if m < j:
        return 0
    return math.perm(m, j)


def poly_eval(p: Polynomial, z: BigComplex) -> BigComplex:
    """Horner evaluation at the precision of z.

    Exact coefficients are rounded to z's precision once, at use.
    """
    bits = z.precision_bits
    with _ctx(bits):
        zz = z.to_mpc()
        acc = mpc(0)
        for c in reversed(p.coeffs):
            acc = acc * zz + c.to_mpc(bits)
    return BigComplex.from_mpc(acc, bits)


def poly_derivative(p: Polynomial, j: int = 1) -> Polynomial:
    """Exact j-th derivative."""
    if j < 0:
        raise ValueError("derivative order must be nonnegative")
    if j > p.degree:
        return Polynomial.zero()
    out = []
    for m in range(j, len(p.coeffs)):
        out.append(p.coeffs[m] * falling_factorial(m, j))
    return Polynomial(out)


def poly_scale_arg(p: Polynomial, s):
    """Return q with q(z) = p(s*z).

    Exact when s is an exact rational or Gaussian rational; numeric
    (a :class:`NumericPolynomial` at s's precision) when s is a BigComplex.
    """
    if isinstance(s, BigComplex):
        if abs(s) == 0:
            raise InvalidScaleError("scale factor must be nonzero")
        bits = s.precision_bits
        with _ctx(bits):
            ss = s.to_mpc()
            out = []
            power = mpc(1)
            for c in p.coeffs:
                out.append(c.to_mpc(bits) * power)
                power = power * ss
        return NumericPolynomial(tuple(out), bits)
    sc = GaussianRational.coerce(s)
    if sc.is_zero():
        raise InvalidScaleError("scale factor must be nonzero")
    out = []
    power = GR_ONE
    for c in p.coeffs:
        out.append(c * power)
        power = power * sc
    return Polynomial(out)
