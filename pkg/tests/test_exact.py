import math

import gmpy2
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenroots.exact import (
    BigComplex,
    GaussianRational,
    InvalidScaleError,
    NumericPolynomial,
    Polynomial,
    falling_factorial,
    poly_derivative,
    poly_eval,
    poly_scale_arg,
)

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
).map(lambda f: mpq(f.numerator, f.denominator))

gaussians = st.builds(GaussianRational, rationals, rationals)

polynomials = st.lists(gaussians, max_size=6).map(Polynomial)


class TestGaussianRational:
    def test_lowest_terms_positive_denominator(self):
        q = GaussianRational("2/-4", "6/8")
        assert q.re.numerator == -1 and q.re.denominator == 2
        assert q.im.numerator == 3 and q.im.denominator == 4

    def test_arithmetic(self):
        a = GaussianRational(1, 2)
        b = GaussianRational("1/2", -1)
        assert a + b == GaussianRational("3/2", 1)
        assert a - b == GaussianRational("1/2", 3)
        assert a * b == GaussianRational("5/2", 0)
        assert (a / b) * b == a

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / GaussianRational(0)

    def test_serialization_roundtrip(self):
        q = GaussianRational("-7/3", "22")
        assert GaussianRational.from_pair(q.as_pair()) == q
        assert q.as_pair() == ["-7/3", "22"]

    @given(gaussians, gaussians)
    def test_equality_is_exact(self, a, b):
        assert (a == b) == (a.re == b.re and a.im == b.im)

    @given(gaussians, gaussians, gaussians)
    def test_distributivity(self, a, b, c):
        assert a * (b + c) == a * b + a * c


class TestBigComplex:
    def test_minimum_precision_enforced(self):
        with pytest.raises(ValueError):
            BigComplex.from_complex(1 + 1j, 32)

    def test_arithmetic_carries_max_precision(self):
        a = BigComplex.from_complex(1 + 2j, 64)
        b = BigComplex.from_complex(3 - 1j, 256)
        assert (a + b).precision_bits == 256
        assert (a * b).precision_bits == 256

    def test_roundtrip(self):
        z = BigComplex.from_complex(0.5 - 0.25j, 128)
        assert z.to_complex() == 0.5 - 0.25j


class TestPolynomial:
    def test_trailing_zeros_trimmed(self):
        p = Polynomial([1, 2, 0, 0])
        assert p.degree == 1
        assert Polynomial([0, 0]).is_zero()
        assert Polynomial.zero().degree == -1

    def test_product(self):
        p = Polynomial.of(-1, 1)  # z - 1
        q = Polynomial.of(1, 1)  # z + 1
        assert p * q == Polynomial.of(-1, 0, 1)

    def test_serialization_roundtrip(self):
        p = Polynomial.of("1/3", ["0", "-2"], 7)
        assert Polynomial.deserialize(p.serialize()) == p


class TestPolyEval:
    def test_constant_term(self):
        p = Polynomial.of(2, -4, 1)
        z = BigComplex.from_complex(0j, 64)
        assert poly_eval(p, z).to_complex() == 2

    def test_quadratic_root(self):
        # 2 + sqrt(2) is a root of z^2 - 4z + 2.
        bits = 128
        with gmpy2.context(precision=bits):
            root = 2 + gmpy2.sqrt(gmpy2.mpfr(2))
        p = Polynomial.of(2, -4, 1)
        z = BigComplex(root, gmpy2.mpfr(0), bits)
        scale = max(abs(c.to_complex()) * abs(float(root)) ** i for i, c in enumerate(p.coeffs))
        assert abs(poly_eval(p, z).to_complex()) <= 2.0 ** (1 - bits) * scale

    def test_zero_polynomial(self):
        z = BigComplex.from_complex(3 + 4j, 64)
        assert poly_eval(Polynomial.zero(), z).to_complex() == 0

    @given(polynomials, st.complex_numbers(max_magnitude=10, allow_nan=False))
    @settings(max_examples=50)
    def test_doubled_precision_agrees(self, p, z):
        lo = poly_eval(p, BigComplex.from_complex(z, 64)).to_complex()
        hi = poly_eval(p, BigComplex.from_complex(z, 128)).to_complex()
        bound = sum(
            abs(c.to_complex()) * abs(z) ** i for i, c in enumerate(p.coeffs)
        )
        assert abs(lo - hi) <= 2.0**-48 * (1 + bound)


class TestPolyDerivative:
    def test_power_rule(self):
        p = Polynomial.of("-1/2", 0, 1)  # z^2 - 1/2
        assert poly_derivative(p) == Polynomial.of(0, 2)

    def test_past_degree(self):
        p = Polynomial.of("-1/2", 0, 1)
        assert poly_derivative(p, 3).is_zero()

    def test_second_derivative(self):
        p = Polynomial.of(-6, 18, -9, 1)
        assert poly_derivative(p, 2) == Polynomial.of(-18, 6)

    @given(polynomials, st.integers(0, 3), st.integers(0, 3))
    @settings(max_examples=50)
    def test_composition(self, p, a, b):
        assert poly_derivative(poly_derivative(p, a), b) == poly_derivative(p, a + b)


class TestPolyScaleArg:
    def test_direct_substitution(self):
        p = Polynomial.of(2, -4, 1)
        assert poly_scale_arg(p, 2) == Polynomial.of(2, -8, 4)

    def test_identity(self):
        p = Polynomial.of(3, "1/7", 0, 5)
        assert poly_scale_arg(p, 1) == p

    def test_monomial(self):
        assert poly_scale_arg(Polynomial.monomial(3), "1/2") == Polynomial.of(
            0, 0, 0, "1/8"
        )

    def test_zero_scale_rejected(self):
        with pytest.raises(InvalidScaleError):
            poly_scale_arg(Polynomial.of(1, 1), 0)
        with pytest.raises(InvalidScaleError):
            poly_scale_arg(Polynomial.of(1, 1), BigComplex.from_complex(0j, 64))

    def test_numeric_path(self):
        p = Polynomial.of(0, 0, 1)  # z^2
        s = BigComplex.from_complex(2 + 0j, 96)
        q = poly_scale_arg(p, s)
        assert isinstance(q, NumericPolynomial)
        assert q.precision_bits == 96
        z = BigComplex.from_complex(3 + 0j, 96)
        assert q.eval(z).to_complex() == pytest.approx(36.0)

    @given(polynomials, polynomials, rationals.filter(lambda q: q != 0))
    @settings(max_examples=50)
    def test_multiplicative(self, p, q, s):
        assert poly_scale_arg(p * q, s) == poly_scale_arg(p, s) * poly_scale_arg(q, s)


class TestFallingFactorial:
    def test_examples(self):
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(2, 3) == 0
        assert falling_factorial(7, 0) == 1

    @given(st.integers(0, 40), st.integers(0, 12))
    def test_against_factorials(self, m, j):
        expected = math.factorial(m) // math.factorial(m - j) if m >= j else 0
        assert falling_factorial(m, j) == expected
