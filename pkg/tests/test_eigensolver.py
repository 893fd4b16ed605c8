import json
import os

import pytest

from eigenroots.eigensolver import (
    Eigenpair,
    NonUniqueEigenpolynomialError,
    apply_operator,
    diagonal_entry,
    eigenpolynomial,
    eigenpolynomial_range,
    eigenvalue,
)
from eigenroots.exact import GaussianRational, Polynomial
from eigenroots.operators import Operator


def monic_laguerre(n: int) -> Polynomial:
    """Independent oracle: monic Laguerre via the three-term recurrence."""
    z = Polynomial.of(0, 1)
    prev, cur = Polynomial.of(1), Polynomial.of(-1, 1)
    for m in range(1, n):
        prev, cur = cur, (z - Polynomial.of(2 * m + 1)) * cur - Polynomial.of(m * m) * prev
    return cur if n >= 1 else prev


def monic_hermite(n: int) -> Polynomial:
    """Independent oracle: monic Hermite via h_{m+1} = z h_m - (m/2) h_{m-1}."""
    z = Polynomial.of(0, 1)
    prev, cur = Polynomial.of(1), z
    for m in range(1, n):
        prev, cur = cur, z * cur - Polynomial.of(GaussianRational(f"{m}/2")) * prev
    return cur if n >= 1 else prev


class TestEigenvalue:
    def test_laguerre(self, laguerre):
        for n in (1, 5, 17):
            assert eigenvalue(laguerre, n) == -n

    def test_t2(self, t2):
        assert eigenvalue(t2, 5) == 20

    def test_t3(self, t3):
        assert eigenvalue(t3, 4) == 24


class TestDiagonalEntry:
    def test_t1(self, t1):
        assert diagonal_entry(t1, 5, 2) == -3

    def test_t2(self, t2):
        assert diagonal_entry(t2, 5, 3) == -14

    def test_singular(self, singular3):
        assert diagonal_entry(singular3, 5, 0) == 0


class TestEigenpolynomial:
    def test_laguerre_n2(self, laguerre):
        pair = eigenpolynomial(laguerre, 2)
        assert pair.p == Polynomial.of(2, -4, 1)
        assert pair.lam == -2

    def test_hermite_n2(self, hermite):
        pair = eigenpolynomial(hermite, 2)
        assert pair.p == Polynomial.of("-1/2", 0, 1)
        assert pair.lam == -4

    def test_degree_one(self, t1):
        # alpha_{1,1} = 1, alpha_{1,0} = 0 gives p_1 = z.
        pair = eigenpolynomial(t1, 1)
        assert pair.p == Polynomial.of(0, 1)

    def test_monic_degree_consistency(self, t4):
        for n in (3, 10, 25):
            pair = eigenpolynomial(t4, n)
            assert pair.p.degree == n
            assert pair.p[n] == 1

    def test_below_j0_not_unique(self, t2):
        # For n < j0 the eigenvalue vanishes and T annihilates all of P_n,
        # so every monic polynomial of that degree is an eigenpolynomial.
        with pytest.raises(NonUniqueEigenpolynomialError):
            eigenpolynomial(t2, 1)

    def test_laguerre_recurrence_oracle(self, laguerre):
        for n in range(1, 31):
            assert eigenpolynomial(laguerre, n).p == monic_laguerre(n)

    def test_hermite_recurrence_oracle(self, hermite):
        for n in range(1, 31):
            assert eigenpolynomial(hermite, n).p == monic_hermite(n)

    def test_exact_residual_zero(self, t5):
        for n in (6, 7, 20):
            pair = eigenpolynomial(t5, n)
            residual = apply_operator(t5, pair.p) - pair.p * pair.lam
            assert residual.is_zero()

    def test_uniqueness_single_diagonal_term(self, laguerre, t2):
        # Exactly one j with deg Q_j = j: unique for every n >= j0; for
        # j0 = 1 that is every positive degree.
        for n in range(1, 201):
            eigenpolynomial(laguerre, n)
        for n in range(2, 201):
            eigenpolynomial(t2, n)

    def test_invalid_degree(self, laguerre):
        with pytest.raises(ValueError):
            eigenpolynomial(laguerre, 0)

    def test_singular_diagonal_reports_row(self, singular3):
        with pytest.raises(NonUniqueEigenpolynomialError) as exc:
            eigenpolynomial(singular3, 5)
        assert exc.value.n == 5
        assert exc.value.s == 0


class TestBatchAndCache:
    def test_range_matches_per_n(self, laguerre):
        pairs, failures = eigenpolynomial_range(laguerre, [1, 2])
        assert failures == []
        assert [p.p for p in pairs] == [Polynomial.of(-1, 1), Polynomial.of(2, -4, 1)]

    def test_empty_batch(self, laguerre):
        assert eigenpolynomial_range(laguerre, []) == ([], [])

    def test_batch_continues_past_failure(self, singular3):
        pairs, failures = eigenpolynomial_range(singular3, [5, 6, 7])
        assert [p.n for p in pairs] == [6, 7]
        assert [n for n, _ in failures] == [5]

    def test_cache_roundtrip(self, laguerre, tmp_path):
        cache = str(tmp_path)
        pair = eigenpolynomial(laguerre, 12, cache_dir=cache)
        files = [f for f in os.listdir(cache) if f.endswith(".json")]
        assert files == [f"{laguerre.digest()}-12.json"]
        with open(os.path.join(cache, files[0])) as fh:
            payload = json.load(fh)
        assert payload["n"] == 12
        restored = Eigenpair(
            n=payload["n"],
            lam=GaussianRational.from_pair(payload["lambda"]),
            p=Polynomial.deserialize(payload["coeffs"]),
            operator_digest=laguerre.digest(),
        )
        assert restored.p == pair.p and restored.lam == pair.lam

    def test_cache_no_temp_leftovers(self, t3, tmp_path):
        cache = str(tmp_path)
        eigenpolynomial_range(t3, [4, 5, 6], cache_dir=cache)
        assert not [f for f in os.listdir(cache) if f.endswith(".tmp")]

    def test_digest_separates_operators(self, laguerre, hermite, tmp_path):
        cache = str(tmp_path)
        a = eigenpolynomial(laguerre, 3, cache_dir=cache)
        b = eigenpolynomial(hermite, 3, cache_dir=cache)
        assert a.operator_digest != b.operator_digest
        assert a.p != b.p
        assert len(os.listdir(cache)) == 2
