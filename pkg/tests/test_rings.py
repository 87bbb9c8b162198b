import random
from fractions import Fraction
from math import comb

import pytest

from kasteleyn.rings import (
    DomainError,
    ExactDivisionError,
    LaurentPoly,
    RationalPoly,
    cyclotomic,
    factor_q_round,
    format_laurent,
    gaussian_binomial,
    integer_squarefree,
    parse_laurent,
    q_integer,
    smooth_factor,
    specialize,
)


def L(text):
    return parse_laurent(text)


def random_laurent(rng, max_terms=5, max_exp=6, max_coeff=9):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.randint(-max_exp, max_exp)] = rng.randint(-max_coeff, max_coeff)
    return LaurentPoly(terms)


class TestQInteger:
    def test_small_values(self):
        assert q_integer(1) == LaurentPoly.one()
        assert q_integer(2) == L("1 + q")
        assert q_integer(3) == L("1 + q + q^2")

    def test_domain_error(self):
        with pytest.raises(DomainError):
            q_integer(0)
        with pytest.raises(DomainError):
            q_integer(-3)

    def test_product_at_one(self):
        for m in range(1, 7):
            for n in range(1, 7):
                assert specialize(q_integer(m) * q_integer(n), 1) == m * n


class TestGaussianBinomial:
    def test_base_cases(self):
        assert gaussian_binomial(2, 1) == q_integer(2)
        for n in range(0, 6):
            assert gaussian_binomial(n, 0) == LaurentPoly.one()
        assert gaussian_binomial(2, 5).is_zero()

    def test_4_choose_2(self):
        # oracle: expand (3)_q (4)_q and divide by (2)_q exactly
        expected = (q_integer(3) * q_integer(4)).divide(q_integer(2))
        assert gaussian_binomial(4, 2) == expected
        assert gaussian_binomial(4, 2) == L("1 + q + 2*q^2 + q^3 + q^4")

    def test_specializes_to_binomial(self):
        for n in range(0, 9):
            for k in range(0, n + 1):
                assert specialize(gaussian_binomial(n, k), 1) == comb(n, k)

    def test_pascal_recurrence(self):
        q = LaurentPoly.q_power(1)
        for n in range(1, 8):
            for k in range(1, n):
                lhs = gaussian_binomial(n, k)
                rhs = gaussian_binomial(n - 1, k - 1) + q ** k * gaussian_binomial(n - 1, k)
                assert lhs == rhs


class TestLaurentArithmetic:
    def test_ring_axioms_randomized(self):
        rng = random.Random(20260808)
        for _ in range(200):
            a, b, c = (random_laurent(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c

    def test_exact_division_roundtrip(self):
        rng = random.Random(17)
        checked = 0
        while checked < 100:
            g = random_laurent(rng)
            h = random_laurent(rng)
            if g.is_zero():
                continue
            f = g * h
            assert f.divide(g) * g == f
            checked += 1

    def test_division_abort(self):
        assert L("q + 2").try_divide(L("2")) is None
        assert L("1 + q + q^2").try_divide(L("1 + q")) is None
        with pytest.raises(ExactDivisionError):
            L("1 + q + q^2").divide(L("1 + q"))

    def test_unit_normalize(self):
        sign, exp, f = L("-q^-2 - q^-1").unit_normalize()
        assert (sign, exp) == (-1, -2)
        assert f == L("1 + q")
        for text in ("q^3", "-5*q^-1 + q^2", "7"):
            g = L(text)
            s, k, h = g.unit_normalize()
            assert LaurentPoly.q_power(k, s) * h == g


class TestSpecialize:
    def test_examples(self):
        assert specialize(q_integer(3), 1) == 3
        assert specialize(q_integer(2), -1) == 0
        assert specialize(L("q^-1 + q"), -1) == -2

    def test_coefficient_sum(self):
        rng = random.Random(99)
        for _ in range(50):
            f = random_laurent(rng)
            assert specialize(f, 1) == sum(c for _, c in f.items())

    def test_zero_with_negative_exponents(self):
        with pytest.raises(DomainError):
            specialize(L("q^-1 + 1"), 0)

    def test_rational_point(self):
        assert specialize(L("q^-1 + q"), Fraction(1, 2)) == Fraction(5, 2)


class TestParsePrint:
    def test_examples_roundtrip(self):
        for text in ("1 - 2*q + q^3", "q^-1 + 1", "0", "-q", "3*q^-2 - 7"):
            f = parse_laurent(text)
            assert parse_laurent(format_laurent(f)) == f
            assert parse_laurent(format_laurent(f, compact=True)) == f

    def test_roundtrip_randomized(self):
        rng = random.Random(4)
        for _ in range(300):
            f = random_laurent(rng)
            assert parse_laurent(format_laurent(f)) == f
            assert parse_laurent(format_laurent(f, compact=True)) == f

    def test_rejects_garbage(self):
        for bad in ("", "q^", "* q", "1 + + q", "x + 1"):
            with pytest.raises(DomainError):
                parse_laurent(bad)


class TestFactorQRound:
    def test_single_q_integer(self):
        out = factor_q_round(L("1 + q + q^2"))
        assert out.success
        assert out.sign == 1 and out.exp == 0
        assert out.factor_names() == ("(3)_q",)

    def test_box_det_factorization(self):
        f = q_integer(2) * q_integer(2) * q_integer(5)
        out = factor_q_round(f)
        assert out.success
        assert sorted(out.factor_names()) == ["(2)_q", "(2)_q", "(5)_q"]
        assert out.rebuild() == f

    def test_unit_extraction(self):
        f = (q_integer(3) * LaurentPoly.q_power(-2, -1))
        out = factor_q_round(f)
        assert out.success
        assert (out.sign, out.exp) == (-1, -2)
        assert out.rebuild() == f

    def test_non_round_witness(self):
        f = L("1 + q + q^3")
        # independent oracle: no cyclotomic of degree <= 3 divides f
        for d in range(1, 2 * 9 + 3):
            phi = cyclotomic(d)
            if phi.span <= 3:
                assert f.try_divide(phi) is None
        out = factor_q_round(f)
        assert not out.success
        assert out.residual == f
        assert out.rebuild() == f

    def test_rebuild_random_products(self):
        rng = random.Random(7)
        for _ in range(40):
            f = LaurentPoly.one()
            for _ in range(rng.randint(1, 4)):
                f = f * q_integer(rng.randint(2, 6))
            f = f.shift(rng.randint(-3, 3))
            if rng.random() < 0.5:
                f = -f
            out = factor_q_round(f)
            assert out.success
            assert out.rebuild() == f

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            factor_q_round(LaurentPoly.zero())


class TestCyclotomic:
    def test_first_few(self):
        assert cyclotomic(1) == L("-1 + q")
        assert cyclotomic(2) == L("1 + q")
        assert cyclotomic(3) == L("1 + q + q^2")
        assert cyclotomic(4) == L("1 + q^2")
        assert cyclotomic(6) == L("1 - q + q^2")

    def test_product_identity(self):
        for n in (4, 6, 12):
            prod = LaurentPoly.one()
            for d in range(1, n + 1):
                if n % d == 0:
                    prod = prod * cyclotomic(d)
            assert prod == LaurentPoly({n: 1, 0: -1})


class TestSmoothFactor:
    def test_examples(self):
        out = smooth_factor(20, 10)
        assert out.primes == (2, 2, 5) and out.residual == 1
        n = 4
        out = smooth_factor(2 ** (n * (n + 1) // 2), 2)
        assert set(out.primes) == {2} and out.residual == 1
        out = smooth_factor(97, 50)
        assert out.primes == () and out.residual == 97

    def test_rebuild_and_sign(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(-10**6, 10**6)
            if n == 0:
                continue
            out = smooth_factor(n, 30)
            assert out.rebuild() == n
            assert all(p <= 30 for p in out.primes)

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            smooth_factor(0, 10)


class TestRationalPoly:
    def test_divmod_and_gcd(self):
        a = RationalPoly((2, 3, 1))   # (q+1)(q+2)
        b = RationalPoly((1, 1))      # q+1
        q, r = a.divmod(b)
        assert r.is_zero() and q == RationalPoly((2, 1))
        assert a.gcd(RationalPoly((3, 4, 1))) == RationalPoly((1, 1))  # (q+1)(q+3)

    def test_gcdext(self):
        a = RationalPoly((0, 0, 1))
        b = RationalPoly((1, 1))
        g, x, y = a.gcdext(b)
        assert g.is_one()
        assert x * a + y * b == g

    def test_laurent_conversion(self):
        f = L("1 + 2*q + q^4")
        assert RationalPoly.from_laurent(f).to_laurent() == f

    def test_primitive_form(self):
        f = RationalPoly((Fraction(1, 2), Fraction(3, 2)))
        assert f.primitive_integer_form() == RationalPoly((1, 3))
        g = RationalPoly((2, -4))
        assert g.primitive_integer_form() == RationalPoly((-1, 2))

    def test_squarefree(self):
        assert RationalPoly((1, 1)).is_squarefree()
        assert not (RationalPoly((1, 1)) * RationalPoly((1, 1))).is_squarefree()


def test_integer_squarefree():
    assert integer_squarefree(1)
    assert integer_squarefree(30)
    assert not integer_squarefree(12)
    assert not integer_squarefree(0)
    assert integer_squarefree(-97)
