import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kwise_moments.combinatorics import (
    FACTORIAL_CACHE_CAP,
    as_fraction,
    binomial,
    elementary_symmetric,
    factorial,
    format_rational,
    multinomial,
    rational_log,
    stirling_estimate,
    symmetric_mean,
)


# ---------------------------------------------------------------- oracles

def factorial_oracle(m):
    # plain iterative product, no shared code with the implementation
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


def pascal_oracle(n, ell):
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[ell] if 0 <= ell < len(row) else 0


def subset_sum_oracle(ell, values):
    return sum(
        (math.prod(c) for c in itertools.combinations(values, ell)),
        Fraction(0),
    )


# ---------------------------------------------------------------- factorial

def test_factorial_small():
    assert factorial(0) == 1
    assert factorial(5) == 120


def test_factorial_20_vs_iterative_oracle():
    assert factorial(20) == factorial_oracle(20) == 2432902008176640000


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        factorial(-1)


def test_factorial_above_cache_cap():
    m = FACTORIAL_CACHE_CAP + 3
    assert factorial(m) == math.factorial(m)


def test_factorial_matches_oracle_up_to_60():
    for m in range(61):
        assert factorial(m) == factorial_oracle(m)


# ---------------------------------------------------------------- binomial

def test_binomial_examples():
    assert binomial(3, 2) == 3
    assert binomial(5, 7) == 0
    assert binomial(10, 5) == pascal_oracle(10, 5) == 252


def test_binomial_zero_extension():
    assert binomial(4, -1) == 0
    assert binomial(0, 0) == 1
    with pytest.raises(ValueError):
        binomial(-2, 1)


def test_binomial_pascal_rows():
    for n in range(0, 16):
        for ell in range(-1, n + 2):
            assert binomial(n, ell) == pascal_oracle(n, ell)


# ---------------------------------------------------------------- multinomial

def test_multinomial_examples():
    assert multinomial(4, [2, 2]) == 6
    assert multinomial(4, [-1, 5]) == 0
    assert multinomial(6, [2, 2, 2]) == 90
    # direct factorial-ratio oracle for the last one
    assert multinomial(6, [2, 2, 2]) == factorial_oracle(6) // (2 * 2 * 2)


def test_multinomial_zero_when_sum_mismatch():
    assert multinomial(5, [2, 2]) == 0
    assert multinomial(4, [4, 1]) == 0


def test_multinomial_domain():
    with pytest.raises(ValueError):
        multinomial(-1, [1])
    with pytest.raises(ValueError):
        multinomial(3, [])


def test_multinomial_theorem_all_ones():
    # sum over compositions with nonnegative entries of fixed length L equals
    # L^d; exhaustive for d <= 8, L <= 4
    for d in range(0, 9):
        for length in range(1, 5):
            total = 0
            for j in itertools.product(range(d + 1), repeat=length):
                total += multinomial(d, list(j))
            assert total == length ** d


# ---------------------------------------------------------------- rationals

def test_as_fraction_forms():
    assert as_fraction(Fraction(2, 6)) == Fraction(1, 3)
    assert as_fraction(3) == Fraction(3)
    assert as_fraction("2/8") == Fraction(1, 4)
    assert as_fraction("0.25") == Fraction(1, 4)
    assert as_fraction(0.5) == Fraction(1, 2)


def test_as_fraction_rejects_bool_and_junk():
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(TypeError):
        as_fraction([1, 2])
    with pytest.raises(ValueError):
        as_fraction("not-a-number")


def test_format_rational():
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(2) == "2/1"
    assert format_rational("0.5") == "1/2"


def test_rational_log():
    huge = Fraction(10 ** 400, 3)
    assert rational_log(huge) == pytest.approx(400 * math.log(10) - math.log(3))
    with pytest.raises(ValueError):
        rational_log(Fraction(0))


# ---------------------------------------------------------------- symmetric polynomials

def test_elementary_symmetric_examples():
    a, b, c = Fraction(2), Fraction(3, 2), Fraction(-1, 3)
    assert elementary_symmetric(1, [a, b, c]) == a + b + c
    assert elementary_symmetric(2, [1, 1, 1]) == 3
    vals = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
    # 1/6 + 1/8 + 1/12
    assert elementary_symmetric(2, vals) == Fraction(3, 8)
    assert elementary_symmetric(2, vals) == subset_sum_oracle(2, vals)


def test_elementary_symmetric_rejects_bad_degree():
    with pytest.raises(ValueError):
        elementary_symmetric(0, [1, 2])
    with pytest.raises(ValueError):
        elementary_symmetric(3, [1, 2])


@given(st.lists(st.fractions(min_value=-3, max_value=3), min_size=1, max_size=8))
@settings(max_examples=120, deadline=None)
def test_elementary_symmetric_matches_subset_enumeration(values):
    for ell in range(1, len(values) + 1):
        assert elementary_symmetric(ell, values) == subset_sum_oracle(ell, values)


def test_symmetric_mean_examples():
    assert symmetric_mean(1, [2, 4]) == 3
    # equal arguments: S_ell = c^ell, the Maclaurin equality case
    c = Fraction(3, 7)
    for ell in range(1, 5):
        assert symmetric_mean(ell, [c] * 5) == c ** ell
    vals = [Fraction(1), Fraction(2), Fraction(3)]
    assert symmetric_mean(2, vals) == subset_sum_oracle(2, vals) / 3
    assert symmetric_mean(2, vals) == Fraction(11, 3)


positive_lists = st.lists(
    st.fractions(min_value=Fraction(1, 16), max_value=8), min_size=2, max_size=12)


@given(positive_lists)
@settings(max_examples=150, deadline=None)
def test_newton_inequality(values):
    # S_{l-1} S_{l+1} <= S_l^2, exact rational comparison
    n = len(values)
    for ell in range(2, n):
        left = symmetric_mean(ell - 1, values) * symmetric_mean(ell + 1, values)
        assert left <= symmetric_mean(ell, values) ** 2


@given(positive_lists)
@settings(max_examples=150, deadline=None)
def test_maclaurin_chain_by_cross_powers(values):
    # S_l^{1/l} >= S_m^{1/m} for l < m, compared as S_l^m >= S_m^l to stay
    # in exact arithmetic
    n = len(values)
    for ell in range(1, n):
        for m in range(ell + 1, n + 1):
            s_l = symmetric_mean(ell, values)
            s_m = symmetric_mean(m, values)
            assert s_l ** m >= s_m ** ell


def test_maclaurin_equality_at_equal_arguments():
    c = Fraction(5, 9)
    values = [c] * 6
    for ell in range(1, 6):
        for m in range(ell + 1, 7):
            assert symmetric_mean(ell, values) ** m == symmetric_mean(m, values) ** ell


# ---------------------------------------------------------------- stirling

def test_stirling_direct_values():
    assert stirling_estimate(1) == pytest.approx(math.exp(-1))
    ratio10 = factorial(10) / stirling_estimate(10)
    assert 1.0 <= ratio10 <= math.e


def test_stirling_ratio_at_20():
    # frozen against direct evaluation: 20!/ (sqrt(20) (20/e)^20) = 2.517093...
    ratio = factorial(20) / stirling_estimate(20)
    assert ratio == pytest.approx(2.517093, abs=5e-7)


def test_stirling_ratio_window():
    # the ratio decreases from e toward sqrt(2 pi)
    lo, hi = math.sqrt(2 * math.pi), math.e
    for m in range(1, 31):
        ratio = factorial(m) / stirling_estimate(m)
        assert lo <= ratio <= hi


def test_stirling_rejects_zero():
    with pytest.raises(ValueError):
        stirling_estimate(0)
