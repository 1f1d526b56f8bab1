import itertools
import math
from fractions import Fraction

import pytest

from kwise_moments.combinatorics import factorial
from kwise_moments.distributions import DiscretePMF, binomial_pmf, three_point
from kwise_moments.exact_moments import (
    composition_weight,
    dth_root_decimal,
    exact_moment_het_threepoint,
    exact_moment_iid_threepoint,
    exact_moment_symmetrized_binomial,
    het_threepoint_upper_bound,
    to_decimal,
)
from kwise_moments.oracle import moment_of_sum


# ---------------------------------------------------------------- oracles

def composition_weight_oracle(d, parts):
    """Literal enumeration of positive compositions of d/2; exponential, so
    only usable at desk scale (d <= 12)."""
    half = d // 2
    total = 0
    for cuts in itertools.combinations(range(1, half), parts - 1):
        parts_list = []
        prev = 0
        for cut in cuts:
            parts_list.append(cut - prev)
            prev = cut
        parts_list.append(half - prev)
        term = factorial(d)
        for j in parts_list:
            term //= factorial(2 * j)
        total += term
    return total


def symmetrized_binomial_oracle(n, p, d):
    # enumerate the joint law of (S, S') directly
    law = binomial_pmf(n, p)
    total = Fraction(0)
    for v1, p1 in law.atoms:
        for v2, p2 in law.atoms:
            total += p1 * p2 * (v1 - v2) ** d
    return total


# ---------------------------------------------------------------- composition weights

def test_weight_examples():
    assert composition_weight(4, 1) == 1
    assert composition_weight(4, 2) == 6
    assert composition_weight(6, 2) == 30
    assert composition_weight(6, 3) == 90


def test_weight_matches_enumeration_up_to_12():
    for d in range(2, 13, 2):
        for parts in range(1, d // 2 + 1):
            assert composition_weight(d, parts) == composition_weight_oracle(d, parts)


def test_weight_domain():
    with pytest.raises(ValueError):
        composition_weight(5, 1)
    with pytest.raises(ValueError):
        composition_weight(4, 0)
    with pytest.raises(ValueError):
        composition_weight(4, 3)


def test_weight_growth_window():
    # weight^{1/d} stays within [ell/e^2, ell]; the observed floor over
    # d <= 64 is 0.545225 at (64, 32) and must not degrade
    floor = math.inf
    for d in range(2, 65, 2):
        for ell in range(1, d // 2 + 1):
            w = composition_weight(d, ell)
            ratio = math.exp(math.log(w) / d) / ell
            assert math.exp(-2) <= ratio <= 1.0 + 1e-12
            floor = min(floor, ratio)
    assert 0.545 <= floor <= 0.5453


# ---------------------------------------------------------------- iid moments

def test_iid_variance_order():
    for n in (1, 3, 17):
        for s2 in (Fraction(1, 8), Fraction(1, 2), Fraction(1)):
            assert exact_moment_iid_threepoint(n, 2, s2) == n * s2


def test_iid_examples():
    assert exact_moment_iid_threepoint(3, 4, Fraction(1, 2)) == 6
    # single summand: every even moment equals the variance
    assert exact_moment_iid_threepoint(1, 4, Fraction(1, 4)) == Fraction(1, 4)
    assert exact_moment_iid_threepoint(1, 12, Fraction(1, 4)) == Fraction(1, 4)
    assert exact_moment_iid_threepoint(4, 6, 0) == 0


def test_iid_matches_convolution_oracle_desk_sample():
    # spot sample here; the full grid is the acceptance gate
    for n in (2, 5, 8):
        for d in (4, 8, 12):
            for s2 in (Fraction(1, 8), Fraction(3, 4)):
                assert exact_moment_iid_threepoint(n, d, s2) == \
                    moment_of_sum([three_point(s2)] * n, d)


def test_iid_domain():
    with pytest.raises(ValueError):
        exact_moment_iid_threepoint(0, 4, Fraction(1, 2))
    with pytest.raises(ValueError):
        exact_moment_iid_threepoint(3, 5, Fraction(1, 2))
    with pytest.raises(ValueError):
        exact_moment_iid_threepoint(3, 4, Fraction(9, 8))


def test_iid_monotone_in_sigma2_and_n():
    grid = [Fraction(k, 8) for k in range(1, 9)]
    for d in (2, 6, 10):
        for a, b in zip(grid, grid[1:]):
            assert exact_moment_iid_threepoint(4, d, a) <= \
                exact_moment_iid_threepoint(4, d, b)
        for n in range(1, 8):
            assert exact_moment_iid_threepoint(n, d, Fraction(1, 4)) <= \
                exact_moment_iid_threepoint(n + 1, d, Fraction(1, 4))


# ---------------------------------------------------------------- heterogeneous

def test_het_reduces_to_iid_at_equal_arguments():
    for n in (1, 2, 5):
        for d in (2, 6, 10):
            s2 = Fraction(3, 8)
            assert exact_moment_het_threepoint(d, [s2] * n) == \
                exact_moment_iid_threepoint(n, d, s2)


def test_het_examples():
    vs = [Fraction(1, 2), Fraction(1, 3)]
    assert exact_moment_het_threepoint(2, vs) == Fraction(5, 6)
    assert exact_moment_het_threepoint(4, vs) == Fraction(11, 6)
    assert exact_moment_het_threepoint(4, vs) == \
        moment_of_sum([three_point(v) for v in vs], 4)


def test_het_domain():
    with pytest.raises(ValueError):
        exact_moment_het_threepoint(4, [])
    with pytest.raises(ValueError):
        exact_moment_het_threepoint(3, [Fraction(1, 2)])
    with pytest.raises(ValueError):
        exact_moment_het_threepoint(4, [Fraction(3, 2)])


def test_het_majorized_by_iid_at_mean_variance():
    # each elementary symmetric term is maximized at equal arguments
    cases = [
        [Fraction(1, 2), Fraction(1, 4)],
        [Fraction(1), Fraction(1, 8), Fraction(3, 8)],
        [Fraction(k, 16) for k in (1, 5, 9, 13)],
    ]
    for vs in cases:
        mean = sum(vs, Fraction(0)) / len(vs)
        for d in (4, 6, 8, 10):
            assert exact_moment_het_threepoint(d, vs) <= \
                exact_moment_iid_threepoint(len(vs), d, mean)


def test_het_upper_bound_same_value():
    vs = [Fraction(1, 2), Fraction(1, 5), Fraction(2, 3)]
    assert het_threepoint_upper_bound(6, vs) == exact_moment_het_threepoint(6, vs)


def test_het_upper_bound_dominates_general_unit_range_law():
    # interior-mass symmetric components: the same expression is a strict
    # upper bound rather than an equality
    half = DiscretePMF([(Fraction(-1, 2), Fraction(1, 2)),
                        (Fraction(1, 2), Fraction(1, 2))])
    actual = moment_of_sum([half] * 3, 4)
    bound = het_threepoint_upper_bound(4, [half.variance()] * 3)
    assert actual < bound


# ---------------------------------------------------------------- symmetrized binomial

def test_symbinom_variance_order():
    for n in (1, 4, 9):
        p = Fraction(1, 3)
        assert exact_moment_symmetrized_binomial(n, p, 2) == 2 * n * p * (1 - p)


def test_symbinom_example_and_oracle():
    assert exact_moment_symmetrized_binomial(2, Fraction(1, 2), 4) == Fraction(5, 2)
    for n in (1, 2, 3):
        for p in (Fraction(1, 4), Fraction(1, 2)):
            for d in (2, 4, 6):
                assert exact_moment_symmetrized_binomial(n, p, d) == \
                    symmetrized_binomial_oracle(n, p, d)


def test_symbinom_degenerate_and_domain():
    assert exact_moment_symmetrized_binomial(3, 0, 4) == 0
    with pytest.raises(ValueError):
        exact_moment_symmetrized_binomial(3, Fraction(2, 3), 4)


# ---------------------------------------------------------------- rendering

def test_to_decimal():
    assert to_decimal(Fraction(1, 3)) == "0.333333333333"
    assert to_decimal(Fraction(2, 3)) == "0.666666666667"
    assert to_decimal(Fraction(-5, 2), digits=3) == "-2.500"
    assert to_decimal(6) == "6.000000000000"
    with pytest.raises(ValueError):
        to_decimal(Fraction(1, 3), digits=0)


def test_dth_root_decimal():
    assert float(dth_root_decimal(16, 4)) == pytest.approx(2.0, rel=1e-11)
    assert dth_root_decimal(0, 6) == "0.000000000000"
    # huge rationals must not overflow the float path
    big = Fraction(10 ** 500, 7)
    assert float(dth_root_decimal(big, 10)) == pytest.approx(
        math.exp((500 * math.log(10) - math.log(7)) / 10), rel=1e-9)
    with pytest.raises(ValueError):
        dth_root_decimal(-1, 2)
    with pytest.raises(ValueError):
        dth_root_decimal(4, 0)
