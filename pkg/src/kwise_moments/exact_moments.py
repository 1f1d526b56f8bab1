"""Closed-form exact moments of sums of symmetric three-valued variables.

For independent symmetric summands taking values in {-1, 0, +1} the even
moment E (Z_1 + ... + Z_n)^d is a polynomial in the individual variances.
The coefficient attached to a given number of distinct participating
summands is the composition weight computed here by dynamic programming.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .combinatorics import (
    RationalLike,
    as_fraction,
    binomial,
    elementary_symmetric,
    factorial,
    rational_log,
)


@lru_cache(maxsize=None)
def _inv_even_factorial_sum(half: int, parts: int) -> Fraction:
    # Sum over compositions (j_1, ..., j_parts), j_i >= 1, sum j_i = half,
    # of prod_i 1/(2 j_i)!.  Recursing on the last part keeps this polynomial
    # time; the composition count itself is exponential.
    if parts == 0:
        return Fraction(1) if half == 0 else Fraction(0)
    if half < parts:
        return Fraction(0)
    total = Fraction(0)
    for j in range(1, half - parts + 2):
        total += _inv_even_factorial_sum(half - j, parts - 1) / factorial(2 * j)
    return total


def composition_weight(d: int, parts: int) -> int:
    """Total multinomial weight of splitting d slots into `parts` ordered
    groups of even size >= 2: sum over compositions (j_1..j_parts) of d/2 of
    d! / prod (2 j_i)!.  Computed by DP, never by enumeration.
    """
    if d < 2 or d % 2 != 0:
        raise ValueError(f"composition_weight requires even d >= 2, got {d}")
    if not 1 <= parts <= d // 2:
        raise ValueError(
            f"composition_weight requires 1 <= parts <= d/2 = {d // 2}, got {parts}")
    w = _inv_even_factorial_sum(d // 2, parts) * factorial(d)
    assert w.denominator == 1
    return w.numerator


def exact_moment_iid_threepoint(n: int, d: int, sigma2: RationalLike) -> Fraction:
    """Exact E |Z_1 + ... + Z_n|^d for iid three-point(sigma2) summands,
    even d: sum over ell of weight(d, ell) * C(n, ell) * sigma2^ell."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if d < 2 or d % 2 != 0:
        raise ValueError(f"need even d >= 2, got {d}")
    s2 = as_fraction(sigma2)
    if s2 < 0 or s2 > 1:
        raise ValueError(f"need 0 <= sigma2 <= 1, got {s2}")
    if s2 == 0:
        return Fraction(0)
    total = Fraction(0)
    power = Fraction(1)
    for ell in range(1, min(d // 2, n) + 1):
        power *= s2
        total += composition_weight(d, ell) * binomial(n, ell) * power
    return total


def exact_moment_het_threepoint(d: int, sigma2s: Sequence[RationalLike]) -> Fraction:
    """Exact E |sum Z_i|^d for independent three-point(sigma2_i) summands:
    sum over ell of weight(d, ell) * e_ell(sigma2_1, ..., sigma2_n).

    The identity holds exactly for any independent symmetric summands taking
    values in {-1, 0, +1}; for general symmetric [-1, 1] summands the same
    expression is only an upper bound (see het_threepoint_upper_bound).
    """
    if d < 2 or d % 2 != 0:
        raise ValueError(f"need even d >= 2, got {d}")
    if len(sigma2s) == 0:
        raise ValueError("need at least one summand variance")
    vs = [as_fraction(s) for s in sigma2s]
    for v in vs:
        if v < 0 or v > 1:
            raise ValueError(f"variance {v} outside [0, 1]")
    total = Fraction(0)
    for ell in range(1, min(d // 2, len(vs)) + 1):
        total += composition_weight(d, ell) * elementary_symmetric(ell, vs)
    return total


def het_threepoint_upper_bound(d: int, sigma2s: Sequence[RationalLike]) -> Fraction:
    """Upper bound on E |sum X_i|^d for independent symmetric [-1, 1]-valued
    summands with the given variances.  Same value as the exact heterogeneous
    three-point moment; carried under a separate name because the contract
    (an inequality, tight only on {-1, 0, +1} laws) is different."""
    return exact_moment_het_threepoint(d, sigma2s)


def exact_moment_symmetrized_binomial(n: int, p: RationalLike, d: int) -> Fraction:
    """Exact E |S - S'|^d for S, S' iid Binomial(n, p).

    S - S' is a sum of n iid differences of Bernoullis, each a three-point
    law with variance 2p(1-p), so this reduces to the iid formula.
    """
    pf = as_fraction(p)
    if pf < 0 or pf > Fraction(1, 2):
        raise ValueError(f"need 0 <= p <= 1/2, got {pf}")
    return exact_moment_iid_threepoint(n, d, 2 * pf * (1 - pf))


def to_decimal(x: RationalLike, digits: int = 12) -> str:
    """Exactly rounded decimal rendering of a rational with `digits` places."""
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    f = as_fraction(x)
    scaled = round(f * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def dth_root_decimal(x: RationalLike, d: int, digits: int = 12) -> str:
    """Decimal string for x^(1/d), float precision (the root is irrational in
    general, so unlike to_decimal this is an approximation)."""
    f = as_fraction(x)
    if f < 0:
        raise ValueError("dth_root_decimal requires a nonnegative value")
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    if f == 0:
        return to_decimal(0, digits)
    root = math.exp(rational_log(f) / d)
    return f"{root:.{digits}g}"
