"""Exact integer and rational combinatorics.

Everything in this module is exact: arbitrary-precision integers, reduced
fractions, no floating point except for the explicitly approximate Stirling
estimate at the bottom.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Sequence, Union

RationalLike = Union[Fraction, int, str, float]

# Factorials below this index are memoized; larger arguments fall through to
# math.factorial on every call.
FACTORIAL_CACHE_CAP = 4096

_fact_cache: list[int] = [1, 1]
_fact_lock = threading.Lock()


def factorial(m: int) -> int:
    """Exact m! for m >= 0, memoized up to FACTORIAL_CACHE_CAP."""
    if m < 0:
        raise ValueError(f"factorial requires m >= 0, got {m}")
    if m >= FACTORIAL_CACHE_CAP:
        return math.factorial(m)
    if m >= len(_fact_cache):
        with _fact_lock:
            # re-check under the lock; entries are idempotent so a race is
            # harmless, the lock only avoids duplicated work
            last = len(_fact_cache)
            while last <= m:
                _fact_cache.append(_fact_cache[-1] * last)
                last += 1
    return _fact_cache[m]


def binomial(n: int, ell: int) -> int:
    """Exact C(n, ell) with the usual zero extension outside 0 <= ell <= n."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got {n}")
    if ell < 0 or ell > n:
        return 0
    return math.comb(n, ell)


def multinomial(d: int, entries: Sequence[int]) -> int:
    """Exact multinomial coefficient d! / prod(entries[i]!).

    Zero extension: any negative entry, or entries not summing to d, gives 0
    rather than an error.  Entries must be a nonempty sequence of ints.
    """
    if d < 0:
        raise ValueError(f"multinomial requires d >= 0, got {d}")
    if len(entries) == 0:
        raise ValueError("multinomial requires at least one entry")
    if any(j < 0 for j in entries) or sum(entries) != d:
        return 0
    out = factorial(d)
    for j in entries:
        out //= factorial(j)
    return out


def as_fraction(x: RationalLike) -> Fraction:
    """Coerce to an exact Fraction.

    Strings accept both "num/den" and decimal forms; decimals convert exactly
    via scaled integers ("0.25" -> 1/4).  Floats convert to their exact binary
    value, so prefer strings or Fractions where exactness of intent matters.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def format_rational(x: RationalLike) -> str:
    """Render a rational as the canonical "num/den" string (den always shown)."""
    f = as_fraction(x)
    return f"{f.numerator}/{f.denominator}"


def elementary_symmetric(ell: int, values: Sequence[RationalLike]) -> Fraction:
    """Exact elementary symmetric polynomial e_ell over the given values.

    Uses the one-pass product recurrence (degree-capped), never subset
    enumeration, so cost is O(len(values) * ell).
    """
    n = len(values)
    if not 1 <= ell <= n:
        raise ValueError(f"elementary_symmetric requires 1 <= ell <= {n}, got {ell}")
    acc = [Fraction(1)] + [Fraction(0)] * ell
    seen = 0
    for raw in values:
        x = as_fraction(raw)
        seen += 1
        for j in range(min(ell, seen), 0, -1):
            acc[j] += acc[j - 1] * x
    return acc[ell]


def symmetric_mean(ell: int, values: Sequence[RationalLike]) -> Fraction:
    """Normalized symmetric mean S_ell = e_ell / C(n, ell), exact."""
    n = len(values)
    e = elementary_symmetric(ell, values)
    return e / binomial(n, ell)


def stirling_estimate(m: int) -> float:
    """Crude Stirling estimate sqrt(m) * (m/e)^m (no 2*pi factor).

    For 1 <= m <= 30 the true factorial exceeds this by a factor between
    sqrt(2*pi) and e; see the tests for the recorded window.
    """
    if m < 1:
        raise ValueError(f"stirling_estimate requires m >= 1, got {m}")
    return math.exp(0.5 * math.log(m) + m * (math.log(m) - 1.0))


def rational_log(x: RationalLike) -> float:
    """Natural log of a positive rational, safe for huge numerators/denominators."""
    f = as_fraction(x)
    if f <= 0:
        raise ValueError(f"rational_log requires a positive value, got {f}")
    return math.log(f.numerator) - math.log(f.denominator)
