"""Classical moment bounds to compare against, on a common d-th-root scale.

All functions return bounds on E^(1/d) |S - ES|^d for a sum S of n bounded
([-1, 1] after centering conventions) variables with per-variable variance
sigma2, so values are directly comparable with the sharp bound.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .sharp_bounds import BoundQuery, moment_bound

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BaselineQuery:
    """n, even d, variance sigma2, and (optionally) a mean parameter mu with
    sigma2 <= mu <= 1, needed only by the mean-based baseline."""
    n: int
    d: int
    sigma2: float
    mu: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.d < 2 or self.d % 2 != 0:
            raise ValueError(f"need even d >= 2, got {self.d}")
        if not (0.0 < self.sigma2 <= 1.0):
            raise ValueError(f"need 0 < sigma2 <= 1, got {self.sigma2}")
        if self.mu is not None and not (self.sigma2 <= self.mu <= 1.0):
            raise ValueError(
                f"need sigma2 <= mu <= 1, got mu={self.mu}, sigma2={self.sigma2}")


def _log_cosh(x: float) -> float:
    # cosh overflows around x ~ 710; the shifted form is exact enough long
    # before that and avoids the overflow entirely
    if x > 30.0:
        return x + math.log1p(math.exp(-2.0 * x)) - LN2
    return math.log(math.cosh(x))


def schmidt_raw(q: BaselineQuery, big_c: float) -> float:
    """d-th root of sqrt(2) * cosh(sqrt(d^3 / (36 C))) * (d C / e)^(d/2),
    valid for any C >= n sigma2.  Evaluated in the log domain."""
    if big_c < q.n * q.sigma2:
        raise ValueError(
            f"need C >= n*sigma2 = {q.n * q.sigma2}, got C = {big_c}")
    log_val = (0.5 * LN2
               + _log_cosh(math.sqrt(q.d ** 3 / (36.0 * big_c)))
               + (q.d / 2.0) * (math.log(q.d * big_c) - 1.0))
    return math.exp(log_val / q.d)


def schmidt_rewritten(d: int, big_c: float) -> float:
    """cosh(sqrt(d / (36 C))) * sqrt(d C): the same bound after taking d-th
    roots and dropping constant factors, convenient for optimizing over C."""
    if d < 2 or big_c <= 0:
        raise ValueError(f"need d >= 2 and C > 0, got d={d}, C={big_c}")
    return math.cosh(math.sqrt(d / (36.0 * big_c))) * math.sqrt(d * big_c)


def _tanh_crossing() -> float:
    # root of tanh(t) = 1/t in [1, 2]; the bracket is checked at runtime
    f = lambda t: math.tanh(t) - 1.0 / t
    lo, hi = 1.0, 2.0
    if not (f(lo) < 0.0 < f(hi)):
        raise RuntimeError("bisection bracket [1, 2] failed for tanh(t) = 1/t")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if abs(val) <= 1e-12:
            return mid
        if val < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_TANH_ROOT = None


def schmidt_find_Cstar(d: int) -> float:
    """The C minimizing the rewritten bound: C* = d / (36 t*^2) where t* is
    the root of tanh(t) = 1/t (t* ~ 1.19968, so C* ~ 0.695 d / 36)."""
    global _TANH_ROOT
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if _TANH_ROOT is None:
        _TANH_ROOT = _tanh_crossing()
    return d / (36.0 * _TANH_ROOT ** 2)


def schmidt_optimized(q: BaselineQuery) -> float:
    """Rewritten bound evaluated at the admissible optimum C = max(C*, n sigma2)."""
    big_c = max(schmidt_find_Cstar(q.d), q.n * q.sigma2)
    return schmidt_rewritten(q.d, big_c)


def schmidt_proxy(q: BaselineQuery) -> float:
    """Closed-form proxy max(sqrt(d n sigma2), d) for the optimized bound."""
    return max(math.sqrt(q.d * q.n * q.sigma2), float(q.d))


def bellare_rompel(q: BaselineQuery) -> float:
    """min(sqrt(d n), sqrt(d n mu + d^2)); requires the mean parameter mu."""
    if q.mu is None:
        raise ValueError("the mean-based baseline requires mu")
    return min(math.sqrt(q.d * q.n),
               math.sqrt(q.d * q.n * q.mu + q.d ** 2))


def bernstein_moment(q: BaselineQuery) -> float:
    """max(sqrt(n d sigma2), d), the moment form of the Bernstein tail."""
    return max(math.sqrt(q.n * q.d * q.sigma2), float(q.d))


def rosenthal_moment(q: BaselineQuery,
                     dth_abs_moments: Optional[Sequence[float]] = None) -> float:
    """d * (sum E|X_i - EX_i|^d)^(1/d) + sqrt(d) * (sum var_i)^(1/2).

    Without explicit d-th moments, boundedness gives E|X_i - EX_i|^d <=
    sigma2 (values in [-1, 1] after centering... up to the usual constant),
    so the default uses sum = n sigma2.
    """
    if dth_abs_moments is not None:
        if len(dth_abs_moments) != q.n:
            raise ValueError(
                f"need {q.n} per-variable moments, got {len(dth_abs_moments)}")
        if any(m < 0 for m in dth_abs_moments):
            raise ValueError("d-th absolute moments must be nonnegative")
        total = float(sum(dth_abs_moments))
    else:
        total = q.n * q.sigma2
    return (q.d * total ** (1.0 / q.d)
            + math.sqrt(q.d * q.n * q.sigma2))


COMPARE_CSV_COLUMNS = ["n", "d", "sigma2", "mu", "ours", "schmidt_raw",
                       "schmidt_opt", "bellare", "bernstein", "rosenthal",
                       "best"]


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    d: int
    sigma2: float
    mu: Optional[float]
    ours: Optional[float]
    schmidt_raw: Optional[float]
    schmidt_opt: Optional[float]
    bellare: Optional[float]
    bernstein: Optional[float]
    rosenthal: Optional[float]
    best: Optional[str]

    def to_dict(self) -> dict:
        out: dict = {"n": self.n, "d": self.d, "sigma2": self.sigma2}
        if self.mu is not None:
            out["mu"] = self.mu
        for name in ("ours", "schmidt_raw", "schmidt_opt", "bellare",
                     "bernstein", "rosenthal"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.best is not None:
            out["best"] = self.best
        return out


def compare_all(q: BaselineQuery) -> ComparisonRow:
    """Evaluate every bound at q.  A component that raises (for example the
    mean-based baseline without mu) becomes an absent field, not a failure."""
    values: dict[str, Optional[float]] = {}

    def attempt(name, fn):
        try:
            values[name] = fn()
        except (ValueError, OverflowError):
            values[name] = None

    attempt("ours", lambda: moment_bound(
        BoundQuery(n=q.n, sigma2=q.sigma2, d=q.d)).value)
    big_c = max(schmidt_find_Cstar(q.d), q.n * q.sigma2)
    attempt("schmidt_raw", lambda: schmidt_raw(q, big_c))
    attempt("schmidt_opt", lambda: schmidt_optimized(q))
    attempt("bellare", lambda: bellare_rompel(q))
    attempt("bernstein", lambda: bernstein_moment(q))
    attempt("rosenthal", lambda: rosenthal_moment(q))

    best = None
    best_value = math.inf
    for name in ("ours", "schmidt_raw", "schmidt_opt", "bellare",
                 "bernstein", "rosenthal"):
        v = values[name]
        if v is not None and math.isfinite(v) and v < best_value:
            best, best_value = name, v
    return ComparisonRow(n=q.n, d=q.d, sigma2=q.sigma2, mu=q.mu,
                         best=best, **values)


def rows_to_csv(rows: Sequence[ComparisonRow], path: str) -> None:
    """Write comparison rows with the fixed column set; absent fields are
    empty cells."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COMPARE_CSV_COLUMNS)
        for row in rows:
            record = row.to_dict()
            writer.writerow([record.get(col, "") for col in COMPARE_CSV_COLUMNS])
