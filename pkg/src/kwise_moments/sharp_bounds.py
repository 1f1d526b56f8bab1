"""Closed-form moment bound with its three regimes, and the tail bound.

The bound for E^(1/d) |sum of n k-wise independent [-1,1] variables|^d, with
per-variable variance sigma2 and even d <= k, takes one of three shapes
depending on where log(d / (n sigma2)) falls:

    sub-gaussian        sqrt(d n sigma2)
    log-corrected       d / log(d / (n sigma2))
    small-variance      (n sigma2)^(1/d)

All logs are natural.  Unit mode returns the bare shapes; calibrated mode
multiplies in per-regime constants fitted against the exact moments and
stored in a small JSON file (see load_calibration / fit_calibration).

Caveat, documented and tested: for d > 2n the closed-form branch assignment
understates the true moment growth (the discrete maximum over participation
counts is then pinned at ell <= n, while the sub-gaussian shape assumes
ell can reach d/2).  The brackets asserted by the verification suites hold
on d <= 2n; the behaviour beyond is characterized separately in the tests.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import NamedTuple, Optional, Sequence

from .combinatorics import binomial
from .exact_moments import exact_moment_iid_threepoint

CALIBRATION_ENV = "KWM_CALIBRATION"
_PACKAGED_CALIBRATION = "data/calibration.json"


class Regime(str, Enum):
    SUB_GAUSSIAN = "SubGaussian"
    LOG_CORRECTED = "LogCorrected"
    SMALL_VARIANCE = "SmallVariance"


_BRANCH_EXPRESSIONS = {
    Regime.SUB_GAUSSIAN: "sqrt(d*n*sigma2)",
    Regime.LOG_CORRECTED: "d/log(d/(n*sigma2))",
    Regime.SMALL_VARIANCE: "(n*sigma2)**(1/d)",
}


@dataclass(frozen=True)
class BoundQuery:
    """Parameters of a bound evaluation.

    k is the independence order; it defaults to d (full use of the moment) and
    must satisfy d <= k when given.
    """
    n: int
    sigma2: float
    d: int
    k: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.d < 2 or self.d % 2 != 0:
            raise ValueError(f"need even d >= 2, got {self.d}")
        if not (0.0 < float(self.sigma2) <= 1.0):
            raise ValueError(f"need 0 < sigma2 <= 1, got {self.sigma2}")
        if self.k is not None and self.d > self.k:
            raise ValueError(f"need d <= k, got d={self.d}, k={self.k}")


@dataclass(frozen=True)
class BoundResult:
    value: float
    regime: Regime
    branch: str
    mode: str  # "unit" or "calibrated"

    def to_dict(self) -> dict:
        return {"M": self.value, "regime": self.regime.value,
                "branch": self.branch, "mode": self.mode}


def log_ratio(q: BoundQuery) -> float:
    """log(d / (n sigma2)), the quantity that selects the regime."""
    return math.log(q.d) - math.log(q.n * float(q.sigma2))


def classify_regime(q: BoundQuery) -> Regime:
    ell = log_ratio(q)
    gate = max(q.d / q.n, 2.0)
    if ell < gate:
        return Regime.SUB_GAUSSIAN
    if ell <= q.d:
        # boundary ties deliberately resolve to the middle branch
        return Regime.LOG_CORRECTED
    return Regime.SMALL_VARIANCE


@dataclass(frozen=True)
class Calibration:
    constants: dict            # regime tag -> multiplicative constant
    provenance: dict = field(default_factory=dict)
    version: int = 1

    def constant_for(self, regime: Regime) -> float:
        return float(self.constants[regime.value])

    def to_dict(self) -> dict:
        return {"version": self.version, "constants": self.constants,
                "provenance": self.provenance}


_warned_missing = set()


def _warn_once(path: str) -> None:
    if path not in _warned_missing:
        _warned_missing.add(path)
        print(f"kwise_moments: calibration file not found at {path!r}; "
              f"falling back to unit constants", file=sys.stderr)


def load_calibration(path: Optional[str] = None) -> Optional[Calibration]:
    """Load calibration constants.

    Resolution order: explicit path argument, then the KWM_CALIBRATION
    environment variable, then the packaged default file.  A missing file is
    not an error: it warns once on stderr and returns None (unit mode).
    """
    candidate = path or os.environ.get(CALIBRATION_ENV)
    if candidate:
        if not os.path.exists(candidate):
            _warn_once(candidate)
            return None
        with open(candidate, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    else:
        ref = resources.files("kwise_moments").joinpath(_PACKAGED_CALIBRATION)
        try:
            obj = json.loads(ref.read_text(encoding="utf-8"))
        except FileNotFoundError:
            _warn_once(str(ref))
            return None
    return Calibration(constants=dict(obj["constants"]),
                       provenance=dict(obj.get("provenance", {})),
                       version=int(obj.get("version", 1)))


def moment_bound(q: BoundQuery, mode: str = "unit",
                 calibration: Optional[Calibration] = None) -> BoundResult:
    """The closed-form moment bound, unit or calibrated."""
    if mode not in ("unit", "calibrated"):
        raise ValueError(f"mode must be 'unit' or 'calibrated', got {mode!r}")
    regime = classify_regime(q)
    nvar = q.n * float(q.sigma2)
    if regime is Regime.SUB_GAUSSIAN:
        value = math.sqrt(q.d * nvar)
    elif regime is Regime.LOG_CORRECTED:
        value = q.d / log_ratio(q)
    else:
        value = nvar ** (1.0 / q.d)
    actual_mode = "unit"
    if mode == "calibrated":
        cal = calibration if calibration is not None else load_calibration()
        if cal is not None:
            value *= cal.constant_for(regime)
            actual_mode = "calibrated"
    return BoundResult(value=value, regime=regime,
                       branch=_BRANCH_EXPRESSIONS[regime], mode=actual_mode)


class DiscreteMax(NamedTuple):
    value: float
    argmax: int


def discrete_max_bound(q: BoundQuery) -> DiscreteMax:
    """max over ell in [1, min(d/2, n)] of (ell^d C(n,ell) sigma2^ell)^(1/d),
    evaluated in the log domain, with the maximizing ell reported."""
    log_s2 = math.log(float(q.sigma2))
    best_log, best_ell = -math.inf, 1
    for ell in range(1, min(q.d // 2, q.n) + 1):
        log_term = (q.d * math.log(ell)
                    + math.log(binomial(q.n, ell))
                    + ell * log_s2)
        if log_term > best_log:
            best_log, best_ell = log_term, ell
    return DiscreteMax(value=math.exp(best_log / q.d), argmax=best_ell)


def relaxation_profile(q_val: float, a: float) -> float:
    """g(q) = (1/q) * a^(1/q), the continuous profile whose maximum over the
    admissible interval reproduces the discrete maximum up to constants."""
    if q_val <= 0:
        raise ValueError(f"need q > 0, got {q_val}")
    if a <= 0:
        raise ValueError(f"need a > 0, got {a}")
    return math.exp(-math.log(q_val) + math.log(a) / q_val)


def continuous_relaxation_max(q: BoundQuery) -> float:
    """max over q' in [max(2, d/n), d] of d * g(q') with a = n sigma2 / d.

    For a >= 1 the profile is decreasing, so the left endpoint wins; for a < 1
    the interior stationary point is at q' = log(1/a) with value
    1 / (e log(1/a)), clamped to the interval.
    """
    a = q.n * float(q.sigma2) / q.d
    lo = max(2.0, q.d / q.n)
    hi = float(q.d)
    if a >= 1.0:
        q_best = lo
    else:
        q_best = min(max(math.log(1.0 / a), lo), hi)
    return q.d * relaxation_profile(q_best, a)


def tail_bound(q: BoundQuery, t: float, c: Optional[float] = None,
               calibration: Optional[Calibration] = None) -> float:
    """min(1, (c * M / t)^d): the moment bound turned into a tail bound.

    c defaults to the calibrated constant for the query's regime when a
    calibration is available, else 1.  At t = 2 c M the bound is 2^-d.
    """
    if t <= 0:
        raise ValueError(f"need t > 0, got {t}")
    if c is None:
        cal = calibration if calibration is not None else load_calibration()
        c = cal.constant_for(classify_regime(q)) if cal is not None else 1.0
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    m = moment_bound(q, mode="unit").value
    log_val = q.d * (math.log(c) + math.log(m) - math.log(t))
    if log_val >= 0:
        return 1.0
    return math.exp(log_val)


def endpoint_shape_valid(n: int, d: int) -> bool:
    """True where the closed-form branch values are trustworthy (d <= 2n);
    see the module docstring for the corner beyond."""
    return d <= 2 * n


DEFAULT_FIT_GRID = {
    "n": [2 ** j for j in range(0, 11)],
    "d": [2, 4, 6, 8, 10, 12, 14, 16],
    "sigma2_exponents": list(range(-20, 1)),
}


def fit_calibration(grid: Optional[dict] = None) -> Calibration:
    """Fit per-regime constants against the exact iid three-point moments.

    For each regime the constant is the geometric midpoint of the extreme
    ratios exact^(1/d) / M_unit over the grid, restricted to d <= 2n where
    the closed-form shapes are valid.  The provenance records the grid, its
    hash, the restriction, and the observed ratio ranges.
    """
    grid = dict(DEFAULT_FIT_GRID if grid is None else grid)
    ranges: dict[str, list[float]] = {}
    for n in grid["n"]:
        for d in grid["d"]:
            if not endpoint_shape_valid(n, d):
                continue
            for e in grid["sigma2_exponents"]:
                s2 = Fraction(2) ** e if e >= 0 else Fraction(1, 2 ** (-e))
                q = BoundQuery(n=n, sigma2=float(s2), d=d)
                exact = exact_moment_iid_threepoint(n, d, s2)
                root = math.exp((math.log(exact.numerator)
                                 - math.log(exact.denominator)) / d)
                ratio = root / moment_bound(q, mode="unit").value
                tag = classify_regime(q).value
                lohi = ranges.setdefault(tag, [ratio, ratio])
                lohi[0] = min(lohi[0], ratio)
                lohi[1] = max(lohi[1], ratio)
    constants = {tag: math.sqrt(lo * hi) for tag, (lo, hi) in sorted(ranges.items())}
    grid_blob = json.dumps(grid, sort_keys=True).encode()
    provenance = {
        "grid": grid,
        "grid_hash": hashlib.sha256(grid_blob).hexdigest(),
        "fit_domain": "d <= 2n",
        "ratio_ranges": {tag: [lo, hi] for tag, (lo, hi) in sorted(ranges.items())},
        "created": _dt.date.today().isoformat(),
    }
    return Calibration(constants=constants, provenance=provenance)


def save_calibration(cal: Calibration, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cal.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
