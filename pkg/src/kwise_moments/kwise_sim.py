"""k-wise independent three-valued samples from random polynomials over GF(p).

A family draws k uniform coefficients and evaluates the degree-(k-1)
polynomial at positions 0..n-1 (n <= p); each field element is mapped to
{-1, 0, +1} by symmetric threshold counts, so any k positions are exactly
jointly uniform and sums match fully independent moments up to order k.

Randomness comes from numpy's Philox (counter-based, 64-bit) keyed by the
caller's seed; runs are bit-for-bit reproducible across platforms.  Trials
are drawn in fixed-size chunks of CHUNK_TRIALS from a single stream, so the
chunk size is part of the determinism contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .combinatorics import RationalLike, as_fraction, format_rational
from .exact_moments import exact_moment_iid_threepoint
from .sharp_bounds import BoundQuery, Calibration, tail_bound

CHUNK_TRIALS = 65536
EXHAUSTIVE_CAP = 1_000_000
WILSON_Z = 1.959963984540054  # two-sided 95%


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class KWiseFamily:
    """Hash family: degree-(k-1) polynomials over GF(prime), n positions,
    with m_neg low residues mapping to -1 and m_pos high residues to +1."""
    n: int
    k: int
    prime: int
    m_neg: int
    m_pos: int

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if not 1 <= self.n <= self.prime:
            raise ValueError(f"need 1 <= n <= p, got n={self.n}, p={self.prime}")
        if self.k < 2:
            raise ValueError(f"need k >= 2, got {self.k}")
        if self.m_neg < 0 or self.m_pos < 0 or self.m_neg + self.m_pos > self.prime:
            raise ValueError(
                f"thresholds ({self.m_neg}, {self.m_pos}) infeasible for p={self.prime}")

    @property
    def sigma2_hat(self) -> Fraction:
        """Realized (quantized) per-position variance (m_neg + m_pos) / p."""
        return Fraction(self.m_neg + self.m_pos, self.prime)

    @property
    def symbol_probs(self) -> tuple[Fraction, Fraction, Fraction]:
        p = self.prime
        return (Fraction(self.m_neg, p),
                Fraction(p - self.m_neg - self.m_pos, p),
                Fraction(self.m_pos, p))

    @property
    def tail_order(self) -> int:
        """Largest even moment order the family controls exactly."""
        return self.k if self.k % 2 == 0 else self.k - 1


def build_family(n: int, k: int, sigma2: RationalLike, p: int) -> KWiseFamily:
    """Family with symmetric thresholds m = round(p * sigma2 / 2) on each
    side, quantizing the requested variance to sigma2_hat = 2m/p."""
    s2 = as_fraction(sigma2)
    if not 0 < s2 <= 1:
        raise ValueError(f"need 0 < sigma2 <= 1, got {s2}")
    m = round(Fraction(p) * s2 / 2)
    return KWiseFamily(n=n, k=k, prime=p, m_neg=m, m_pos=m)


def _symbols(family: KWiseFamily, residues: np.ndarray) -> np.ndarray:
    out = np.zeros_like(residues, dtype=np.int64)
    out[residues < family.m_neg] = -1
    out[residues >= family.prime - family.m_pos] = 1
    return out


def _eval_sums(family: KWiseFamily, coeffs: np.ndarray) -> np.ndarray:
    """Sum of symbols over positions 0..n-1 for each coefficient row.

    Horner evaluation mod p; products stay below p^2 * k, far inside int64.
    """
    p = family.prime
    x = np.arange(family.n, dtype=np.int64) % p
    acc = np.broadcast_to(coeffs[:, -1][:, None],
                          (coeffs.shape[0], family.n)).copy()
    for j in range(family.k - 2, -1, -1):
        acc = (acc * x + coeffs[:, j][:, None]) % p
    return _symbols(family, acc).sum(axis=1)


def sample_sums(family: KWiseFamily, trials: int, seed: int) -> np.ndarray:
    """Monte Carlo draws of the sum, deterministic given (family, seed)."""
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    chunks = []
    remaining = trials
    while remaining > 0:
        take = min(CHUNK_TRIALS, remaining)
        coeffs = rng.integers(0, family.prime, size=(take, family.k),
                              dtype=np.int64)
        chunks.append(_eval_sums(family, coeffs))
        remaining -= take
    return np.concatenate(chunks)


def sample_sum(family: KWiseFamily, seed: int) -> int:
    """A single draw (mostly for spot checks; prefer sample_sums in bulk)."""
    return int(sample_sums(family, 1, seed)[0])


def wilson_halfwidth(successes: int, trials: int, z: float = WILSON_Z) -> float:
    """Halfwidth of the Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    return (z / denom) * math.sqrt(phat * (1.0 - phat) / trials
                                   + z * z / (4.0 * trials * trials))


@dataclass(frozen=True)
class TailEstimate:
    t: float
    empirical: float
    trials: int
    wilson_halfwidth: float
    bound: float
    d: int
    sigma2_hat: Fraction
    exact: bool = False

    def to_dict(self) -> dict:
        return {"t": self.t, "empirical": self.empirical, "trials": self.trials,
                "wilson_halfwidth": self.wilson_halfwidth, "bound": self.bound,
                "d": self.d, "sigma2_hat": format_rational(self.sigma2_hat),
                "exact": self.exact}


def _attached_bound(family: KWiseFamily, t: float,
                    calibration: Optional[Calibration]) -> tuple[float, int]:
    d = family.tail_order
    q = BoundQuery(n=family.n, sigma2=float(family.sigma2_hat), d=d, k=family.k)
    return tail_bound(q, t, calibration=calibration), d


def empirical_tail(family: KWiseFamily, t: float, trials: int, seed: int,
                   calibration: Optional[Calibration] = None) -> TailEstimate:
    """Monte Carlo estimate of P(|S| > t) with a Wilson 95% halfwidth and the
    matching closed-form tail bound (at d = largest even order <= k)."""
    sums = sample_sums(family, trials, seed)
    hits = int(np.count_nonzero(np.abs(sums) > t))
    bound, d = _attached_bound(family, t, calibration)
    return TailEstimate(t=float(t), empirical=hits / trials, trials=trials,
                        wilson_halfwidth=wilson_halfwidth(hits, trials),
                        bound=bound, d=d, sigma2_hat=family.sigma2_hat)


@dataclass(frozen=True)
class MomentEstimate:
    d: int
    value: float        # estimate of E S^d
    stderr: float       # bootstrap standard error of the estimate
    trials: int

    @property
    def dth_root(self) -> float:
        return self.value ** (1.0 / self.d)


def empirical_moment(family: KWiseFamily, d: int, trials: int, seed: int,
                     bootstrap: int = 100) -> MomentEstimate:
    """Monte Carlo estimate of E S^d (even d <= k only: beyond the
    independence order the family does not reproduce independent moments)."""
    if d % 2 != 0 or d < 2:
        raise ValueError(f"need even d >= 2, got {d}")
    if d > family.k:
        raise ValueError(
            f"moment order d={d} exceeds independence order k={family.k}")
    sums = sample_sums(family, trials, seed).astype(np.float64)
    powers = sums ** d
    est = float(powers.mean())
    boot_rng = np.random.Generator(np.random.Philox(key=(seed, 0xB007)))
    means = np.empty(bootstrap)
    for b in range(bootstrap):
        idx = boot_rng.integers(0, trials, size=trials)
        means[b] = powers[idx].mean()
    return MomentEstimate(d=d, value=est, stderr=float(means.std(ddof=1)),
                          trials=trials)


def _all_polynomial_sums(family: KWiseFamily) -> np.ndarray:
    """Sum value for every one of the p^k coefficient vectors."""
    total = family.prime ** family.k
    if total > EXHAUSTIVE_CAP:
        raise ValueError(
            f"p^k = {total} exceeds the exhaustive cap {EXHAUSTIVE_CAP}")
    idx = np.arange(total, dtype=np.int64)
    coeffs = np.empty((total, family.k), dtype=np.int64)
    for j in range(family.k):
        coeffs[:, j] = idx % family.prime
        idx = idx // family.prime
    return _eval_sums(family, coeffs)


def exhaustive_moment(family: KWiseFamily, d: int) -> Fraction:
    """Exact E S^d averaged over every polynomial (a rational number).

    For even d <= k this equals the fully independent three-point moment at
    sigma2_hat; that identity is what the verification suites check.
    """
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    sums = _all_polynomial_sums(family)
    counts = np.bincount(sums + family.n, minlength=2 * family.n + 1)
    total = 0
    for shifted, count in enumerate(counts):
        if count:
            total += int(count) * (shifted - family.n) ** d
    return Fraction(total, family.prime ** family.k)


def exhaustive_tail(family: KWiseFamily, t: float) -> Fraction:
    """Exact P(|S| > t) over the whole family."""
    sums = _all_polynomial_sums(family)
    hits = int(np.count_nonzero(np.abs(sums) > t))
    return Fraction(hits, family.prime ** family.k)


def check_kwise_uniformity(family: KWiseFamily) -> bool:
    """Exhaustively verify that every k-subset of positions is exactly
    jointly uniform over GF(p)^k (each value tuple hit exactly once per
    polynomial batch of size p^k ... i.e. bincount identically 1)."""
    from itertools import combinations

    p, k = family.prime, family.k
    total = p ** k
    if total > EXHAUSTIVE_CAP:
        raise ValueError(
            f"p^k = {total} exceeds the exhaustive cap {EXHAUSTIVE_CAP}")
    if family.n < k:
        raise ValueError(f"need n >= k to form k-subsets, got n={family.n}")
    idx = np.arange(total, dtype=np.int64)
    coeffs = np.empty((total, k), dtype=np.int64)
    for j in range(k):
        coeffs[:, j] = idx % p
        idx = idx // p
    x = np.arange(family.n, dtype=np.int64) % p
    acc = np.broadcast_to(coeffs[:, -1][:, None], (total, family.n)).copy()
    for j in range(k - 2, -1, -1):
        acc = (acc * x + coeffs[:, j][:, None]) % p
    for subset in combinations(range(family.n), k):
        code = acc[:, subset[0]].copy()
        for pos in subset[1:]:
            code = code * p + acc[:, pos]
        counts = np.bincount(code, minlength=total)
        if not (counts == 1).all():
            return False
    return True


SIMULATION_CONFIG_KEYS = {"n", "k", "sigma2", "p", "trials", "t_list", "seed",
                          "exhaustive"}


def run_simulation(config: dict,
                   calibration: Optional[Calibration] = None) -> list[TailEstimate]:
    """Run the tail estimates described by a config dict
    {n, k, sigma2, p, trials, t_list, seed[, exhaustive]}.

    In exhaustive mode (requires p^k within the cap) tails are exact over the
    whole family and rows carry exact=True; trials is ignored there.
    """
    unknown = set(config) - SIMULATION_CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    family = build_family(n=int(config["n"]), k=int(config["k"]),
                          sigma2=as_fraction(config["sigma2"]),
                          p=int(config["p"]))
    trials = int(config["trials"])
    seed = int(config["seed"])
    exhaustive = bool(config.get("exhaustive", False))
    rows = []
    if exhaustive:
        total = family.prime ** family.k
        for t in config["t_list"]:
            prob = exhaustive_tail(family, float(t))
            bound, d = _attached_bound(family, float(t), calibration)
            rows.append(TailEstimate(
                t=float(t), empirical=float(prob), trials=total,
                wilson_halfwidth=0.0, bound=bound, d=d,
                sigma2_hat=family.sigma2_hat, exact=True))
    else:
        sums = sample_sums(family, trials, seed)
        for t in config["t_list"]:
            hits = int(np.count_nonzero(np.abs(sums) > float(t)))
            bound, d = _attached_bound(family, float(t), calibration)
            rows.append(TailEstimate(
                t=float(t), empirical=hits / trials, trials=trials,
                wilson_halfwidth=wilson_halfwidth(hits, trials),
                bound=bound, d=d, sigma2_hat=family.sigma2_hat))
    return rows
