"""Independent exact oracle: brute-force convolution of discrete laws.

This module deliberately shares no formulas with exact_moments; it computes
distributions of sums by direct convolution on a common integer grid so that
the closed forms can be checked against it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinatorics import as_fraction, format_rational
from .distributions import DiscretePMF, three_point

DEFAULT_ATOM_CAP = 1_000_000

# Support grid for randomized suites: quarter steps on [-1, 1].
QUARTER_GRID = tuple(Fraction(i, 4) for i in range(-4, 5))


class ConvolutionBudgetExceeded(RuntimeError):
    """Raised when an intermediate convolution support would exceed the cap."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(
            f"intermediate convolution support of {size} atoms exceeds cap {cap}")


@dataclass(frozen=True)
class SumLaw:
    """Law of a sum together with the component laws it came from."""
    pmf: DiscretePMF
    components: tuple[DiscretePMF, ...]


def convolve_sum(components: Sequence[DiscretePMF],
                 atom_cap: int = DEFAULT_ATOM_CAP) -> SumLaw:
    """Exact law of the independent sum of the given components.

    Values are placed on a common integer grid (the lcm of all denominators)
    and convolved by direct accumulation.  The worst-case intermediate size
    len(acc) * len(next) is checked against atom_cap before each step.
    """
    comps = tuple(components)
    if len(comps) == 0:
        raise ValueError("convolve_sum requires at least one component")
    denom = 1
    for pmf in comps:
        for v, _ in pmf.atoms:
            denom = math.lcm(denom, v.denominator)
    acc: dict[int, Fraction] = {0: Fraction(1)}
    for pmf in comps:
        step = [(int(v * denom), p) for v, p in pmf.atoms]
        worst = len(acc) * len(step)
        if worst > atom_cap:
            raise ConvolutionBudgetExceeded(worst, atom_cap)
        nxt: dict[int, Fraction] = {}
        for offset, mass in acc.items():
            for dv, dp in step:
                key = offset + dv
                nxt[key] = nxt.get(key, Fraction(0)) + mass * dp
        acc = nxt
    atoms = [(Fraction(offset, denom), mass) for offset, mass in acc.items()]
    return SumLaw(pmf=DiscretePMF(atoms, unit_range=False), components=comps)


def moment_of_sum(components: Sequence[DiscretePMF], d: int,
                  atom_cap: int = DEFAULT_ATOM_CAP) -> Fraction:
    """Exact central moment E (S - ES)^d of the sum, even d."""
    if d < 2 or d % 2 != 0:
        raise ValueError(f"need even d >= 2, got {d}")
    law = convolve_sum(components, atom_cap=atom_cap)
    return law.pmf.central_abs_moment_even(d)


@dataclass(frozen=True)
class MajorizationCheck:
    n: int
    d: int
    sigma2_bar: Fraction
    moment_given: Fraction
    moment_extreme: Fraction
    holds: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "sigma2_bar": format_rational(self.sigma2_bar),
            "moment_given": format_rational(self.moment_given),
            "moment_extreme": format_rational(self.moment_extreme),
            "holds": self.holds,
        }


def check_majorization(components: Sequence[DiscretePMF], d: int) -> MajorizationCheck:
    """Compare E S^d for the given independent symmetric [-1,1] components
    against n iid three-point components at the average variance.

    The extreme side must dominate; both sides are computed exactly by
    convolution, with no appeal to the closed forms.
    """
    comps = tuple(components)
    if len(comps) == 0:
        raise ValueError("check_majorization requires at least one component")
    for pmf in comps:
        if not pmf.is_symmetric():
            raise ValueError(f"component {pmf!r} is not symmetric about 0")
        lo, hi = pmf.support[0], pmf.support[-1]
        if lo < -1 or hi > 1:
            raise ValueError(f"component support [{lo}, {hi}] leaves [-1, 1]")
    n = len(comps)
    sigma2_bar = sum((pmf.variance() for pmf in comps), Fraction(0)) / n
    lhs = moment_of_sum(comps, d)
    rhs = moment_of_sum([three_point(sigma2_bar)] * n, d)
    return MajorizationCheck(
        n=n, d=d, sigma2_bar=sigma2_bar,
        moment_given=lhs, moment_extreme=rhs, holds=lhs <= rhs)


@dataclass(frozen=True)
class SymmetrizationCheck:
    d: int
    centered_moment: Fraction
    symmetrized_moment: Fraction
    lower_holds: bool   # E|X-EX|^d <= E|X-X'|^d
    upper_holds: bool   # E|X-X'|^d <= 2^d E|X-EX|^d

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "centered_moment": format_rational(self.centered_moment),
            "symmetrized_moment": format_rational(self.symmetrized_moment),
            "lower_holds": self.lower_holds,
            "upper_holds": self.upper_holds,
        }


def check_symmetrization_props(pmf: DiscretePMF, d: int) -> SymmetrizationCheck:
    """Exact verification of the symmetrization double inequality on the
    centered law, comparing d-th powers so no roots are needed."""
    if d < 2 or d % 2 != 0:
        raise ValueError(f"need even d >= 2, got {d}")
    centered = pmf.central_abs_moment_even(d)
    # X - X' has the same law as (X - EX) - (X' - EX'); its mean is 0, so the
    # raw d-th moment of the difference law is E|X - X'|^d.
    reflected = DiscretePMF([(-v, p) for v, p in pmf.atoms], unit_range=False)
    sym = convolve_sum([pmf, reflected]).pmf.raw_moment(d)
    return SymmetrizationCheck(
        d=d,
        centered_moment=centered,
        symmetrized_moment=sym,
        lower_holds=centered <= sym,
        upper_holds=sym <= 2 ** d * centered)


def random_pmf(rng: random.Random, grid: Sequence[Fraction] = QUARTER_GRID,
               weight_total: int = 32) -> DiscretePMF:
    """Random law on the grid with rational masses w_i / weight_total drawn
    from a random integer composition.  Deterministic given the rng state."""
    weights = [0] * len(grid)
    for _ in range(weight_total):
        weights[rng.randrange(len(grid))] += 1
    atoms = [(v, Fraction(w, weight_total)) for v, w in zip(grid, weights) if w]
    return DiscretePMF(atoms, unit_range=False)


def random_symmetric_pmf(rng: random.Random,
                         grid: Sequence[Fraction] = QUARTER_GRID,
                         weight_total: int = 32) -> DiscretePMF:
    """Random symmetric law: a random grid law averaged with its reflection."""
    base = random_pmf(rng, grid=grid, weight_total=weight_total)
    out: dict[Fraction, Fraction] = {}
    for v, p in base.atoms:
        out[v] = out.get(v, Fraction(0)) + p / 2
        out[-v] = out.get(-v, Fraction(0)) + p / 2
    return DiscretePMF(out.items(), unit_range=False)


def case_rng(seed: int, case_index: int) -> random.Random:
    """Stable per-case generator so suites can shard with fixed numbering."""
    return random.Random((seed << 24) ^ case_index)
