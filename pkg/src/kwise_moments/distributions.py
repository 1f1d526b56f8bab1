"""Exact discrete probability laws on rational support.

The central object is DiscretePMF, a canonical immutable list of
(value, probability) atoms with exact Fraction arithmetic throughout.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .combinatorics import RationalLike, as_fraction, binomial, format_rational

Atom = Tuple[Fraction, Fraction]


class DiscretePMF:
    """Finite discrete law with exact rational atoms.

    Atoms are canonicalized on construction: coerced to Fractions, merged by
    value, sorted, zero-probability atoms dropped, and the total mass checked
    to be exactly 1.  With unit_range=True (the default) every value must lie
    in [-1, 1]; constructions that legitimately leave that interval (binomial
    counts, convolutions, symmetrized laws) pass unit_range=False.
    """

    __slots__ = ("atoms",)

    def __init__(self, pairs: Iterable[Tuple[RationalLike, RationalLike]],
                 *, unit_range: bool = True):
        merged: dict[Fraction, Fraction] = {}
        for value, prob in pairs:
            v = as_fraction(value)
            p = as_fraction(prob)
            if p < 0:
                raise ValueError(f"negative probability {p} at value {v}")
            if p == 0:
                continue
            merged[v] = merged.get(v, Fraction(0)) + p
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected exactly 1")
        if unit_range:
            for v in merged:
                if v < -1 or v > 1:
                    raise ValueError(f"support value {v} outside [-1, 1]")
        object.__setattr__(self, "atoms",
                           tuple(sorted(merged.items())))

    def __setattr__(self, name, value):
        raise AttributeError("DiscretePMF is immutable")

    def __eq__(self, other):
        return isinstance(other, DiscretePMF) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        inner = ", ".join(f"{v}: {p}" for v, p in self.atoms)
        return f"DiscretePMF({{{inner}}})"

    @property
    def support(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    def prob(self, value: RationalLike) -> Fraction:
        v = as_fraction(value)
        for av, ap in self.atoms:
            if av == v:
                return ap
        return Fraction(0)

    def mean(self) -> Fraction:
        return sum((v * p for v, p in self.atoms), Fraction(0))

    def variance(self) -> Fraction:
        mu = self.mean()
        return sum((p * (v - mu) ** 2 for v, p in self.atoms), Fraction(0))

    def raw_moment(self, r: int) -> Fraction:
        if r < 0:
            raise ValueError(f"raw_moment requires r >= 0, got {r}")
        return sum((p * v ** r for v, p in self.atoms), Fraction(0))

    def central_abs_moment_even(self, d: int) -> Fraction:
        """E|X - EX|^d for even d, exact (absolute value is free for even d)."""
        if d <= 0 or d % 2 != 0:
            raise ValueError(f"central_abs_moment_even requires even d >= 2, got {d}")
        mu = self.mean()
        return sum((p * (v - mu) ** d for v, p in self.atoms), Fraction(0))

    def is_symmetric(self) -> bool:
        """True iff the law equals its reflection about 0, exactly."""
        table = dict(self.atoms)
        return all(table.get(-v) == p for v, p in self.atoms)


def three_point(sigma2: RationalLike) -> DiscretePMF:
    """The extreme symmetric law on {-1, 0, +1} with variance sigma2.

    Mass sigma2/2 at each of -1 and +1, the rest at 0.  Every even raw moment
    equals sigma2.  Requires 0 <= sigma2 <= 1.
    """
    s2 = as_fraction(sigma2)
    if s2 < 0 or s2 > 1:
        raise ValueError(f"three_point requires 0 <= sigma2 <= 1, got {s2}")
    half = s2 / 2
    return DiscretePMF([(-1, half), (0, 1 - s2), (1, half)])


def symmetrize(pmf: DiscretePMF) -> DiscretePMF:
    """Exact law of X - X' for X, X' iid with the given law.

    The result is symmetric about 0, its variance doubles, and the support
    lies within [lo - hi, hi - lo] (so within [-2, 2] for unit-range inputs).
    """
    out: dict[Fraction, Fraction] = {}
    for v1, p1 in pmf.atoms:
        for v2, p2 in pmf.atoms:
            key = v1 - v2
            out[key] = out.get(key, Fraction(0)) + p1 * p2
    return DiscretePMF(out.items(), unit_range=False)


def bernoulli_p_from_sigma2(sigma2: RationalLike) -> float:
    """The smaller Bernoulli parameter p with 2p(1-p) = sigma2.

    Only defined for 0 <= sigma2 <= 1/2 (symmetrized-Bernoulli variances
    cannot exceed 1/2); larger variances have no such representation and
    raise.  Uses the conjugate form sigma2 / (1 + sqrt(1 - 2*sigma2)), which
    stays relatively accurate (a few ulps) all the way down to sigma2 -> 0.
    """
    s2 = as_fraction(sigma2)
    if s2 < 0 or s2 > Fraction(1, 2):
        raise ValueError(
            f"no Bernoulli symmetrization for sigma2={s2}; need 0 <= sigma2 <= 1/2")
    if s2 == 0:
        return 0.0
    disc = float(1 - 2 * s2)
    return float(s2) / (1.0 + math.sqrt(disc))


def bernoulli_p_matches_sigma2(p: RationalLike, sigma2: RationalLike) -> bool:
    """Exact check of the defining identity 2p(1-p) == sigma2."""
    pf = as_fraction(p)
    return 2 * pf * (1 - pf) == as_fraction(sigma2)


def binomial_pmf(n: int, p: RationalLike) -> DiscretePMF:
    """Exact Binomial(n, p) law on {0, ..., n}.

    The support intentionally leaves [-1, 1]; downstream checks that require
    unit-range inputs must reject or rescale it explicitly.
    """
    if n < 1:
        raise ValueError(f"binomial_pmf requires n >= 1, got {n}")
    pf = as_fraction(p)
    if pf < 0 or pf > 1:
        raise ValueError(f"binomial_pmf requires 0 <= p <= 1, got {pf}")
    q = 1 - pf
    atoms = [(Fraction(i), binomial(n, i) * pf ** i * q ** (n - i))
             for i in range(n + 1)]
    return DiscretePMF(atoms, unit_range=False)


def pmf_to_obj(pmf: DiscretePMF) -> list[dict[str, str]]:
    return [{"value": format_rational(v), "prob": format_rational(p)}
            for v, p in pmf.atoms]


def pmf_to_json(pmf: DiscretePMF) -> str:
    return json.dumps(pmf_to_obj(pmf), separators=(", ", ": "))


def pmf_from_obj(obj: Sequence[dict], *, unit_range: bool = False) -> DiscretePMF:
    pairs = [(entry["value"], entry["prob"]) for entry in obj]
    return DiscretePMF(pairs, unit_range=unit_range)


def pmf_from_json(text: str, *, unit_range: bool = False) -> DiscretePMF:
    """Inverse of pmf_to_json.  Loads without the unit-range check by default
    so that serialized binomial or convolved laws round-trip."""
    return pmf_from_obj(json.loads(text), unit_range=unit_range)
