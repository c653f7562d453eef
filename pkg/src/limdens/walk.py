"""Exact random walks on Z_n and the shape of their convergence to uniform."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

# past this many steps, numerators are rounded down to a fixed binary precision
RENORMALIZE_AFTER = 1000
PRECISION_BITS = 256


@dataclass(frozen=True)
class WalkSpec:
    n: int
    support: tuple[tuple[int, Fraction], ...]

    def __init__(self, n: int, support: Mapping[int, Fraction | str | int]):
        if n < 1:
            raise ValueError("modulus must be >= 1")
        merged: dict[int, Fraction] = {}
        for g, p in dict(support).items():
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative probability at {g}")
            if p:
                merged[int(g) % n] = merged.get(int(g) % n, Fraction(0)) + p
        if sum(merged.values()) != 1:
            raise ValueError(f"probabilities sum to {sum(merged.values())}, not 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "support", tuple(sorted(merged.items())))

    @classmethod
    def parse(cls, n: int, text: str) -> "WalkSpec":
        """``"0:1/2,1:1/4,-1:1/4"``"""
        sup: dict[int, Fraction] = {}
        for item in text.split(","):
            g, _, p = item.strip().partition(":")
            if not p:
                raise ValueError(f"expected element:probability, got {item!r}")
            sup[int(g)] = sup.get(int(g), Fraction(0)) + Fraction(p.strip())
        return cls(n, sup)

    @property
    def generating(self) -> bool:
        g = self.n
        for x, _ in self.support:
            g = math.gcd(g, x)
        return g == 1

    @property
    def aperiodic(self) -> bool:
        x0 = self.support[0][0]
        g = self.n
        for x, _ in self.support:
            g = math.gcd(g, x - x0)
        return g == 1


@dataclass(frozen=True)
class Distribution:
    """Mass nums[g] / den on each g in Z_n.

    ``rounding`` is None while the arithmetic is exact; after
    renormalization it records how numerators were rounded.
    """

    n: int
    nums: tuple[int, ...]
    den: int
    rounding: str | None = None

    def __getitem__(self, g) -> Fraction:
        return Fraction(self.nums[g % self.n], self.den)

    def as_dict(self) -> dict[int, Fraction]:
        return {g: self[g] for g in range(self.n) if self.nums[g]}

    @property
    def mass(self) -> Fraction:
        return Fraction(sum(self.nums), self.den)

    @property
    def exact(self) -> bool:
        return self.rounding is None


def point_mass(n: int, g: int = 0) -> Distribution:
    nums = [0] * n
    nums[g % n] = 1
    return Distribution(n, tuple(nums), 1)


def uniform(n: int) -> Distribution:
    return Distribution(n, (1,) * n, n)


def _step(spec: WalkSpec, d: Distribution) -> Distribution:
    D = math.lcm(*(p.denominator for _, p in spec.support))
    weights = [(g, p.numerator * (D // p.denominator)) for g, p in spec.support]
    n = spec.n
    out = [0] * n
    for x, c in enumerate(d.nums):
        if c:
            for g, w in weights:
                out[(x + g) % n] += c * w
    return Distribution(n, tuple(out), d.den * D, d.rounding)


def _renormalize(d: Distribution, bits: int) -> Distribution:
    scale = 1 << bits
    if d.den == scale:
        return d
    nums = tuple((c * scale) // d.den for c in d.nums)
    return Distribution(d.n, nums, scale, f"floor to {bits} bits")


def walk_distributions(spec: WalkSpec, k_max: int, bits: int = PRECISION_BITS):
    """Yield mu^(k) for k = 0..k_max."""
    d = point_mass(spec.n)
    yield d
    for k in range(1, k_max + 1):
        d = _step(spec, d)
        if k > RENORMALIZE_AFTER:
            d = _renormalize(d, bits)
        yield d


def k_step_distribution(spec: WalkSpec, k: int, bits: int = PRECISION_BITS) -> Distribution:
    if k < 0:
        raise ValueError("k must be >= 0")
    for d in walk_distributions(spec, k, bits):
        pass
    return d


def tv_distance_to_uniform(d: Distribution) -> Fraction:
    n = d.n
    # sum |nums/den - 1/n| = sum |n*nums - den| / (n*den)
    return Fraction(sum(abs(n * c - d.den) for c in d.nums), 2 * n * d.den)


def max_deviation(d: Distribution) -> Fraction:
    n = d.n
    return Fraction(max(abs(n * c - d.den) for c in d.nums), n * d.den)


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class DecayFit:
    """log max deviation ~ rate * k + intercept over the tail.

    ``alpha_hat``/``beta_hat`` put the bound in the form
    alpha * exp(-beta k / n^2) with alpha the smallest value that covers
    every computed step.
    """

    rate: float
    intercept: float
    residual: float
    alpha_hat: float
    beta_hat: float
    k_range: tuple[int, int]


class WalkError(ValueError):
    pass


def decay_rate_estimate(spec: WalkSpec, k_max: int = 200, tail: float = 0.5) -> DecayFit:
    if not spec.generating:
        raise WalkError("support does not generate Z_n")
    if not spec.aperiodic:
        raise WalkError("walk is periodic")
    devs = [max_deviation(d) for d in walk_distributions(spec, k_max)]
    lo = max(1, int(k_max * (1 - tail)))
    ks = list(range(lo, k_max + 1))
    if any(devs[k] == 0 for k in ks):
        raise WalkError("distance reached exactly 0; nothing to fit")
    y = np.array([_log(devs[k]) for k in ks])
    x = np.array(ks, dtype=float)
    (rate, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    n2 = spec.n ** 2
    beta = -rate * n2
    alpha = max(math.exp(_log(devs[k]) + beta * k / n2) for k in range(1, k_max + 1))
    return DecayFit(float(rate), float(intercept), float(res[0]) if len(res) else 0.0,
                    alpha, float(beta), (lo, k_max))


def walk_csv(spec: WalkSpec, k_max: int) -> str:
    lines = ["k,max_deviation,tv_distance"]
    for k, d in enumerate(walk_distributions(spec, k_max)):
        lines.append(f"{k},{float(max_deviation(d)):.12g},{float(tv_distance_to_uniform(d)):.12g}")
    return "\n".join(lines) + "\n"
