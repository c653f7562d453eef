"""Exact counting of identities, presentations, and X-value distributions.

Everything is integer arithmetic; densities are built from these counts as
exact rationals elsewhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import sympy

from .errors import UnsupportedError
from .terms import (AbelianMode, IdentityMode, bijective_mode, constant_bijective_mode,
                    enumerate_up_to, free_mode, unary_mode)
from .variety import GaifmanGroup, VarietySpec, gaifman_group

COUNTING_MODES = ("unordered-distinct", "ordered-with-rep", "ordered-distinct")


def family_mode(family: str, n: int | None = None, m: int = 1):
    """Identity mode for a family name used on the command line."""
    if family in ("bijective", "basic-bijective", "two-id-bijective"):
        return bijective_mode(m)
    if family in ("unary", "single-unary-free"):
        return unary_mode(m)
    if family in ("n-symbol", "multi-unary", "multi-unary-free"):
        if n is None:
            raise ValueError(f"family {family} needs n")
        return free_mode(n, m)
    if family in ("abelian", "abelian-groups"):
        return AbelianMode()
    if family in ("constant-bijective", "constant-bijective-S3c"):
        return constant_bijective_mode()
    raise UnsupportedError(f"unknown family {family!r}")


def identity_total(family, s: int, n: int | None = None, m: int = 1) -> int:
    """N(s): identities of length at most s, closed form."""
    mode = family if isinstance(family, (IdentityMode, AbelianMode)) else family_mode(family, n, m)
    return mode.total(s)


def brute_identity_count(mode, s: int) -> int:
    return sum(1 for _ in enumerate_up_to(mode, s))


def presentations_from_identities(N: int, k: int, counting_mode: str = "unordered-distinct") -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    if counting_mode == "unordered-distinct":
        return math.comb(N, k)
    if counting_mode == "ordered-with-rep":
        return N ** k
    if counting_mode == "ordered-distinct":
        return math.perm(N, k)
    raise ValueError(f"unknown counting mode {counting_mode!r}")


def total_presentations(family, s: int, k: int = 1, counting_mode: str = "unordered-distinct",
                        n: int | None = None, m: int = 1) -> int:
    if s < 0:
        raise ValueError("s must be >= 0")
    if family in ("abelian", "abelian-groups") and k != 1:
        raise UnsupportedError("abelian family is counted with one relator")
    return presentations_from_identities(identity_total(family, s, n, m), k, counting_mode)


def alpha_count(n: int, s: int) -> int:
    """Terms t of length <= s with |X(t)| = n: sum of 2*C(n+2k, k)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(2 * math.comb(n + 2 * k, k) for k in range((s - n) // 2 + 1)) if s >= n else 0


@dataclass(frozen=True)
class ValueDistribution:
    counts: Mapping[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, v) -> int:
        return self.counts.get(v, 0)

    def share(self, v):
        from fractions import Fraction
        return Fraction(self[v], self.total)

    def max_share(self):
        from fractions import Fraction
        return Fraction(max(self.counts.values()), self.total)

    def abs_counts(self) -> list[int]:
        """c[a] = total count of values with |v| = a."""
        top = max((abs(v) for v in self.counts), default=0)
        out = [0] * (top + 1)
        for v, c in self.counts.items():
            out[abs(v)] += c
        return out


def _pascal_rows(s: int):
    row = [1]
    yield row
    for _ in range(s):
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
        yield row


def x_value_distribution(length: int | None = None, s: int | None = None,
                         two_sided: bool = False) -> ValueDistribution:
    """Distribution of X over words in {S, S^-1} of exact length or length <= s.

    ``two_sided`` weights length l by its l+1 lhs/rhs splits, which is the
    distribution of X(t) - X(t') over identities t(a) = t'(a).
    """
    if (length is None) == (s is None):
        raise ValueError("give exactly one of length or s")
    top = length if length is not None else s
    counts: dict[int, int] = {}
    for ell, row in enumerate(_pascal_rows(top)):
        if length is not None and ell != length:
            continue
        w = ell + 1 if two_sided else 1
        for j, c in enumerate(row):
            v = 2 * j - ell
            counts[v] = counts.get(v, 0) + w * c
    return ValueDistribution(dict(sorted(counts.items())))


def abs_x_counts(s: int) -> list[int]:
    """c[a] = number of one-sided words of length <= s with |X| = a."""
    c = [0] * (s + 1)
    for ell, row in enumerate(_pascal_rows(s)):
        for j, v in enumerate(row):
            c[abs(2 * j - ell)] += v
    return c


@dataclass(frozen=True)
class ResidueDistribution:
    modulus: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def share(self, r: int):
        from fractions import Fraction
        return Fraction(self.counts[r % self.modulus], self.total)


def x_residue_distribution(N: int, s: int, two_sided: bool = False,
                           lengths: Iterable[int] | None = None) -> ResidueDistribution:
    """Counts of X mod N over words of length <= s, by a DP over length."""
    if N < 1:
        raise ValueError("modulus must be >= 1")
    keep = None if lengths is None else set(lengths)
    row = [0] * N
    row[0] = 1
    acc = [0] * N
    for ell in range(s + 1):
        if keep is None or ell in keep:
            w = ell + 1 if two_sided else 1
            for j in range(N):
                acc[j] += w * row[j]
        row = [row[(j - 1) % N] + row[(j + 1) % N] for j in range(N)] if N > 1 else [2 * row[0]]
    return ResidueDistribution(N, tuple(acc))


# -- coprime pairs --------------------------------------------------------

@lru_cache(maxsize=8)
def _mobius_table(limit: int) -> tuple[int, ...]:
    mu = [1] * (limit + 1)
    mu[0] = 0
    is_comp = [False] * (limit + 1)
    primes = []
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > limit:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return tuple(mu)


def coprime_bilinear(c: list[int], c2: list[int]) -> int:
    """sum over a, b of c[a]*c2[b]*[gcd(a, b) = 1] with gcd(0, 0) = 0.

    Moebius inversion over common divisors: sum_d mu(d) S_d S2_d, where S_d
    sums the entries at multiples of d (0 included); the pair (0, 0) picks
    up the Mertens value and is removed.
    """
    top = max(len(c), len(c2)) - 1
    if top < 1:
        return 0
    mu = _mobius_table(top)
    total = 0
    mertens = 0
    for d in range(1, top + 1):
        mertens += mu[d]
        if mu[d] == 0:
            continue
        sd = sum(c[0::d]) if c else 0
        sd2 = sd if c2 is c else (sum(c2[0::d]) if c2 else 0)
        total += mu[d] * sd * sd2
    c0 = c[0] if c else 0
    c20 = c2[0] if c2 else 0
    return total - c0 * c20 * mertens


def coprime_pairs_direct(c: list[int], c2: list[int] | None = None) -> int:
    """Same count by summing over all O(s^2) value pairs."""
    c2 = c if c2 is None else c2
    total = 0
    for a, ca in enumerate(c):
        if not ca:
            continue
        for b, cb in enumerate(c2):
            if cb and math.gcd(a, b) == 1:
                total += ca * cb
    return total


def coprime_pair_count(s: int, ordered: bool = True, method: str = "mobius",
                       by_parity: bool = False):
    """Pairs of one-sided bijective identities of length <= s whose |X| are coprime.

    ``ordered`` counts ordered pairs with repetition (N^2 of them); otherwise
    unordered pairs of distinct identities.  With ``by_parity`` the ordered
    count is split by the parities of (|X_1|, |X_2|).
    """
    c = abs_x_counts(s)
    count = coprime_bilinear if method == "mobius" else coprime_pairs_direct
    if method not in ("mobius", "direct"):
        raise ValueError(f"unknown method {method!r}")
    if by_parity:
        parts = {}
        for p1 in (0, 1):
            for p2 in (0, 1):
                a = [v if i % 2 == p1 else 0 for i, v in enumerate(c)]
                b = [v if i % 2 == p2 else 0 for i, v in enumerate(c)]
                parts[(p1, p2)] = count(a, b)
        return parts
    total = count(c, c)
    if ordered:
        return total
    diagonal = c[1] if len(c) > 1 else 0
    return (total - diagonal) // 2


def one_cycle_counts(s: int, counting_mode: str = "unordered-distinct") -> tuple[int, int]:
    """(count, total) of 2-identity bijective presentations giving a 1-cycle."""
    N = 2 ** (s + 1) - 1
    ordered = coprime_pair_count(s, ordered=True)
    diagonal = abs_x_counts(s)[1] if s >= 1 else 0
    if counting_mode == "ordered-with-rep":
        return ordered, N * N
    unordered = (ordered - diagonal) // 2
    if counting_mode == "unordered-distinct":
        return unordered, math.comb(N, 2)
    if counting_mode == "ordered-distinct":
        return 2 * unordered, N * (N - 1)
    raise ValueError(f"unknown counting mode {counting_mode!r}")


class CoprimeSweep:
    """One-cycle counts for s = 0, 1, 2, ... with incremental updates.

    Keeps the |X| counts c and the divisor sums S_d; moving from s to s+1
    adds one Pascal row, touching S_d only for divisors of the new values.
    """

    def __init__(self, s_max: int):
        self.s_max = s_max
        self.mu = _mobius_table(max(s_max, 1))
        self.divisors = [[] for _ in range(s_max + 1)]
        for d in range(1, s_max + 1):
            if self.mu[d]:
                for q in range(d, s_max + 1, d):
                    self.divisors[q].append(d)
        self.c = [0] * (s_max + 1)
        self.S = [0] * (s_max + 1)

    def __iter__(self):
        """Yields (s, ordered coprime count, diagonal count |X|=1, N)."""
        mu, S, c = self.mu, self.S, self.c
        sqfree = [d for d in range(1, self.s_max + 1) if mu[d]]
        mertens = [0] * (self.s_max + 2)
        for d in range(1, self.s_max + 1):
            mertens[d] = mertens[d - 1] + mu[d]
        N = 0
        for ell, row in enumerate(_pascal_rows(self.s_max)):
            for j, v in enumerate(row):
                a = abs(2 * j - ell)
                c[a] += v
                N += v
                if a == 0:
                    for d in sqfree:
                        S[d] += v
                else:
                    for d in self.divisors[a]:
                        S[d] += v
            live = [d for d in sqfree if d <= ell]
            total = sum(mu[d] * S[d] * S[d] for d in live) - c[0] * c[0] * mertens[ell]
            yield ell, total, c[1], N


def primorial_threshold(s: int) -> int:
    """Largest prime p with 2*3*...*p <= ln(s)."""
    if s < 8:
        raise ValueError(f"no prime has primorial <= ln({s})")
    bound = math.log(s)
    best, prod = None, 1
    for p in sympy.primerange(2, 10 ** 6):
        prod *= p
        if prod > bound:
            break
        best = p
    return best


# -- Pi_1 differences -----------------------------------------------------

def _poly_mul(a: tuple[int, list[int]], b: tuple[int, list[int]]):
    (oa, ca), (ob, cb) = a, b
    out = [0] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if x:
            for j, y in enumerate(cb):
                out[i + j] += x * y
    return oa + ob, out


def _poly_add(a, b):
    (oa, ca), (ob, cb) = a, b
    lo = min(oa, ob)
    hi = max(oa + len(ca), ob + len(cb))
    out = [0] * (hi - lo)
    for i, x in enumerate(ca):
        out[oa - lo + i] += x
    for i, x in enumerate(cb):
        out[ob - lo + i] += x
    return lo, out


def _symbol_poly(values):
    lo, hi = min(values), max(values)
    out = [0] * (hi - lo + 1)
    for v in values:
        out[v - lo] += 1
    return lo, out


def pi1_difference_distribution(spec: VarietySpec | GaifmanGroup, s: int) -> ValueDistribution:
    """Exact distribution of Pi_1(t) - Pi_1(t') over identities of length s.

    With P(z) = sum z^{Pi_1(f_i)} and Q(z) = P(1/z), the generating function
    is sum_l P^l Q^(s-l), accumulated as R_j = P R_{j-1} + Q^j.
    """
    g = spec if isinstance(spec, GaifmanGroup) else gaifman_group(spec)
    if g.pi1 is None:
        from .errors import RankZeroError
        raise RankZeroError("G(V) is finite; Pi_1 is undefined")
    P = _symbol_poly(list(g.pi1))
    Q = _symbol_poly([-v for v in g.pi1])
    R = (0, [1])
    Qj = (0, [1])
    for _ in range(s):
        Qj = _poly_mul(Qj, Q)
        R = _poly_add(_poly_mul(P, R), Qj)
    off, coeffs = R
    return ValueDistribution({off + i: c for i, c in enumerate(coeffs) if c})
