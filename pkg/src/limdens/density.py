"""Density series P_s(phi)/P_s and their even/odd analysis.

Two strategies produce every supported series:

* ``enumerate`` walks every presentation of length <= s, builds its
  structure, and evaluates the sentence on it.
* ``aggregate`` groups identities by a small key (the X value, the pair of
  side lengths, ...) with exact multiplicities and evaluates the sentence
  once per key.

A third, ``closed-form``, is used where the counts are explicit sums.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .counting import (CoprimeSweep, _pascal_rows, abs_x_counts,
                       presentations_from_identities)
from .errors import BudgetExceeded, ParseError, UnsupportedError
from .fo import InvariantSentence, eval_invariant, parse_invariant
from .structures import (Cycle, OmegaChain, RhoShape, build_abelian,
                         build_bijective, build_constant_example, build_genbij,
                         build_two_identity_bijective, build_unary)
from .terms import (AbelianMode, Identity, IdentityMode, Term, bijective_mode,
                    constant_bijective_mode, free_signature, unary_mode, x_statistic)
from .variety import VarietySpec, gaifman_group, projection_pi1

ENUMERATE_BUDGET = 10 ** 6
STRATEGIES = ("enumerate", "aggregate", "closed-form")


@dataclass
class DensitySeries:
    family: str
    sentence: str
    strategy: str
    points: dict[int, tuple[int, int]] = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def density(self, s: int) -> Fraction:
        count, total = self.points[s]
        return Fraction(count, total)

    def __getitem__(self, s):
        return self.density(s)

    @property
    def s_values(self) -> list[int]:
        return sorted(self.points)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "total", "count", "density_num", "density_den", "density_float"])
        for s in self.s_values:
            count, total = self.points[s]
            d = Fraction(count, total)
            w.writerow([s, total, count, d.numerator, d.denominator, f"{float(d):.12g}"])
        return buf.getvalue()


# -- sentences ----------------------------------------------------------

@dataclass(frozen=True)
class Property:
    """A density target: a catalogued invariant or a presentation property."""

    text: str
    kind: str
    params: tuple = ()
    inv: InvariantSentence | None = None
    negated: bool = False

    def holds(self, x, desc) -> bool:
        v = self._holds(x, desc)
        return (not v) if self.negated else v

    def _holds(self, x, desc):
        p = dict(self.params)
        if self.kind == "invariant":
            return eval_invariant(desc, self.inv)
        if self.kind == "XResidue":
            return x % p["N"] == p["r"] % p["N"]
        if self.kind.startswith("Class"):
            return getattr(desc, "case", None) == int(self.kind[-1]) if self.kind[-1].isdigit() \
                else x == self.kind[-1]
        if self.kind == "Pi1Below":
            return abs(x) < p["k"]
        raise UnsupportedError(f"property {self.kind}")


_EXTRA = {"XResidue": ("N", "r"), "ClassS1": (), "ClassS2": (), "ClassS3": (),
          "ClassA": (), "ClassB": (), "Pi1Below": ("k",)}


def parse_property(text: str, signature=None) -> Property:
    t = text.strip()
    negated = False
    while t.startswith("not "):
        negated = not negated
        t = t[4:].strip()
    head = t.split()[0] if t else ""
    if head in _EXTRA:
        params = {}
        for f in t.split()[1:]:
            k, _, v = f.partition("=")
            params[k] = int(v)
        if set(params) != set(_EXTRA[head]):
            raise ParseError(f"{head} takes {_EXTRA[head]}", text, 0)
        return Property(text.strip(), head, tuple(sorted(params.items())), None, negated)
    inv = parse_invariant(t, signature)
    return Property(text.strip(), "invariant", (), inv, negated)


# -- families -----------------------------------------------------------

class _Family:
    name = ""
    k = 1

    def total(self, s: int) -> int:
        return self.mode.total(s)

    def classify(self, e):
        raise NotImplementedError

    def enumerate_length(self, ell: int):
        return self.mode.enumerate(ell)


class BijectiveFamily(_Family):
    name = "bijective"

    def __init__(self):
        self.mode = bijective_mode()

    def rows(self, s_max):
        for ell, row in enumerate(_pascal_rows(s_max)):
            yield ell, [(2 * j - ell, c) for j, c in enumerate(row)]

    def describe(self, x):
        return x, build_bijective(x)

    def classify(self, e):
        return x_statistic(e.lhs) - x_statistic(e.rhs), build_bijective(e)


class AbelianFamily(BijectiveFamily):
    name = "abelian"

    def __init__(self):
        self.mode = AbelianMode()

    def describe(self, x):
        return x, build_abelian(x)

    def classify(self, w):
        return x_statistic(w), build_abelian(w)


class UnaryFamily(_Family):
    """Keys are structure shapes with the number of identities producing them."""

    name = "unary"

    def __init__(self):
        self.mode = unary_mode()

    def rows(self, s_max):
        for ell in range(s_max + 1):
            row = []
            if ell % 2 == 0:
                row.append((("omega",), 1))
            if ell >= 1:
                row.append((("cycle", ell), 2))
            for lo in range(1, (ell + 1) // 2):
                row.append((("rho", lo, ell - 2 * lo), 2))
            yield ell, row

    def describe(self, key):
        if key[0] == "omega":
            return None, OmegaChain()
        if key[0] == "cycle":
            return None, Cycle(key[1], "f", None)
        return None, RhoShape(key[1], key[2])

    def classify(self, e):
        return None, build_unary(e)


class ConstantFamily(_Family):
    name = "constant-bijective"

    def __init__(self):
        self.mode = constant_bijective_mode()

    def rows(self, s_max):
        pairs = [(x, y) for x in ("a", "c") for y in ("a", "c")]
        for ell, row in enumerate(_pascal_rows(s_max)):
            yield ell, [((b, 2 * j - ell), (ell + 1) * c) for b in pairs for j, c in enumerate(row)]

    def describe(self, key):
        (lb, rb), k = key
        word = ("S",) * k if k >= 0 else ("S^-1",) * (-k)
        return None, build_constant_example(Identity(Term(word, lb), Term((), rb)))

    def classify(self, e):
        return None, build_constant_example(e)


class GenbijFamily(_Family):
    """One generator, one identity, in a commutative bijective variety."""

    name = "genbij"

    def __init__(self, spec: VarietySpec):
        self.spec = spec
        self.group = gaifman_group(spec)
        self.mode = IdentityMode(spec.signature)

    def rows(self, s_max):
        from .counting import _poly_add, _poly_mul, _symbol_poly
        P = _symbol_poly(list(self.group.pi1))
        Q = _symbol_poly([-v for v in self.group.pi1])
        R, Qj = (0, [1]), (0, [1])
        for ell in range(s_max + 1):
            off, coeffs = R
            yield ell, [(off + i, c) for i, c in enumerate(coeffs) if c]
            Qj = _poly_mul(Qj, Q)
            R = _poly_add(_poly_mul(P, R), Qj)

    def describe(self, d):
        return d, None

    def classify(self, e):
        d = projection_pi1(self.group, e.lhs) - projection_pi1(self.group, e.rhs)
        return d, build_genbij(e, self.spec)


class ConstantsLikeFamily(_Family):
    """n free symbols on m generators, classes A and B relative to a word t.

    A: u(a_i) = v(a_j) with u = t u' and v = f t v'.  B: u = t u', v = t v'.
    The word t is f2^r and f is f1.
    """

    name = "constants-like"

    def __init__(self, n: int, r: int, m: int = 1):
        if n < 2:
            raise UnsupportedError("the constants-like classes need n >= 2 symbols")
        self.n, self.r, self.m = n, r, m
        self.mode = IdentityMode(free_signature(n, m))
        self.t = ("f2",) * r

    def classify(self, e):
        t, r = self.t, self.r
        if e.lhs.symbols[:r] == t and e.rhs.symbols[:r + 1] == ("f1",) + t:
            return "A", None
        if e.lhs.symbols[:r] == t and e.rhs.symbols[:r] == t:
            return "B", None
        return None, None

    def counts(self, s):
        """(P_s(A), P_s(B), P_s) as exact sums."""
        n, m, r = self.n, self.m, self.r
        pa = m * m * sum((q + 1) * n ** q for q in range(0, s - 2 * r))
        pb = m * m * sum((q + 1) * n ** q for q in range(0, s - 2 * r + 1))
        return pa, pb, self.total(s)


class TwoIdentityFamily(_Family):
    name = "two-id-bijective"
    k = 2

    def __init__(self, counting_mode="unordered-distinct"):
        self.mode = bijective_mode()
        self.counting_mode = counting_mode

    def total(self, s):
        return presentations_from_identities(self.mode.total(s), 2, self.counting_mode)


def make_family(family: str, spec: VarietySpec | None = None, n: int | None = None,
                r: int = 1, m: int = 1, counting_mode: str = "unordered-distinct"):
    if family in ("bijective", "basic-bijective"):
        return BijectiveFamily()
    if family in ("abelian", "abelian-groups"):
        return AbelianFamily()
    if family in ("unary", "single-unary-free"):
        return UnaryFamily()
    if family in ("constant-bijective", "constant-bijective-S3c"):
        return ConstantFamily()
    if family in ("genbij", "commutative-genbij"):
        return GenbijFamily(spec or VarietySpec.basic_bijective())
    if family == "constants-like":
        return ConstantsLikeFamily(n or 2, r, m)
    if family == "two-id-bijective":
        return TwoIdentityFamily(counting_mode)
    raise UnsupportedError(f"unknown family {family!r}")


# -- series -------------------------------------------------------------

def _grid(s_max, s_values):
    if s_values is None:
        if s_max is None:
            raise ValueError("give s_max or s_values")
        return list(range(s_max + 1))
    return sorted(set(s_values))


def density_series(family, sentence, s_max: int | None = None, strategy: str = "aggregate",
                   s_values: Iterable[int] | None = None, budget: int = ENUMERATE_BUDGET,
                   **family_args) -> DensitySeries:
    fam = family if isinstance(family, _Family) else make_family(family, **family_args)
    sig = getattr(getattr(fam, "mode", None), "signature", None)
    prop = sentence if isinstance(sentence, Property) else parse_property(sentence, sig)
    grid = _grid(s_max, s_values)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    series = DensitySeries(fam.name, prop.text, strategy, params=dict(family_args))
    if strategy == "enumerate":
        if fam.total(grid[-1]) > budget:
            raise BudgetExceeded(f"{fam.total(grid[-1])} presentations at s={grid[-1]} exceeds {budget}")
        series.points = _enumerate(fam, prop, grid)
    elif strategy == "aggregate":
        series.points = _aggregate(fam, prop, grid)
    else:
        series.points = _closed_form(fam, prop, grid)
    # no presentations at all (two identities need N >= 2): density undefined
    series.points = {s: v for s, v in series.points.items() if v[1]}
    return series


def _enumerate(fam, prop, grid):
    points = {}
    if isinstance(fam, TwoIdentityFamily):
        ids = []
        for ell in range(grid[-1] + 1):
            ids.extend((ell, e) for e in fam.enumerate_length(ell))
        for s in grid:
            pool = [e for ell, e in ids if ell <= s]
            if fam.counting_mode == "unordered-distinct":
                pres = itertools.combinations(pool, 2)
            elif fam.counting_mode == "ordered-distinct":
                pres = itertools.permutations(pool, 2)
            else:
                pres = itertools.product(pool, repeat=2)
            count = total = 0
            for pair in pres:
                total += 1
                if prop.holds(None, build_two_identity_bijective(pair)):
                    count += 1
            points[s] = (count, total)
        return points
    count = total = 0
    want = set(grid)
    for ell in range(grid[-1] + 1):
        for e in fam.enumerate_length(ell):
            total += 1
            x, desc = fam.classify(e)
            if prop.holds(x, desc):
                count += 1
        if ell in want:
            points[ell] = (count, total)
    return points


def _aggregate(fam, prop, grid):
    if isinstance(fam, TwoIdentityFamily):
        return _aggregate_two(fam, prop, grid)
    if isinstance(fam, ConstantsLikeFamily):
        return _closed_form(fam, prop, grid)
    points = {}
    count = total = 0
    cache: dict = {}
    want = set(grid)
    for ell, row in fam.rows(grid[-1]):
        for key, c in row:
            if key not in cache:
                x, desc = fam.describe(key)
                cache[key] = prop.holds(x, desc)
            total += c
            if cache[key]:
                count += c
        if ell in want:
            points[ell] = (count, total)
    return points


def _aggregate_two(fam, prop, grid):
    mode = fam.counting_mode
    points = {}
    if prop.kind == "invariant" and prop.inv.family == "OneCycle":
        want = set(grid)
        for s, ordered, diagonal, N in CoprimeSweep(grid[-1]):
            if s not in want:
                continue
            if mode == "ordered-with-rep":
                count = ordered
            elif mode == "unordered-distinct":
                count = (ordered - diagonal) // 2
            else:
                count = ordered - diagonal
            if prop.negated:
                count = fam.total(s) - count
            points[s] = (count, fam.total(s))
        return points
    # general sentence: pairs of |X| values with multiplicities
    for s in grid:
        c = abs_x_counts(s)
        truth = {}
        ordered = 0
        diagonal = 0
        for a, ca in enumerate(c):
            for b, cb in enumerate(c):
                if not (ca and cb):
                    continue
                key = (min(a, b), max(a, b))
                if key not in truth:
                    truth[key] = prop.holds(None, build_two_identity_bijective(key))
                if truth[key]:
                    ordered += ca * cb
                    if a == b:
                        diagonal += ca
        if mode == "ordered-with-rep":
            count = ordered
        elif mode == "unordered-distinct":
            count = (ordered - diagonal) // 2
        else:
            count = ordered - diagonal
        points[s] = (count, fam.total(s))
    return points


def _closed_form(fam, prop, grid):
    if isinstance(fam, ConstantsLikeFamily):
        if prop.kind not in ("ClassA", "ClassB"):
            raise UnsupportedError("constants-like closed forms cover ClassA and ClassB")
        out = {}
        for s in grid:
            pa, pb, total = fam.counts(s)
            count = pa if prop.kind == "ClassA" else pb
            out[s] = (total - count if prop.negated else count, total)
        return out
    raise UnsupportedError(f"no closed form for {fam.name}")


# -- subsequence analysis -------------------------------------------------

@dataclass
class SubsequenceReport:
    even_last: float
    odd_last: float
    even_spread: float
    odd_spread: float
    even_trend: str
    odd_trend: str
    gap: float
    tolerance: float
    window: int
    oscillation: bool
    references: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _trend(vals: Sequence[Fraction]) -> str:
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if all(d == 0 for d in diffs):
        return "constant"
    if all(d <= 0 for d in diffs):
        return "decreasing"
    if all(d >= 0 for d in diffs):
        return "increasing"
    return "mixed"


def even_odd_limits(series: DensitySeries, window: int = 10, tolerance: float = 0.05) -> SubsequenceReport:
    """Last values, spread over the last ``window`` points, and trend per parity.

    Oscillation is flagged when the last even and odd values differ by more
    than ``tolerance``.  Nothing here is a proof that a limit exists.
    """
    even = [s for s in series.s_values if s % 2 == 0]
    odd = [s for s in series.s_values if s % 2 == 1]
    if len(even) < window or len(odd) < window:
        raise ValueError(f"need {window} points per parity, have {len(even)} even and {len(odd)} odd")
    ev = [series.density(s) for s in even[-window:]]
    od = [series.density(s) for s in odd[-window:]]
    gap = abs(float(ev[-1]) - float(od[-1]))
    return SubsequenceReport(
        even_last=float(ev[-1]), odd_last=float(od[-1]),
        even_spread=float(max(ev) - min(ev)), odd_spread=float(max(od) - min(od)),
        even_trend=_trend(ev), odd_trend=_trend(od),
        gap=gap, tolerance=tolerance, window=window, oscillation=gap > tolerance)


@lru_cache(maxsize=1)
def odd_prime_product(limit: int = 10 ** 6) -> float:
    """prod over odd primes p <= limit of (1 - 1/p^2)."""
    import numpy as np
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(limit ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    primes = np.nonzero(sieve)[0]
    primes = primes[primes > 2].astype(np.float64)
    return float(np.exp(np.sum(np.log1p(-1.0 / primes ** 2))))


def coprime_reference_limits(limit: int = 10 ** 6) -> dict:
    prod = odd_prime_product(limit)
    return {"even": 5 / 9 * prod, "odd": 8 / 9 * prod, "odd_prime_product": prod}


def coprime_density(s_max: int | None = None, s_values=None,
                    counting_mode: str = "unordered-distinct", window: int = 10):
    series = density_series("two-id-bijective", "OneCycle", s_max, "aggregate", s_values,
                            counting_mode=counting_mode)
    refs = coprime_reference_limits()
    try:
        report = even_odd_limits(series, window)
        report.references = refs
    except ValueError:
        report = None
    return series, report


def constants_like_density(n: int, r: int, s_max: int | None = None, s_values=None, m: int = 1):
    fam = ConstantsLikeFamily(n, r, m)
    a = density_series(fam, "ClassA", s_max, "closed-form", s_values)
    b = density_series(fam, "ClassB", s_max, "closed-form", s_values)
    return a, b


def constant_example_densities(s_max: int | None = None, s_values=None) -> dict:
    out = {}
    for name in ("ClassS1", "ClassS2", "ClassS3", "TermEq u=c v=S(c)"):
        out[name] = density_series("constant-bijective", name, s_max, "aggregate", s_values)
    out["limits"] = {"ClassS1": Fraction(1, 4), "ClassS2": Fraction(1, 4),
                     "ClassS3": Fraction(1, 2), "TermEq u=c v=S(c)": Fraction(1, 6)}
    return out


def multi_unary_phi_density(n: int, m: int, k: int, s_max: int | None = None,
                            s_values=None) -> DensitySeries:
    """Lower bound on the density of the non-injectivity sentence.

    Every presentation whose identities all have two non-bare sides (and,
    for a single symbol, unequal side lengths) satisfies the sentence, so
    C(J_s, k) / C(I_s, k) bounds its density from below.
    """
    grid = _grid(s_max, s_values)
    mm = m * m
    pts = {}
    for s in grid:
        I = mm * sum((ell + 1) * n ** ell for ell in range(s + 1))
        if n >= 2:
            J = mm * sum((ell - 1) * n ** ell for ell in range(2, s + 1))
        else:
            J = mm * sum(ell - 1 - (ell % 2 == 0) for ell in range(2, s + 1))
        pts[s] = (math.comb(J, k), math.comb(I, k))
    return DensitySeries("multi-unary", "NotInjective (lower bound)", "closed-form", pts,
                         {"n": n, "m": m, "k": k})


def unary_not_injective_failures(s: int) -> int:
    """Identities of length <= s giving an omega-chain or a cycle: 1 + 2s + floor(s/2)."""
    return 1 + 2 * s + s // 2
