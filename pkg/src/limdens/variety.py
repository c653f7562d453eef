"""Variety specifications and the abelian group G(V) of symbol strings.

For a commutative variety in which every symbol is a bijection, a string of
symbols is determined up to provable equality by its exponent vector in Z^n
modulo the lattice spanned by the abelianized relations.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import NotCertifiedError, RankZeroError
from .terms import Signature, Term

FAMILIES = (
    "basic-bijective",
    "single-unary-free",
    "abelian-groups",
    "commutative-genbij",
    "constant-bijective-S3c",
    "multi-unary-free",
)
BIJECTIVE_FAMILIES = ("basic-bijective", "commutative-genbij", "constant-bijective-S3c")


class Lattice:
    """Integer row lattice L in Z^n, kept in Smith coordinates.

    With D = S*M*T, a row vector x lies in L iff the entries of x*T are
    divisible by the diagonal of D (and vanish past the rank).
    """

    def __init__(self, rows: Sequence[Sequence[int]], n: int):
        self.n = n
        self.rows = tuple(tuple(int(v) for v in r) for r in rows if any(r))
        if self.rows:
            D, _, T = smith_normal_decomp(Matrix(self.rows))
            diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
            self.diag = tuple(d for d in diag if d != 0)
            self.transform = [[int(T[i, j]) for j in range(n)] for i in range(n)]
        else:
            self.diag = ()
            self.transform = [[int(i == j) for j in range(n)] for i in range(n)]
        self.rank = len(self.diag)
        # columns of T, as tuples, for fast dot products
        self._cols = [tuple(self.transform[i][j] for i in range(n)) for j in range(n)]

    def coords(self, x: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(x, col)) for col in self._cols]

    def contains(self, x: Sequence[int]) -> bool:
        w = self.coords(x)
        for i, d in enumerate(self.diag):
            if w[i] % d:
                return False
        return all(v == 0 for v in w[self.rank:])

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of x + L."""
        w = self.coords(x)
        tors = tuple(w[i] % d for i, d in enumerate(self.diag) if d > 1)
        return tors + tuple(w[self.rank:])

    @property
    def quotient_rank(self) -> int:
        return self.n - self.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d > 1)

    @property
    def index(self) -> int | None:
        """|Z^n / L|, or None when infinite."""
        if self.quotient_rank:
            return None
        out = 1
        for d in self.diag:
            out *= d
        return out

    def extended(self, extra: Sequence[Sequence[int]]) -> "Lattice":
        return Lattice(self.rows + tuple(tuple(r) for r in extra), self.n)


@dataclass(frozen=True)
class VarietySpec:
    signature: Signature
    family: str
    relations: tuple[tuple[int, ...], ...] = ()
    declared_inverses: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        rels = tuple(tuple(int(v) for v in r) for r in self.relations)
        for r in rels:
            if len(r) != self.signature.n:
                raise ValueError(f"relation {r} has wrong width for {self.signature.n} symbols")
        object.__setattr__(self, "relations", rels)
        inv = {k: tuple(v) for k, v in dict(self.declared_inverses).items()}
        for k, w in inv.items():
            for s in (k, *w):
                if s not in self.signature.function_symbols:
                    raise ValueError(f"unknown symbol {s!r} in declared inverse")
        object.__setattr__(self, "declared_inverses", inv)

    def __hash__(self):
        return hash((self.signature, self.family, self.relations,
                     tuple(sorted(self.declared_inverses.items()))))

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.signature.function_symbols

    def vector(self, word) -> tuple[int, ...]:
        """Exponent vector of a word (Term or symbol sequence)."""
        syms = word.symbols if isinstance(word, Term) else word
        idx = {s: i for i, s in enumerate(self.symbols)}
        v = [0] * len(self.symbols)
        for s in syms:
            v[idx[s]] += 1
        return tuple(v)

    # JSON: {family, symbols, relations, inverses} plus constants/generators
    # only when they differ from the defaults, so the document round-trips.
    def to_json(self) -> str:
        d = {
            "family": self.family,
            "symbols": list(self.symbols),
            "relations": [list(r) for r in self.relations],
            "inverses": {k: list(v) for k, v in self.declared_inverses.items()},
        }
        if self.signature.constants:
            d["constants"] = list(self.signature.constants)
        if self.signature.generator_count != 1:
            d["generators"] = self.signature.generator_count
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "VarietySpec":
        d = json.loads(text)
        sig = Signature(tuple(d["symbols"]), tuple(d.get("constants", ())),
                        int(d.get("generators", 1)))
        return cls(sig, d["family"], tuple(tuple(r) for r in d.get("relations", ())),
                   {k: tuple(v) for k, v in d.get("inverses", {}).items()})

    # named specs
    @classmethod
    def basic_bijective(cls, m: int = 1) -> "VarietySpec":
        return cls(Signature(("S", "S^-1"), (), m), "basic-bijective", ((1, 1),),
                   {"S": ("S^-1",), "S^-1": ("S",)})

    @classmethod
    def genbij(cls, symbols, relations, inverses=None, m: int = 1) -> "VarietySpec":
        return cls(Signature(tuple(symbols), (), m), "commutative-genbij",
                   tuple(tuple(r) for r in relations), inverses or {})

    @classmethod
    def constant_bijective(cls) -> "VarietySpec":
        return cls(Signature(("S", "S^-1"), ("c",), 1), "constant-bijective-S3c", ((1, 1),),
                   {"S": ("S^-1",), "S^-1": ("S",)})

    @classmethod
    def single_unary(cls) -> "VarietySpec":
        return cls(Signature(("f",)), "single-unary-free")

    @classmethod
    def multi_unary(cls, n: int, m: int = 1) -> "VarietySpec":
        from .terms import free_signature
        return cls(free_signature(n, m), "multi-unary-free")

    @classmethod
    def abelian(cls) -> "VarietySpec":
        return cls(Signature(("+a",)), "abelian-groups")


@dataclass(frozen=True)
class GaifmanGroup:
    """Z^n modulo the relation lattice, with a projection Pi_1 to Z.

    ``pi1`` holds Pi_1 of each symbol (None when the group is finite).  The
    projection reads the first free Smith coordinate, sign-normalized so the
    first symbol with nonzero projection maps to a positive integer.
    """

    symbols: tuple[str, ...]
    lattice: Lattice = field(compare=False, repr=False)
    rank: int
    torsion: tuple[int, ...]
    pi1: tuple[int, ...] | None

    def vector(self, word) -> tuple[int, ...]:
        syms = word.symbols if isinstance(word, Term) else word
        v = [0] * len(self.symbols)
        for s in syms:
            v[self._index[s]] += 1
        return tuple(v)

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    def element(self, word) -> tuple[int, ...]:
        """Canonical form of the class of a word in G(V)."""
        return self.lattice.reduce(self.vector(word))

    def equal(self, u, v) -> bool:
        a, b = self.vector(u), self.vector(v)
        return self.lattice.contains([x - y for x, y in zip(a, b)])

    def to_dict(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "rank": self.rank,
            "torsion": list(self.torsion),
            "pi1": None if self.pi1 is None else dict(zip(self.symbols, self.pi1)),
            "pi1_choice": "first free Smith coordinate, first nonzero symbol positive",
        }


def gaifman_group(spec: VarietySpec) -> GaifmanGroup:
    if not spec.symbols:
        raise ValueError("empty signature")
    if spec.family not in ("basic-bijective", "commutative-genbij", "constant-bijective-S3c"):
        raise ValueError(f"G(V) is defined here only for bijective families, not {spec.family}")
    n = len(spec.symbols)
    lat = Lattice(spec.relations, n)
    rank = lat.quotient_rank
    pi1 = None
    if rank:
        col = lat.rank
        vals = [lat.transform[i][col] for i in range(n)]
        first = next((v for v in vals if v), 0)
        if first < 0:
            for i in range(n):
                lat.transform[i][col] = -lat.transform[i][col]
            lat._cols[col] = tuple(-v for v in lat._cols[col])
            vals = [-v for v in vals]
        pi1 = tuple(vals)
    return GaifmanGroup(tuple(spec.symbols), lat, rank, lat.torsion, pi1)


def projection_pi1(g: GaifmanGroup, t) -> int:
    if g.pi1 is None:
        raise RankZeroError("G(V) is finite; Pi_1 is undefined")
    v = g.vector(t)
    return sum(a * b for a, b in zip(v, g.pi1))


@dataclass(frozen=True)
class E0Bound:
    e0: int

    @property
    def slack(self) -> int:
        return self.e0 + 4


def e0_bound(g: GaifmanGroup) -> E0Bound:
    if g.pi1 is None:
        raise RankZeroError("G(V) is finite; e0 is undefined")
    return E0Bound(max(abs(v) for v in g.pi1))


def inverse_word(spec: VarietySpec, symbol: str, max_length: int = 16) -> tuple[str, ...]:
    """A word u with f(u(x)) = x provable from the relations.

    A declared inverse is used when its certificate checks out; otherwise the
    shortest word (as a multiset of symbols) is searched up to ``max_length``.
    """
    if spec.family not in BIJECTIVE_FAMILIES:
        raise ValueError(f"family {spec.family} is not bijective")
    syms = spec.symbols
    if symbol not in syms:
        raise ValueError(f"unknown symbol {symbol!r}")
    lat = Lattice(spec.relations, len(syms))
    e = spec.vector((symbol,))

    def certified(word):
        v = spec.vector(word)
        return lat.contains([a + b for a, b in zip(v, e)])

    declared = spec.declared_inverses.get(symbol)
    if declared is not None and certified(declared):
        return tuple(declared)
    for length in range(max_length + 1):
        for word in itertools.combinations_with_replacement(syms, length):
            if certified(word):
                return tuple(word)
    raise NotCertifiedError(f"no inverse word for {symbol!r} up to length {max_length}")


def inverse_words(spec: VarietySpec) -> dict[str, tuple[str, ...]]:
    return {s: inverse_word(spec, s) for s in spec.symbols}
