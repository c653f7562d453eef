"""Structures presented by generators and identities.

Each builder returns a descriptor: a small symbolic description of the
presented structure that can answer the word problem (``position``) and,
when finite, be turned into explicit function tables.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, InfiniteStructureError, UnsupportedError
from .terms import Identity, Presentation, Relator, Term, x_statistic
from .variety import GaifmanGroup, Lattice, VarietySpec

MATERIALIZE_BUDGET = 10 ** 6


def _signed(term: Term, symbol: str, inverse: str | None) -> int:
    x = 0
    for s in term.symbols:
        if s == symbol:
            x += 1
        elif inverse is not None and s == inverse:
            x -= 1
        else:
            raise UnsupportedError(f"symbol {s!r} not in this structure's language")
    return x


# -- descriptors --------------------------------------------------------

@dataclass(frozen=True)
class ZChain:
    symbol: str = "S"
    inverse: str | None = "S^-1"
    variant = "ZChain"
    size = None

    def position(self, t: Term):
        return _signed(t, self.symbol, self.inverse)


@dataclass(frozen=True)
class Cycle:
    n: int
    symbol: str = "S"
    inverse: str | None = "S^-1"
    variant = "Cycle"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("cycle size must be >= 1")

    @property
    def size(self):
        return self.n

    def position(self, t: Term):
        return _signed(t, self.symbol, self.inverse) % self.n


@dataclass(frozen=True)
class OmegaChain:
    symbol: str = "f"
    variant = "OmegaChain"
    size = None

    def position(self, t: Term):
        return _signed(t, self.symbol, None)


@dataclass(frozen=True)
class RhoShape:
    """A chain of ``chain`` elements feeding a cycle of ``cycle`` elements."""

    chain: int
    cycle: int
    symbol: str = "f"
    variant = "RhoShape"

    def __post_init__(self):
        if self.chain < 1 or self.cycle < 1:
            raise ValueError("RhoShape needs chain >= 1 and cycle >= 1")

    @property
    def size(self):
        return self.chain + self.cycle

    def position(self, t: Term):
        k = _signed(t, self.symbol, None)
        return k if k < self.chain else self.chain + (k - self.chain) % self.cycle


def _group_value(t) -> int:
    if isinstance(t, Relator):
        return sum(t.letters)
    if isinstance(t, int):
        return t
    raise UnsupportedError("group terms are relators or integer multiples of a")


@dataclass(frozen=True)
class CyclicGroup:
    n: int
    variant = "CyclicGroup"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("group order must be >= 1")

    @property
    def size(self):
        return self.n

    def position(self, t):
        return _group_value(t) % self.n


@dataclass(frozen=True)
class IntegersGroup:
    variant = "IntegersGroup"
    size = None

    def position(self, t):
        return _group_value(t)


@dataclass(frozen=True)
class LatticeQuotient:
    """Structure on m generators for a commutative bijective variety.

    Generator g lives in the component of ``roots[g]`` and equals
    ``shifts[g]`` applied to that root.  A root component is
    G(V) / <quotients[root]>; an empty quotient means the free copy G(V).
    """

    spec: VarietySpec
    roots: tuple[int, ...]
    shifts: tuple[tuple[int, ...], ...]
    quotients: tuple[tuple[tuple[int, ...], ...], ...]
    variant = "LatticeQuotient"

    def lattice(self, root: int) -> Lattice:
        return _lattice(self.spec.relations, len(self.spec.symbols), self.quotients[root])

    @property
    def components(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.roots)))

    def component_size(self, root: int) -> int | None:
        return self.lattice(root).index

    @property
    def size(self):
        total = 0
        for r in self.components:
            s = self.component_size(r)
            if s is None:
                return None
            total += s
        return total

    def position(self, t: Term):
        g = self.spec.signature.generators.index(t.base)
        root = self.roots[g]
        v = self.spec.vector(t)
        return root, self.lattice(root).reduce([a + b for a, b in zip(v, self.shifts[g])])


@lru_cache(maxsize=4096)
def _lattice(relations, n, extra) -> Lattice:
    return Lattice(tuple(relations) + tuple(extra), n)


@dataclass(frozen=True)
class DisjointUnion:
    parts: tuple
    generators: tuple = ()
    variant = "DisjointUnion"

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        gens = tuple(self.generators) or tuple(
            f"a{i + 1}" if len(self.parts) > 1 else "a" for i in range(len(self.parts)))
        object.__setattr__(self, "generators", gens)

    @property
    def size(self):
        sizes = [p.size for p in self.parts]
        return None if any(s is None for s in sizes) else sum(sizes)

    def position(self, t: Term):
        i = self.generators.index(t.base)
        return i, self.parts[i].position(t.rebase("a"))


@dataclass(frozen=True)
class ConstantAugmented:
    """Structure generated by a and a constant c with S^3(c) = c.

    When ``merged``, a = S^offset(c) and the whole structure is c's cycle.
    """

    a_part: object
    c_part: object
    merged: bool = False
    offset: int = 0
    case: int = 0
    variant = "ConstantAugmented"

    @property
    def size(self):
        if self.merged:
            return self.c_part.size
        if self.a_part.size is None or self.c_part.size is None:
            return None
        return self.a_part.size + self.c_part.size

    def position(self, t: Term):
        x = _signed(t, "S", "S^-1")
        if self.merged:
            shift = self.offset if t.base == "a" else 0
            return (x + shift) % self.c_part.size
        part = self.a_part if t.base == "a" else self.c_part
        return t.base, part.position(Term(t.symbols, "a"))


DESCRIPTOR_TYPES = {c.variant: c for c in (
    ZChain, Cycle, OmegaChain, RhoShape, CyclicGroup, IntegersGroup,
    LatticeQuotient, DisjointUnion, ConstantAugmented)}


class WordProblemOracle:
    """Decides u(x) = v(y) in a presented structure."""

    def __init__(self, desc):
        self.desc = desc

    def equal(self, u, v) -> bool:
        return self.desc.position(u) == self.desc.position(v)

    __call__ = equal


# -- serialization ------------------------------------------------------

def descriptor_to_dict(desc) -> dict:
    d: dict = {"variant": desc.variant}
    if isinstance(desc, (ZChain, Cycle)):
        if isinstance(desc, Cycle):
            d["n"] = desc.n
        d["symbol"], d["inverse"] = desc.symbol, desc.inverse
    elif isinstance(desc, OmegaChain):
        d["symbol"] = desc.symbol
    elif isinstance(desc, RhoShape):
        d.update(chain=desc.chain, cycle=desc.cycle, symbol=desc.symbol)
    elif isinstance(desc, CyclicGroup):
        d["n"] = desc.n
    elif isinstance(desc, LatticeQuotient):
        d["spec"] = json.loads(desc.spec.to_json())
        d["roots"] = list(desc.roots)
        d["shifts"] = [list(s) for s in desc.shifts]
        d["quotients"] = [[list(r) for r in q] for q in desc.quotients]
        d["size"] = desc.size
    elif isinstance(desc, DisjointUnion):
        d["parts"] = [descriptor_to_dict(p) for p in desc.parts]
        d["generators"] = list(desc.generators)
    elif isinstance(desc, ConstantAugmented):
        d.update(a_part=descriptor_to_dict(desc.a_part), c_part=descriptor_to_dict(desc.c_part),
                 merged=desc.merged, offset=desc.offset, case=desc.case)
    return d


def descriptor_from_dict(d: dict):
    v = d["variant"]
    if v == "ZChain":
        return ZChain(d.get("symbol", "S"), d.get("inverse", "S^-1"))
    if v == "Cycle":
        return Cycle(d["n"], d.get("symbol", "S"), d.get("inverse", "S^-1"))
    if v == "OmegaChain":
        return OmegaChain(d.get("symbol", "f"))
    if v == "RhoShape":
        return RhoShape(d["chain"], d["cycle"], d.get("symbol", "f"))
    if v == "CyclicGroup":
        return CyclicGroup(d["n"])
    if v == "IntegersGroup":
        return IntegersGroup()
    if v == "LatticeQuotient":
        return LatticeQuotient(VarietySpec.from_json(json.dumps(d["spec"])), tuple(d["roots"]),
                               tuple(tuple(s) for s in d["shifts"]),
                               tuple(tuple(tuple(r) for r in q) for q in d["quotients"]))
    if v == "DisjointUnion":
        return DisjointUnion(tuple(descriptor_from_dict(p) for p in d["parts"]),
                             tuple(d["generators"]))
    if v == "ConstantAugmented":
        return ConstantAugmented(descriptor_from_dict(d["a_part"]), descriptor_from_dict(d["c_part"]),
                                 d["merged"], d["offset"], d.get("case", 0))
    raise ValueError(f"unknown variant {v!r}")


def descriptor_to_json(desc) -> str:
    return json.dumps(descriptor_to_dict(desc), sort_keys=True)


# -- builders -----------------------------------------------------------

def _bij_x(e) -> int:
    if isinstance(e, int):
        return e
    if isinstance(e, Term):
        return x_statistic(e)
    return x_statistic(e.lhs) - x_statistic(e.rhs)


def build_bijective(e) -> ZChain | Cycle:
    """One identity t(a) = a (two-sided forms are normalized by X)."""
    x = abs(_bij_x(e))
    return ZChain() if x == 0 else Cycle(x)


def build_unary(e) -> OmegaChain | RhoShape | Cycle:
    if isinstance(e, Identity):
        r, r2 = e.lhs.length, e.rhs.length
    else:
        r, r2 = e
    lo, hi = min(r, r2), max(r, r2)
    if lo == hi:
        return OmegaChain()
    if lo == 0:
        return Cycle(hi, "f", None)
    return RhoShape(lo, hi - lo)


def build_abelian(w) -> CyclicGroup | IntegersGroup:
    x = abs(_group_value(w))
    return IntegersGroup() if x == 0 else CyclicGroup(x)


def build_two_identity_bijective(pair) -> ZChain | Cycle:
    m1, m2 = (abs(_bij_x(e)) for e in pair)
    g = math.gcd(m1, m2)
    return ZChain() if g == 0 else Cycle(g)


def coset_equal(u, v, tstar, g: GaifmanGroup) -> bool:
    """u(a) = v(a) in <a | t*(a) = a>: same coset of <t*> in G(V)."""
    lat = _lattice(g.lattice.rows, g.lattice.n, (g.vector(tstar),))
    a, b = g.vector(u), g.vector(v)
    return lat.contains([x - y for x, y in zip(a, b)])


def build_genbij(presentation: Presentation | Identity, spec: VarietySpec) -> LatticeQuotient:
    if isinstance(presentation, Identity):
        presentation = Presentation(spec.signature.generator_count, (presentation,))
    if len(presentation.identities) != 1:
        raise UnsupportedError("generalized bijective builder takes exactly one identity")
    from .variety import inverse_words
    inverse_words(spec)  # raises if some symbol has no certified inverse
    (e,) = presentation.identities
    gens = spec.signature.generators
    m = len(gens)
    i, j = gens.index(e.lhs.base), gens.index(e.rhs.base)
    delta = tuple(a - b for a, b in zip(spec.vector(e.lhs), spec.vector(e.rhs)))
    zero = (0,) * len(spec.symbols)
    roots = list(range(m))
    shifts = [zero] * m
    quotients: list[tuple] = [()] * m
    if i == j:
        quotients[i] = (delta,)
    else:
        # t1(a_i) = t2(a_j) gives a_j = t1 t2^-1 (a_i)
        roots[j] = i
        shifts[j] = delta
    return LatticeQuotient(spec, tuple(roots), tuple(shifts), tuple(quotients))


def build_constant_example(e: Identity) -> ConstantAugmented:
    """Classify one identity in the language {S, S^-1, c} with S^3(c) = c."""
    k = x_statistic(e.lhs) - x_statistic(e.rhs)
    bases = (e.lhs.base, e.rhs.base)
    if bases == ("a", "a"):
        a_part = ZChain() if k == 0 else Cycle(abs(k))
        return ConstantAugmented(a_part, Cycle(3), case=1)
    if bases == ("c", "c"):
        return ConstantAugmented(ZChain(), Cycle(math.gcd(k, 3)), case=2)
    # t(a) = t'(c) gives a = S^{-k}(c); t(c) = t'(a) gives a = S^{k}(c)
    offset = -k if bases[0] == "a" else k
    return ConstantAugmented(Cycle(3), Cycle(3), merged=True, offset=offset % 3, case=3)


# -- explicit finite structures -----------------------------------------

@dataclass
class FiniteStructure:
    size: int
    tables: dict[str, np.ndarray]
    named: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name, tab in self.tables.items():
            tab = np.asarray(tab, dtype=np.int64)
            if tab.shape not in ((self.size,), (self.size, self.size)):
                raise ValueError(f"table {name!r} has shape {tab.shape}")
            if tab.size and (tab.min() < 0 or tab.max() >= self.size):
                raise ValueError(f"table {name!r} leaves the universe")
            self.tables[name] = tab
        for name, x in self.named.items():
            if not 0 <= x < self.size:
                raise ValueError(f"named element {name}={x} out of range")

    @property
    def unary_tables(self) -> dict[str, np.ndarray]:
        return {k: v for k, v in self.tables.items() if v.ndim == 1}

    def __add__(self, other: "FiniteStructure") -> "FiniteStructure":
        """Disjoint union (unary tables only)."""
        if set(self.tables) != set(other.tables):
            raise ValueError("disjoint union needs the same symbols")
        tabs = {}
        for k in self.tables:
            if self.tables[k].ndim != 1:
                raise UnsupportedError("disjoint union of structures with binary operations")
            tabs[k] = np.concatenate([self.tables[k], other.tables[k] + self.size])
        named = dict(self.named)
        named.update({k: v + self.size for k, v in other.named.items()})
        return FiniteStructure(self.size + other.size, tabs, named)

    def to_dot(self, name: str = "structure") -> str:
        lines = [f"digraph {name} {{"]
        label = {v: k for k, v in sorted(self.named.items(), reverse=True)}
        for x in range(self.size):
            extra = f' label="{x}:{label[x]}"' if x in label else ""
            lines.append(f"  {x} [shape=circle{extra}];")
        for sym, tab in self.unary_tables.items():
            for x in range(self.size):
                lines.append(f'  {x} -> {int(tab[x])} [label="{sym}"];')
        lines.append("}")
        return "\n".join(lines)


def _cycle_tables(n, symbol, inverse):
    tabs = {symbol: (np.arange(n) + 1) % n}
    if inverse is not None:
        tabs[inverse] = (np.arange(n) - 1) % n
    return tabs


def materialize_finite(desc, budget: int = MATERIALIZE_BUDGET) -> FiniteStructure:
    size = desc.size
    if size is None:
        raise InfiniteStructureError(f"{desc.variant} is infinite")
    if size > budget:
        raise BudgetExceeded(f"{size} elements exceeds budget {budget}")
    if isinstance(desc, Cycle):
        return FiniteStructure(size, _cycle_tables(size, desc.symbol, desc.inverse), {"a": 0})
    if isinstance(desc, RhoShape):
        f = np.arange(1, size + 1)
        f[-1] = desc.chain
        return FiniteStructure(size, {desc.symbol: f}, {"a": 0})
    if isinstance(desc, CyclicGroup):
        n = desc.n
        r = np.arange(n)
        return FiniteStructure(n, {"+": (r[:, None] + r[None, :]) % n, "-": (-r) % n},
                               {"0": 0, "a": 1 % n})
    if isinstance(desc, DisjointUnion):
        parts = [materialize_finite(p, budget) for p in desc.parts]
        out = None
        for part, gen in zip(parts, desc.generators):
            part = FiniteStructure(part.size, dict(part.tables),
                                   {gen: part.named["a"]} if gen else {})
            out = part if out is None else out + part
        return out
    if isinstance(desc, ConstantAugmented):
        if desc.merged:
            n = desc.c_part.size
            return FiniteStructure(n, _cycle_tables(n, "S", "S^-1"), {"c": 0, "a": desc.offset % n})
        a = materialize_finite(desc.a_part, budget)
        c = materialize_finite(desc.c_part, budget)
        return FiniteStructure(a.size, a.tables, {"a": 0}) + FiniteStructure(c.size, c.tables, {"c": 0})
    if isinstance(desc, LatticeQuotient):
        return _materialize_quotient(desc)
    raise UnsupportedError(f"cannot materialize {desc.variant}")


def _materialize_quotient(desc: LatticeQuotient) -> FiniteStructure:
    syms = desc.spec.symbols
    n = len(syms)
    index: dict = {}
    for root in desc.components:
        lat = desc.lattice(root)
        mods = lat.torsion
        for res in np.ndindex(*mods) if mods else [()]:
            index[(root, tuple(int(x) for x in res))] = len(index)
    tabs = {s: np.zeros(len(index), dtype=np.int64) for s in syms}
    for (root, res), x in index.items():
        lat = desc.lattice(root)
        mods = lat.torsion
        for i, s in enumerate(syms):
            step = lat.reduce(tuple(int(k == i) for k in range(n)))
            tabs[s][x] = index[(root, tuple((a + b) % d for a, b, d in zip(res, step, mods)))]
    named = {}
    gens = desc.spec.signature.generators
    for g, gen in enumerate(gens):
        root = desc.roots[g]
        named[gen] = index[(root, desc.lattice(root).reduce(desc.shifts[g]))]
    return FiniteStructure(len(index), tabs, named)
