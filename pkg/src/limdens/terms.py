"""Terms, identities and relators over unary signatures.

A term is a word of unary function symbols applied to a base (a generator
or a constant).  Symbols are stored by name, outermost first, so
``S(S(f(a)))`` is ``Term(("S", "S", "f"), "a")``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import ArityError, ParseError, UnknownSymbolError

INV = "^-1"


def inverse_name(symbol: str) -> str:
    """Name of the formal inverse: S <-> S^-1."""
    return symbol[: -len(INV)] if symbol.endswith(INV) else symbol + INV


@dataclass(frozen=True)
class Signature:
    function_symbols: tuple[str, ...]
    constants: tuple[str, ...] = ()
    generator_count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "function_symbols", tuple(self.function_symbols))
        object.__setattr__(self, "constants", tuple(self.constants))
        if not self.function_symbols:
            raise ValueError("signature needs at least one function symbol")
        names = self.function_symbols + self.constants
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in signature: {names}")
        if self.generator_count < 1:
            raise ValueError("generator_count must be >= 1")

    @property
    def n(self) -> int:
        return len(self.function_symbols)

    @property
    def generators(self) -> tuple[str, ...]:
        if self.generator_count == 1:
            return ("a",)
        return tuple(f"a{i}" for i in range(1, self.generator_count + 1))

    @property
    def bases(self) -> tuple[str, ...]:
        return self.generators + self.constants

    def index(self, symbol: str) -> int:
        return self.function_symbols.index(symbol)

    def resolve_base(self, name: str) -> str | None:
        if name in self.bases:
            return name
        if self.generator_count == 1 and name == "a1":
            return "a"
        return None

    def to_dict(self) -> dict:
        return {
            "function_symbols": list(self.function_symbols),
            "constants": list(self.constants),
            "generator_count": self.generator_count,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Signature":
        return cls(tuple(d["function_symbols"]), tuple(d.get("constants", ())),
                   int(d.get("generator_count", 1)))


BIJECTIVE = Signature(("S", "S^-1"))
UNARY = Signature(("f",))


def free_signature(n: int, m: int = 1, constants: Sequence[str] = ()) -> Signature:
    """n free unary symbols f1..fn (just ``f`` when n == 1) on m generators."""
    syms = ("f",) if n == 1 else tuple(f"f{i}" for i in range(1, n + 1))
    return Signature(syms, tuple(constants), m)


@dataclass(frozen=True)
class Term:
    symbols: tuple[str, ...]
    base: str = "a"

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    @property
    def length(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def then(self, outer: "Term | Sequence[str]") -> "Term":
        """Apply the word ``outer`` on top of this term."""
        word = outer.symbols if isinstance(outer, Term) else tuple(outer)
        return Term(tuple(word) + self.symbols, self.base)

    def rebase(self, base: str) -> "Term":
        return Term(self.symbols, base)

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    @property
    def length(self) -> int:
        return self.lhs.length + self.rhs.length

    def __str__(self):
        return format_identity(self)


@dataclass(frozen=True)
class Relator:
    """Word over {+a, -a} for the abelian-group mode; letters are +1 / -1."""

    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if any(x not in (1, -1) for x in self.letters):
            raise ValueError("relator letters must be +1 or -1")

    @property
    def length(self) -> int:
        return len(self.letters)

    def __str__(self):
        return format_relator(self)


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    identities: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "identities", tuple(self.identities))

    @property
    def length(self) -> int:
        return max((i.length for i in self.identities), default=0)


# -- printing -----------------------------------------------------------

def _runs(symbols):
    for sym, grp in itertools.groupby(symbols):
        yield sym, sum(1 for _ in grp)


def format_term(t: Term) -> str:
    out = t.base
    for sym, k in reversed(list(_runs(t.symbols))):
        if k == 1:
            out = f"{sym}({out})"
        elif sym.endswith(INV):
            out = f"{inverse_name(sym)}^-{k}({out})"
        else:
            out = f"{sym}^{k}({out})"
    return out


def format_identity(e: Identity) -> str:
    return f"{format_term(e.lhs)} = {format_term(e.rhs)}"


def format_relator(r: Relator) -> str:
    if not r.letters:
        return "0"
    return " ".join("a" if x > 0 else "a^-1" for x in r.letters)


# -- parsing ------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[+-]?\d+")


class _TermParser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.text, self.pos)
        self.pos += 1

    def term(self) -> Term:
        self.ws()
        start = self.pos
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a symbol or base name", self.text, self.pos)
        name = m.group()
        self.pos = m.end()
        exp = None
        if self.peek() == "^":
            self.pos += 1
            self.ws()
            mi = _INT.match(self.text, self.pos)
            if not mi:
                raise ParseError("expected an integer exponent", self.text, self.pos)
            exp = int(mi.group())
            self.pos = mi.end()
        if self.peek() != "(":
            if exp is not None:
                raise ParseError(f"exponent on base {name!r}", self.text, start)
            if name in self.sig.function_symbols:
                raise ArityError(f"symbol {name!r} needs one argument", self.text, self.pos)
            base = self.sig.resolve_base(name)
            if base is None:
                raise UnknownSymbolError(f"unknown base {name!r}", self.text, start)
            return Term((), base)
        self.pos += 1
        if self.peek() == ")":
            raise ArityError(f"symbol {name!r} applied to nothing", self.text, self.pos)
        inner = self.term()
        if self.peek() == ",":
            raise ArityError(f"symbol {name!r} is unary", self.text, self.pos)
        self.expect(")")
        word = self._expand(name, exp, start)
        return inner.then(word)

    def _expand(self, name, exp, start):
        if exp is None:
            exp = 1
        sym = name if exp >= 0 else inverse_name(name)
        if sym not in self.sig.function_symbols:
            raise UnknownSymbolError(f"unknown function symbol {sym!r}", self.text, start)
        return (sym,) * abs(exp)

    def done(self):
        self.ws()
        if self.pos != len(self.text):
            raise ParseError("trailing input", self.text, self.pos)


def parse_term(text: str, sig: Signature) -> Term:
    p = _TermParser(text, sig)
    t = p.term()
    p.done()
    return t


def parse_identity(text: str, sig: Signature) -> Identity:
    p = _TermParser(text, sig)
    lhs = p.term()
    p.expect("=")
    rhs = p.term()
    p.done()
    return Identity(lhs, rhs)


_REL_TOKEN = re.compile(r"\s*([+-]?)\s*(\d*)\s*a(\^-1)?")


def parse_relator(text: str) -> Relator:
    """Parse ``a a a^-1``, ``3a - 1a``, ``a+a+a-a`` or ``0``."""
    s = text.strip()
    if s in ("", "0"):
        return Relator(())
    letters: list[int] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _REL_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("bad relator token", text, pos)
        sign = -1 if m.group(1) == "-" else 1
        if m.group(3):
            sign = -sign
        count = int(m.group(2)) if m.group(2) else 1
        letters.extend([sign] * count)
        pos = m.end()
    return Relator(tuple(letters))


# -- statistics ---------------------------------------------------------

def x_statistic(obj, projection: Mapping[str, int] | None = None) -> int:
    """Signed count: #S - #S^-1 for terms, letter sum for relators.

    With ``projection`` (symbol -> integer) the term value is the sum of
    the projected symbols, which is how Pi_1 generalizes the count.
    """
    if isinstance(obj, Relator):
        return sum(obj.letters)
    if isinstance(obj, Identity):
        return x_statistic(obj.lhs, projection) - x_statistic(obj.rhs, projection)
    if projection is not None:
        return sum(projection[s] for s in obj.symbols)
    roots = {inverse_name(s) if s.endswith(INV) else s for s in obj.symbols}
    if len(roots) > 1:
        raise ValueError(f"mixed symbols {sorted(roots)} need a projection")
    return sum(-1 if s.endswith(INV) else 1 for s in obj.symbols)


# -- enumeration --------------------------------------------------------

@dataclass(frozen=True)
class IdentityMode:
    """Which identities are admissible.

    ``one_sided`` restricts to t(x) = y with a bare right-hand side.
    """

    signature: Signature
    one_sided: bool = False
    lhs_bases: tuple[str, ...] | None = None
    rhs_bases: tuple[str, ...] | None = None

    @property
    def _lhs(self):
        return self.lhs_bases if self.lhs_bases is not None else self.signature.generators

    @property
    def _rhs(self):
        return self.rhs_bases if self.rhs_bases is not None else self.signature.generators

    @property
    def base_pairs(self) -> int:
        return len(self._lhs) * len(self._rhs)

    def count(self, length: int) -> int:
        n = self.signature.n
        if self.one_sided:
            return self.base_pairs * n ** length
        return self.base_pairs * n ** length * (length + 1)

    def total(self, s: int) -> int:
        """Number of identities of length at most s, in closed form."""
        n, b = self.signature.n, self.base_pairs
        if self.one_sided:
            return b * (s + 1) if n == 1 else b * (n ** (s + 1) - 1) // (n - 1)
        if n == 1:
            return b * (s + 1) * (s + 2) // 2
        return b * (n ** (s + 1) * ((s + 1) * (n - 1) - 1) + 1) // (n - 1) ** 2

    def enumerate(self, length: int) -> Iterator[Identity]:
        syms = self.signature.function_symbols
        for word in itertools.product(syms, repeat=length):
            splits = (length,) if self.one_sided else range(length + 1)
            for k in splits:
                for lb in self._lhs:
                    for rb in self._rhs:
                        yield Identity(Term(word[:k], lb), Term(word[k:], rb))


@dataclass(frozen=True)
class AbelianMode:
    """Single relators over {+a, -a}; 2^length of each length."""

    def count(self, length: int) -> int:
        return 2 ** length

    def total(self, s: int) -> int:
        return 2 ** (s + 1) - 1

    def enumerate(self, length: int) -> Iterator[Relator]:
        for letters in itertools.product((1, -1), repeat=length):
            yield Relator(letters)


def bijective_mode(m: int = 1) -> IdentityMode:
    return IdentityMode(Signature(("S", "S^-1"), (), m), one_sided=True)


def unary_mode(m: int = 1) -> IdentityMode:
    return IdentityMode(free_signature(1, m))


def free_mode(n: int, m: int = 1) -> IdentityMode:
    return IdentityMode(free_signature(n, m))


def constant_bijective_mode() -> IdentityMode:
    """Language {S, S^-1, c} on one generator; both sides range over {a, c}."""
    sig = Signature(("S", "S^-1"), ("c",), 1)
    return IdentityMode(sig, False, ("a", "c"), ("a", "c"))


def enumerate_identities(mode, length: int):
    if length < 0:
        raise ValueError("length must be >= 0")
    return mode.enumerate(length)


def enumerate_up_to(mode, s: int):
    for length in range(s + 1):
        yield from mode.enumerate(length)
