"""First-order sentences: syntax, a brute-force model checker, and the
catalogue of invariant sentences with their truth tables on descriptors.

The checker compiles a sentence into nested Python closures over the
structure's function tables.  Quantifiers loop over the universe and
connectives short-circuit.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Callable

import sympy

from .errors import BudgetExceeded, ParseError, UnknownNameError, UnsupportedError
from .structures import (Cycle, CyclicGroup, DisjointUnion, FiniteStructure,
                         IntegersGroup, OmegaChain, RhoShape, ZChain)
from .terms import INV, Signature, Term, inverse_name, parse_term

EVAL_BUDGET = 10 ** 8


# -- syntax -------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Name:
    """Generator, constant, or the group zero; bound by the structure."""
    name: str


@dataclass(frozen=True)
class App:
    symbol: str
    arg: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Scale:
    k: int
    arg: object


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Truth:
    value: bool


def neq(a, b):
    return Not(Eq(a, b))


def conj(*parts):
    parts = tuple(p for p in parts if p != Truth(True))
    if not parts:
        return Truth(True)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts):
    parts = tuple(p for p in parts if p != Truth(False))
    if not parts:
        return Truth(False)
    return parts[0] if len(parts) == 1 else Or(parts)


def apply_word(symbols, t):
    """Apply a word (outermost first) to the term t."""
    for s in reversed(tuple(symbols)):
        t = App(s, t)
    return t


def power(symbol, k, t):
    return apply_word((symbol,) * k, t)


def term_to_fo(t: Term):
    return apply_word(t.symbols, Name(t.base))


def quantifier_depth(phi) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 1 + quantifier_depth(phi.body)
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, (And, Or)):
        return max((quantifier_depth(p) for p in phi.parts), default=0)
    if isinstance(phi, Implies):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    return 0


def free_variables(phi, bound=frozenset()) -> set[str]:
    if isinstance(phi, Var):
        return set() if phi.name in bound else {phi.name}
    if isinstance(phi, Name) or isinstance(phi, Truth):
        return set()
    if isinstance(phi, (App, Neg, Scale)):
        return free_variables(phi.arg, bound)
    if isinstance(phi, (Add, Eq, Implies)):
        return free_variables(phi.left, bound) | free_variables(phi.right, bound)
    if isinstance(phi, Not):
        return free_variables(phi.body, bound)
    if isinstance(phi, (And, Or)):
        return set().union(*(free_variables(p, bound) for p in phi.parts))
    if isinstance(phi, (Exists, Forall)):
        return free_variables(phi.body, bound | {phi.var})
    raise TypeError(f"not a formula node: {phi!r}")


# -- printing -----------------------------------------------------------

def format_fo_term(t) -> str:
    if isinstance(t, (Var, Name)):
        return t.name
    if isinstance(t, App):
        syms = []
        while isinstance(t, App):
            syms.append(t.symbol)
            t = t.arg
        out = format_fo_term(t)
        for sym, grp in reversed([(s, len(list(g))) for s, g in itertools.groupby(syms)]):
            if grp == 1:
                out = f"{sym}({out})"
            elif sym.endswith(INV):
                out = f"{inverse_name(sym)}^-{grp}({out})"
            else:
                out = f"{sym}^{grp}({out})"
        return out
    if isinstance(t, Add):
        return f"({format_fo_term(t.left)} + {format_fo_term(t.right)})"
    if isinstance(t, Neg):
        return f"-({format_fo_term(t.arg)})"
    if isinstance(t, Scale):
        return f"{t.k}*({format_fo_term(t.arg)})"
    raise TypeError(f"not a term: {t!r}")


def format_sentence(phi) -> str:
    if isinstance(phi, Truth):
        return "true" if phi.value else "false"
    if isinstance(phi, Eq):
        return f"{format_fo_term(phi.left)} = {format_fo_term(phi.right)}"
    if isinstance(phi, Not):
        if isinstance(phi.body, Eq):
            return f"{format_fo_term(phi.body.left)} != {format_fo_term(phi.body.right)}"
        return f"~({format_sentence(phi.body)})"
    if isinstance(phi, And):
        return "(" + " & ".join(format_sentence(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "(" + " | ".join(format_sentence(p) for p in phi.parts) + ")"
    if isinstance(phi, Implies):
        return f"({format_sentence(phi.left)} -> {format_sentence(phi.right)})"
    if isinstance(phi, Exists):
        return f"(exists {phi.var}. {format_sentence(phi.body)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var}. {format_sentence(phi.body)})"
    raise TypeError(f"not a formula: {phi!r}")


# -- parsing ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(->|!=|exists\b|forall\b|true\b|false\b|[A-Za-z_][A-Za-z0-9_]*|\d+|[-+*^().,=&|~!])")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].isspace():
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _FOParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.bound: list[str] = []

    def peek(self, off=0):
        return self.toks[min(self.i + off, len(self.toks) - 1)][0]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}", self.text, pos)
        self.i += 1
        return tok

    def err(self, msg):
        raise ParseError(msg, self.text, self.toks[self.i][1])

    def formula(self):
        if self.peek() in ("exists", "forall"):
            return self.quantified()
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def quantified(self):
        q = self.take()
        names = [self.take()]
        while self.peek() == ",":
            self.take()
            names.append(self.take())
        for v in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                self.err(f"bad variable name {v!r}")
        self.take(".")
        self.bound.extend(names)
        body = self.formula()
        del self.bound[-len(names):]
        node = Exists if q == "exists" else Forall
        for v in reversed(names):
            body = node(v, body)
        return body

    def disjunction(self):
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        tok = self.peek()
        if tok in ("~", "!"):
            self.take()
            return Not(self.unary())
        if tok in ("exists", "forall"):
            return self.quantified()
        if tok == "true":
            self.take()
            return Truth(True)
        if tok == "false":
            self.take()
            return Truth(False)
        if tok == "(":
            save, bound = self.i, list(self.bound)
            try:
                self.take("(")
                f = self.formula()
                self.take(")")
                return f
            except ParseError:
                self.i, self.bound = save, bound
        return self.atom()

    def atom(self):
        left = self.term()
        op = self.peek()
        if op not in ("=", "!="):
            self.err("expected '=' or '!='")
        self.take()
        right = self.term()
        return Eq(left, right) if op == "=" else neq(left, right)

    def term(self):
        neg = False
        if self.peek() == "-":
            self.take()
            neg = True
        t = self.scaled()
        if neg:
            t = Neg(t)
        while self.peek() in ("+", "-"):
            op = self.take()
            r = self.scaled()
            t = Add(t, r if op == "+" else Neg(r))
        return t

    def scaled(self):
        tok = self.peek()
        if tok.isdigit() and tok != "0":
            k = int(self.take())
            if self.peek() == "*":
                self.take()
            return Scale(k, self.primary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            t = self.term()
            self.take(")")
            return t
        if tok == "0":
            self.take()
            return Name("0")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok or "-"):
            self.err("expected a term")
        name = self.take()
        exp = None
        if self.peek() == "^":
            self.take()
            sign = -1 if self.peek() == "-" else 1
            if sign < 0:
                self.take()
            digits = self.take()
            if not digits.isdigit():
                self.err("expected an exponent")
            exp = sign * int(digits)
        if self.peek() == "(":
            self.take()
            inner = self.term()
            self.take(")")
            e = 1 if exp is None else exp
            sym = name if e >= 0 else inverse_name(name)
            return power(sym, abs(e), inner)
        if exp is not None:
            self.err("exponent without argument")
        return Var(name) if name in self.bound else Name(name)


def parse_sentence(text: str):
    p = _FOParser(text)
    phi = p.formula()
    if p.peek() != "":
        p.err("trailing input")
    return phi


# -- evaluation ---------------------------------------------------------

class _Compiler:
    def __init__(self, struct: FiniteStructure):
        self.s = struct
        self.n = struct.size
        self.unary = {k: v.tolist() for k, v in struct.unary_tables.items()}
        self.binary = {k: v.tolist() for k, v in struct.tables.items() if v.ndim == 2}
        self._compose_cache: dict = {}
        self._scale_cache: dict = {}
        self._image_cache: dict = {}
        self.slots: dict[str, list[int]] = {}
        self.depth = 0

    # terms compile to (fn, const); const is an int when no variable occurs
    def chain_table(self, symbols: tuple) -> list[int]:
        if symbols not in self._compose_cache:
            tab = list(range(self.n))
            for s in reversed(symbols):
                if s not in self.unary:
                    raise UnknownNameError(f"structure has no unary symbol {s!r}")
                step = self.unary[s]
                tab = [step[x] for x in tab]
            self._compose_cache[symbols] = tab
        return self._compose_cache[symbols]

    def scale_table(self, k: int) -> list[int]:
        if k not in self._scale_cache:
            if "+" not in self.binary:
                raise UnknownNameError("structure has no '+' for scalar multiples")
            add = self.binary["+"]
            zero = self.s.named.get("0")
            if zero is None:
                raise UnknownNameError("structure has no zero")
            tab = [zero] * self.n
            for _ in range(k):
                tab = [add[t][x] for x, t in enumerate(tab)]
            self._scale_cache[k] = tab
        return self._scale_cache[k]

    def table_for(self, node) -> tuple[list[int], object]:
        """Flatten nested unary steps into one lookup table over a base."""
        if isinstance(node, App):
            syms = []
            while isinstance(node, App):
                syms.append(node.symbol)
                node = node.arg
            return self.chain_table(tuple(syms)), node
        if isinstance(node, Scale):
            return self.scale_table(node.k), node.arg
        if isinstance(node, Neg):
            if "-" not in self.unary:
                raise UnknownNameError("structure has no negation")
            return self.unary["-"], node.arg
        return None, node

    def term(self, t):
        if isinstance(t, Var):
            if t.name not in self.slots or not self.slots[t.name]:
                raise ValueError(f"free variable {t.name!r}")
            i = self.slots[t.name][-1]
            return (lambda env: env[i]), None
        if isinstance(t, Name):
            if t.name not in self.s.named:
                raise UnknownNameError(f"unknown name {t.name!r}")
            c = self.s.named[t.name]
            return (lambda env: c), c
        if isinstance(t, Add):
            if "+" not in self.binary:
                raise UnknownNameError("structure has no '+'")
            add = self.binary["+"]
            lf, lc = self.term(t.left)
            rf, rc = self.term(t.right)
            if lc is not None and rc is not None:
                c = add[lc][rc]
                return (lambda env: c), c
            return (lambda env: add[lf(env)][rf(env)]), None
        tab, inner = self.table_for(t)
        if tab is None:
            raise TypeError(f"not a term: {t!r}")
        f, c = self.term(inner)
        if c is not None:
            v = tab[c]
            return (lambda env: v), v
        if isinstance(inner, Var):
            i = self.slots[inner.name][-1]
            return (lambda env: tab[env[i]]), None
        return (lambda env: tab[f(env)]), None

    def formula(self, phi) -> Callable:
        if isinstance(phi, Truth):
            v = phi.value
            return lambda env: v
        if isinstance(phi, Eq):
            lf, lc = self.term(phi.left)
            rf, rc = self.term(phi.right)
            if lc is not None and rc is not None:
                v = lc == rc
                return lambda env: v
            if rc is not None:
                return lambda env: lf(env) == rc
            if lc is not None:
                return lambda env: rf(env) == lc
            return lambda env: lf(env) == rf(env)
        if isinstance(phi, Not):
            b = self.formula(phi.body)
            return lambda env: not b(env)
        if isinstance(phi, And):
            fs = [self.formula(p) for p in phi.parts]
            return lambda env: all(f(env) for f in fs)
        if isinstance(phi, Or):
            fs = [self.formula(p) for p in phi.parts]
            return lambda env: any(f(env) for f in fs)
        if isinstance(phi, Implies):
            a, b = self.formula(phi.left), self.formula(phi.right)
            return lambda env: (not a(env)) or b(env)
        if isinstance(phi, (Exists, Forall)):
            return self.quantifier(phi)
        raise TypeError(f"not a formula: {phi!r}")

    def image_test(self, phi):
        """exists v. g(v) = t, with v not free in t: a set lookup."""
        body = phi.body
        if not isinstance(body, Eq):
            return None
        for lhs, rhs in ((body.left, body.right), (body.right, body.left)):
            tab, base = self.table_for(lhs)
            if tab is None or base != Var(phi.var) or phi.var in free_variables(rhs):
                continue
            key = id(tab)
            if key not in self._image_cache:
                self._image_cache[key] = (frozenset(tab), tab)
            img = self._image_cache[key][0]
            rf, rc = self.term(rhs)
            if rc is not None:
                v = rc in img
                return lambda env: v
            return lambda env: rf(env) in img
        return None

    def quantifier(self, phi):
        if isinstance(phi, Exists):
            fast = self.image_test(phi)
            if fast is not None:
                return fast
        if isinstance(phi, Forall) and isinstance(phi.body, Not):
            fast = self.image_test(Exists(phi.var, phi.body.body))
            if fast is not None:
                return lambda env: not fast(env)
        slot = self.depth
        self.depth += 1
        self.max_depth = max(getattr(self, "max_depth", 0), self.depth)
        self.slots.setdefault(phi.var, []).append(slot)
        body = self.formula(phi.body)
        self.slots[phi.var].pop()
        self.depth -= 1
        dom = range(self.n)
        if isinstance(phi, Exists):
            def ex(env):
                for x in dom:
                    env[slot] = x
                    if body(env):
                        return True
                return False
            return ex

        def fa(env):
            for x in dom:
                env[slot] = x
                if not body(env):
                    return False
            return True
        return fa


def eval_fo_finite(struct: FiniteStructure, phi, budget: int = EVAL_BUDGET) -> bool:
    if isinstance(phi, str):
        phi = parse_sentence(phi)
    free = free_variables(phi)
    if free:
        raise ValueError(f"sentence has free variables {sorted(free)}")
    depth = quantifier_depth(phi)
    if struct.size ** depth > budget:
        raise BudgetExceeded(f"{struct.size}^{depth} exceeds evaluation budget {budget}")
    comp = _Compiler(struct)
    f = comp.formula(phi)
    env = [0] * max(depth, 1)
    return bool(f(env))


def _fo_term_to_term(t):
    syms = []
    while isinstance(t, App):
        syms.append(t.symbol)
        t = t.arg
    if not isinstance(t, Name):
        raise UnsupportedError("only ground unary terms are decided on infinite descriptors")
    return Term(tuple(syms), t.name)


def _eval_ground(desc, phi) -> bool:
    if isinstance(phi, Truth):
        return phi.value
    if isinstance(phi, Eq):
        return desc.position(_fo_term_to_term(phi.left)) == desc.position(_fo_term_to_term(phi.right))
    if isinstance(phi, Not):
        return not _eval_ground(desc, phi.body)
    if isinstance(phi, And):
        return all(_eval_ground(desc, p) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_eval_ground(desc, p) for p in phi.parts)
    if isinstance(phi, Implies):
        return (not _eval_ground(desc, phi.left)) or _eval_ground(desc, phi.right)
    raise UnsupportedError("quantified sentences need a finite structure")


def eval_with_constants(struct, phi) -> bool:
    """Evaluate with generator/constant names bound.

    A descriptor (possibly infinite) is accepted for quantifier-free
    sentences; they are decided through its word-problem oracle.
    """
    if isinstance(phi, str):
        phi = parse_sentence(phi)
    if isinstance(struct, FiniteStructure):
        return eval_fo_finite(struct, phi)
    if quantifier_depth(phi):
        raise UnsupportedError("quantified sentences need a finite structure")
    return _eval_ground(struct, phi)


# -- invariant catalogue ------------------------------------------------

_PARAMS = {
    "BijAlpha": ("n", "k"), "BijBeta": ("n",),
    "UnaryPsiA": (), "UnaryPsiC": (), "UnaryPsi": (),
    "UnaryAlphaN": ("n",), "UnaryBetaN": ("n",), "NotInjective": (),
    "SzAlpha": ("p", "n", "k"), "SzBeta": ("p", "n", "k"),
    "SzGamma": ("p", "n", "k"), "SzDelta": ("p", "n", "k"),
    "OneCycle": (), "TermEq": ("u", "v"), "TermNeq": ("u", "v"),
}
CATALOGUE = tuple(_PARAMS)


@dataclass(frozen=True)
class InvariantSentence:
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in _PARAMS:
            raise ValueError(f"unknown invariant family {self.family!r}")
        p = dict(self.params)
        want = _PARAMS[self.family]
        if set(p) != set(want):
            raise ValueError(f"{self.family} takes parameters {want}, got {sorted(p)}")
        object.__setattr__(self, "params", tuple((k, p[k]) for k in want))
        if "p" in p and not sympy.isprime(p["p"]):
            raise ValueError(f"p={p['p']} is not prime")
        if "n" in p and p["n"] < (1 if self.family in ("BijAlpha", "UnaryAlphaN") else 0):
            raise ValueError(f"n={p['n']} out of range")
        if "k" in p and p["k"] < 1:
            raise ValueError("k must be >= 1")

    def __getitem__(self, key):
        return dict(self.params)[key]

    @property
    def text(self) -> str:
        parts = [self.family]
        for k, v in self.params:
            parts.append(f"{k}={v}")
        return " ".join(parts)

    def __str__(self):
        return self.text


def invariant(family: str, **params) -> InvariantSentence:
    return InvariantSentence(family, tuple(params.items()))


def _infer_signature(texts) -> Signature:
    syms, bases = set(), set()
    for text in texts:
        for m in re.finditer(r"([A-Za-z_][A-Za-z0-9_]*)(\^-?\d+)?\s*(\()?", text):
            name, exp, paren = m.groups()
            if paren:
                syms.add(name)
                if exp and exp.startswith("^-"):
                    syms.add(inverse_name(name))
            else:
                bases.add(name)
    gens = sorted(b for b in bases if re.fullmatch(r"a\d*", b))
    consts = tuple(sorted(b for b in bases if b not in gens))
    m = max([int(g[1:]) for g in gens if g[1:]] or [1])
    return Signature(tuple(sorted(syms)) or ("S",), consts, m)


def parse_invariant(text: str, signature: Signature | None = None) -> InvariantSentence:
    """``"SzBeta p=3 n=0 k=1"`` or ``"TermEq u=S^3(a) v=a"``."""
    fields = text.split()
    if not fields:
        raise ParseError("empty invariant name", text, 0)
    family, params = fields[0], {}
    for f in fields[1:]:
        if "=" not in f:
            raise ParseError(f"expected key=value, got {f!r}", text, text.find(f))
        k, v = f.split("=", 1)
        params[k] = v
    if family in ("TermEq", "TermNeq"):
        sig = signature or _infer_signature(params.values())
        params = {k: parse_term(v, sig) for k, v in params.items()}
    else:
        try:
            params = {k: int(v) for k, v in params.items()}
        except ValueError as e:
            raise ParseError(str(e), text, 0) from None
    if family not in _PARAMS:
        raise ParseError(f"unknown invariant family {family!r}", text, 0)
    return InvariantSentence(family, tuple(params.items()))


# -- renderings ---------------------------------------------------------

def _cycle_point(x, n, f):
    """x lies on a cycle of size exactly n."""
    return conj(Eq(power(f, n, x), x), *(neq(power(f, j, x), x) for j in range(1, n)))


def _preimages_at_least(t, j, f, fresh):
    """At least j distinct f-preimages of the term t."""
    names = [fresh() for _ in range(j)]
    body = Truth(True)
    for i in reversed(range(j)):
        y = Var(names[i])
        body = Exists(names[i], conj(Eq(App(f, y), t),
                                     *(neq(y, Var(names[q])) for q in range(i)), body))
    return body


def _fresh_factory(prefix="v"):
    counter = itertools.count()
    return lambda: f"{prefix}{next(counter)}"


def _div(t, q, fresh):
    if q == 1:
        return Truth(True)
    x = fresh()
    return Exists(x, Eq(Scale(q, Var(x)), t))


def _lin(coeffs, ys):
    out = None
    for c, y in zip(coeffs, ys):
        if c == 0:
            continue
        term = Var(y) if c == 1 else Scale(c, Var(y))
        out = term if out is None else Add(out, term)
    return out


def render(inv: InvariantSentence, symbol: str = "S"):
    """Explicit FO sentence for a catalogued invariant.

    ``symbol`` names the unary function for the bijective and unary
    families; the Szmielew families use +, -, 0.
    """
    fam, p = inv.family, dict(inv.params)
    f = symbol
    fresh = _fresh_factory()
    if fam == "BijAlpha":
        n, k = p["n"], p["k"]
        xs = [f"x{i}" for i in range(k)]
        body = Truth(True)
        for i in reversed(range(k)):
            x = Var(xs[i])
            apart = [neq(power(f, l, Var(xs[q])), x) for q in range(i) for l in range(n)]
            body = Exists(xs[i], conj(_cycle_point(x, n, f), *apart, body))
        return body
    if fam == "BijBeta":
        return Exists("x", conj(*(neq(power(f, j, Var("x")), Var("x")) for j in range(1, p["n"] + 1))))
    if fam == "OneCycle":
        return Forall("x", Forall("y", Eq(Var("x"), Var("y"))))
    if fam in ("TermEq", "TermNeq"):
        e = Eq(term_to_fo(p["u"]), term_to_fo(p["v"]))
        return e if fam == "TermEq" else Not(e)
    if fam == "NotInjective":
        return Exists("x", Exists("y", conj(Eq(App(f, Var("x")), App(f, Var("y"))),
                                            neq(Var("x"), Var("y")))))

    def nopre(t):
        y = fresh()
        return Forall(y, neq(App(f, Var(y)), t))

    def exactly_two(t):
        return conj(_preimages_at_least(t, 2, f, fresh), Not(_preimages_at_least(t, 3, f, fresh)))

    def unique(pred):
        x, z = fresh(), fresh()
        return Exists(x, conj(pred(Var(x)), Forall(z, Implies(pred(Var(z)), Eq(Var(z), Var(x))))))

    if fam == "UnaryPsiA":
        return unique(nopre)
    if fam == "UnaryPsiC":
        # "at least two" keeps the quantifier depth at 4; it agrees with
        # "exactly two" wherever UnaryPsi holds
        return unique(lambda t: _preimages_at_least(t, 2, f, fresh))
    if fam == "UnaryPsi":
        x = fresh()
        return Forall(x, Not(_preimages_at_least(Var(x), 3, f, fresh)))
    if fam == "UnaryAlphaN":
        return Not(Exists("x", _cycle_point(Var("x"), p["n"], f)))
    if fam == "UnaryBetaN":
        n = p["n"]
        x = Var("x")
        end = power(f, n, x)
        first_arrival = [neq(power(f, j, x), end) for j in range(n)]
        return Not(Exists("x", conj(nopre(x), *first_arrival, exactly_two(end))))
    if fam.startswith("Sz"):
        return _render_szmielew(fam, p["p"], p["n"], p["k"], fresh)
    raise UnsupportedError(f"no rendering for {fam}")


def _render_szmielew(fam, pr, n, k, fresh):
    q, q1 = pr ** n, pr ** (n + 1)
    ys = [f"y{i}" for i in range(k)]
    combos = [c for c in itertools.product(range(pr), repeat=k) if any(c)]
    if fam == "SzAlpha":
        body = Truth(True)
        for i in reversed(range(k)):
            y = Var(ys[i])
            body = Exists(ys[i], conj(*(neq(y, Var(ys[j])) for j in range(i)), _div(y, q, fresh), body))
        return body
    per = []
    for y in ys:
        base = [_div(Var(y), q, fresh)]
        if fam in ("SzGamma", "SzDelta"):
            base.insert(0, Eq(Scale(pr, Var(y)), Name("0")))
        per.append(conj(*base))
    if fam == "SzGamma":
        indep = [neq(_lin(c, ys), Name("0")) for c in combos]
    else:
        indep = [Not(_div(_lin(c, ys), q1, fresh)) for c in combos]
    body = conj(*indep)
    for i in reversed(range(k)):
        body = Exists(ys[i], conj(per[i], body))
    return body


# -- truth tables -------------------------------------------------------

def _p_part(m: int, p: int) -> int:
    r = 0
    while m % p == 0:
        m //= p
        r += 1
    return r


def szmielew_eval(m, inv: InvariantSentence) -> bool:
    """Truth of a Szmielew invariant in C_m, or in Z when m is None/inf."""
    p, n, k = inv["p"], inv["n"], inv["k"]
    if m is None or m == math.inf:
        return {"SzAlpha": True, "SzBeta": k == 1, "SzGamma": False, "SzDelta": False}[inv.family]
    m = int(m)
    if inv.family == "SzAlpha":
        return m // math.gcd(p ** n, m) >= k
    if k >= 2:
        return False
    r = _p_part(m, p)
    if inv.family in ("SzBeta", "SzGamma"):
        return r >= n + 1
    if inv.family == "SzDelta":
        return r == n + 1
    raise UnsupportedError(f"{inv.family} is not a Szmielew invariant")


_UNARY = ("UnaryPsiA", "UnaryPsiC", "UnaryPsi", "UnaryAlphaN", "UnaryBetaN", "NotInjective")


def _cycle_components(desc):
    if isinstance(desc, ZChain):
        return [None]
    if isinstance(desc, Cycle):
        return [desc.n]
    if isinstance(desc, DisjointUnion):
        return [c for part in desc.parts for c in _cycle_components(part)]
    raise UnsupportedError(f"{desc.variant} is not a union of cycles and chains")


def eval_invariant(desc, inv: InvariantSentence) -> bool:
    fam = inv.family
    if fam in ("TermEq", "TermNeq"):
        eq = desc.position(inv["u"]) == desc.position(inv["v"])
        return eq if fam == "TermEq" else not eq
    if isinstance(desc, (CyclicGroup, IntegersGroup)):
        if fam.startswith("Sz"):
            return szmielew_eval(desc.n if isinstance(desc, CyclicGroup) else None, inv)
        if fam == "OneCycle":
            return desc.size == 1
        raise UnsupportedError(f"{fam} on {desc.variant}")
    if fam in _UNARY:
        return _eval_unary(desc, inv)
    if fam in ("BijAlpha", "BijBeta", "OneCycle"):
        if isinstance(desc, (OmegaChain, RhoShape)):
            if fam == "OneCycle":
                return False
            raise UnsupportedError(f"{fam} on {desc.variant}")
        comps = _cycle_components(desc)
        if fam == "BijAlpha":
            return sum(1 for c in comps if c == inv["n"]) >= inv["k"]
        if fam == "BijBeta":
            return any(c is None or c > inv["n"] for c in comps)
        return comps == [1]
    raise UnsupportedError(f"{fam} on {desc.variant}")


def _eval_unary(desc, inv) -> bool:
    fam = inv.family
    if isinstance(desc, Cycle):
        if fam == "UnaryAlphaN":
            return desc.n != inv["n"]
        return fam in ("UnaryPsi", "UnaryBetaN")
    if isinstance(desc, OmegaChain):
        return fam in ("UnaryPsiA", "UnaryPsi", "UnaryAlphaN", "UnaryBetaN")
    if isinstance(desc, RhoShape):
        if fam == "UnaryAlphaN":
            return desc.cycle != inv["n"]
        if fam == "UnaryBetaN":
            return desc.chain != inv["n"]
        return True
    raise UnsupportedError(f"{fam} on {desc.variant}")


def language_symbol(desc) -> str:
    """Unary symbol name used by renderings for this descriptor."""
    if isinstance(desc, (Cycle, ZChain, OmegaChain, RhoShape)):
        return desc.symbol
    if isinstance(desc, DisjointUnion):
        return language_symbol(desc.parts[0])
    return "S"


def fo_agrees(desc, inv, struct: FiniteStructure | None = None) -> tuple[bool, bool]:
    """(catalogue truth, brute-force truth on the materialized structure)."""
    from .structures import materialize_finite
    struct = struct or materialize_finite(desc)
    return eval_invariant(desc, inv), eval_fo_finite(struct, render(inv, language_symbol(desc)))
