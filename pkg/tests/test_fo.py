import itertools

import pytest
from hypothesis import given, settings, strategies as st

from limdens.errors import BudgetExceeded, ParseError, UnsupportedError
from limdens.fo import (Eq, Exists, Forall, Not, Var, eval_fo_finite, eval_invariant,
                        eval_with_constants, format_sentence, invariant, parse_invariant,
                        parse_sentence, quantifier_depth, render, szmielew_eval)
from limdens.structures import (Cycle, CyclicGroup, IntegersGroup, OmegaChain, RhoShape, ZChain,
                                build_constant_example, materialize_finite)
from limdens.terms import Term, constant_bijective_mode, parse_identity


def test_eval_examples():
    assert eval_fo_finite(materialize_finite(Cycle(3)), "exists x. S(S(S(x))) = x")
    rho = materialize_finite(RhoShape(1, 1))
    assert eval_fo_finite(rho, "exists x. exists y. (x != y & f(x) = f(y))")
    assert not eval_fo_finite(materialize_finite(Cycle(4)), render(invariant("OneCycle")))


def test_parser_forms():
    phi = parse_sentence("forall x. (S^-1(S(x)) = x -> x = x) | ~ (x = x)")
    assert quantifier_depth(phi) == 1
    assert parse_sentence(format_sentence(phi)) == phi
    psi = parse_sentence("exists x. 3x = a")
    assert quantifier_depth(psi) == 1
    with pytest.raises(ParseError):
        parse_sentence("exists . x = x")


def test_eval_with_constants():
    st_ = materialize_finite(Cycle(3))
    assert eval_with_constants(st_, "S^3(a) = a")
    sig = constant_bijective_mode().signature
    desc = build_constant_example(parse_identity("S^4(c)=c", sig))
    assert eval_with_constants(desc, "c = S(c)")
    z9 = materialize_finite(CyclicGroup(9))
    assert not eval_with_constants(z9, "exists x. 3x = a")
    with pytest.raises(UnsupportedError):
        eval_with_constants(ZChain(), "exists x. x = a")


def test_invariant_examples():
    assert eval_invariant(Cycle(5), invariant("BijAlpha", n=5, k=1))
    assert eval_invariant(CyclicGroup(12), invariant("SzBeta", p=2, n=1, k=1))
    assert not eval_invariant(CyclicGroup(12), invariant("SzBeta", p=2, n=2, k=1))
    assert szmielew_eval(8, invariant("SzGamma", p=2, n=2, k=1))
    assert szmielew_eval(6, invariant("SzAlpha", p=3, n=1, k=2))
    for p, n in ((2, 0), (3, 4), (5, 1)):
        assert szmielew_eval(None, invariant("SzBeta", p=p, n=n, k=1))
    assert eval_invariant(ZChain(), invariant("BijBeta", n=7))
    assert not eval_invariant(OmegaChain(), invariant("NotInjective"))


def test_invariant_validation_and_parsing():
    with pytest.raises(ValueError):
        invariant("SzBeta", p=4, n=0, k=1)
    with pytest.raises(ValueError):
        invariant("BijAlpha", n=1)
    inv = parse_invariant("SzBeta p=3 n=0 k=1")
    assert inv == invariant("SzBeta", p=3, n=0, k=1)
    assert inv.text == "SzBeta p=3 n=0 k=1"
    t = parse_invariant("TermEq u=S^3(a) v=a")
    assert t["u"] == Term(("S",) * 3)
    with pytest.raises(ParseError):
        parse_invariant("NoSuch n=1")


def test_budget():
    big = materialize_finite(Cycle(200))
    deep = "forall x. forall y. forall z. forall w. x = x"
    with pytest.raises(BudgetExceeded):
        eval_fo_finite(big, deep, budget=10 ** 6)


def _brute_z_m(m, p, n, k, fam):
    # direct counting in Z_m, independent of the catalogue and the rendering
    G = range(m)
    pn = p ** n
    mult = {x * pn % m for x in G}
    tors = {x for x in G if p * x % m == 0}
    if fam == "SzAlpha":
        return len(mult) >= k
    # dimensions over F_p are 0 or 1 in a cyclic group, so k >= 2 is false
    if k >= 2:
        return False
    nxt = {x * p ** (n + 1) % m for x in G}
    if fam == "SzBeta":
        return len(mult) > len(nxt)
    if fam == "SzGamma":
        return len(mult & tors) > 1
    return len(mult & tors) > len(nxt & tors)


@pytest.mark.parametrize("m", range(1, 41))
def test_szmielew_truth_against_group_counting(m):
    for fam in ("SzAlpha", "SzBeta", "SzGamma", "SzDelta"):
        for p in (2, 3, 5):
            for n in (0, 1, 2):
                for k in (1, 2):
                    assert szmielew_eval(m, invariant(fam, p=p, n=n, k=k)) == _brute_z_m(m, p, n, k, fam)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 8, 9, 12])
def test_szmielew_p_part_invariance(m):
    for q in (1, 5, 7):
        for fam in ("SzAlpha", "SzBeta", "SzGamma", "SzDelta"):
            inv = invariant(fam, p=3, n=1, k=1)
            if fam == "SzAlpha":
                continue  # alpha depends on the whole order
            assert szmielew_eval(m, inv) == szmielew_eval(m * q, inv)


@pytest.mark.parametrize("m", range(1, 16))
def test_beta_is_conjunction_of_not_alpha(m):
    for n in range(0, 8):
        beta = eval_invariant(Cycle(m), invariant("BijBeta", n=n))
        alphas = all(not eval_invariant(Cycle(m), invariant("BijAlpha", n=j, k=1)) for j in range(1, n + 1))
        assert beta == alphas


@pytest.mark.parametrize("desc", [RhoShape(2, 3), RhoShape(1, 1), Cycle(5, "f", None), RhoShape(4, 2)])
def test_unary_renderings_match_catalogue(desc):
    st_ = materialize_finite(desc)
    invs = [invariant(f) for f in ("NotInjective", "UnaryPsiA", "UnaryPsiC", "UnaryPsi")]
    invs += [invariant("UnaryAlphaN", n=n) for n in range(1, 6)]
    invs += [invariant("UnaryBetaN", n=n) for n in range(0, 6)]
    for inv in invs:
        assert eval_invariant(desc, inv) == eval_fo_finite(st_, render(inv, "f")), inv.text


# random quantifier-free matrices under a fixed prefix, checked against a direct loop
atoms = st.sampled_from([("x", 0, "y", 0), ("x", 1, "y", 0), ("x", 2, "x", 0), ("y", 1, "x", 1),
                         ("x", 3, "y", 2)])


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 9), atoms, atoms, st.booleans(), st.booleans())
def test_generic_evaluator_against_loops(m, a1, a2, neg, univ):
    from limdens.fo import And, power
    st_ = materialize_finite(Cycle(m))

    def atom(a):
        v1, k1, v2, k2 = a
        return Eq(power("S", k1, Var(v1)), power("S", k2, Var(v2)))

    body = And((atom(a1), Not(atom(a2)) if neg else atom(a2)))
    phi = Forall("x", Exists("y", body)) if univ else Exists("x", Exists("y", body))

    def val(a, env):
        v1, k1, v2, k2 = a
        return (env[v1] + k1) % m == (env[v2] + k2) % m

    def holds(x, y):
        env = {"x": x, "y": y}
        b2 = val(a2, env)
        return val(a1, env) and ((not b2) if neg else b2)

    if univ:
        want = all(any(holds(x, y) for y in range(m)) for x in range(m))
    else:
        want = any(holds(x, y) for x, y in itertools.product(range(m), repeat=2))
    assert eval_fo_finite(st_, phi) == want


def test_integers_group_catalogue():
    assert eval_invariant(IntegersGroup(), invariant("SzAlpha", p=2, n=3, k=5))
    assert not eval_invariant(IntegersGroup(), invariant("SzBeta", p=2, n=0, k=2))
