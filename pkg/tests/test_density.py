import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from limdens.density import (ConstantsLikeFamily, DensitySeries, coprime_density,
                             coprime_reference_limits, constant_example_densities,
                             constants_like_density, density_series, even_odd_limits,
                             make_family, multi_unary_phi_density, parse_property,
                             unary_not_injective_failures)
from limdens.errors import BudgetExceeded, ParseError, UnsupportedError
from limdens.counting import abs_x_counts
from limdens.structures import RhoShape, build_unary
from limdens.terms import free_mode, unary_mode
from limdens.variety import VarietySpec

CASES = [
    ("bijective", "BijAlpha n=1 k=1", 12, {}),
    ("bijective", "BijBeta n=3", 12, {}),
    ("bijective", "XResidue N=3 r=1", 12, {}),
    ("bijective", "not BijAlpha n=2 k=1", 12, {}),
    ("abelian", "SzBeta p=2 n=0 k=1", 10, {}),
    ("abelian", "SzAlpha p=3 n=1 k=1", 10, {}),
    ("unary", "NotInjective", 12, {}),
    ("unary", "UnaryPsiA", 12, {}),
    ("unary", "UnaryAlphaN n=2", 12, {}),
    ("unary", "UnaryBetaN n=1", 12, {}),
    ("constant-bijective", "ClassS1", 7, {}),
    ("constant-bijective", "ClassS3", 7, {}),
    ("constant-bijective", "TermEq u=c v=S(c)", 7, {}),
    ("genbij", "Pi1Below k=2", 7, {"spec": VarietySpec.genbij(["f", "g"], [(1, 1)])}),
    ("genbij", "Pi1Below k=1", 9, {"spec": VarietySpec.basic_bijective()}),
    ("two-id-bijective", "OneCycle", 5, {}),
    ("two-id-bijective", "not OneCycle", 5, {"counting_mode": "ordered-with-rep"}),
    ("two-id-bijective", "BijAlpha n=2 k=1", 5, {"counting_mode": "ordered-distinct"}),
    ("two-id-bijective", "BijBeta n=2", 5, {}),
]


@pytest.mark.parametrize("family,sentence,s_max,args", CASES)
def test_enumerate_equals_aggregate(family, sentence, s_max, args):
    a = density_series(family, sentence, s_max, "enumerate", **args)
    b = density_series(family, sentence, s_max, "aggregate", **args)
    assert a.points == b.points
    assert a.s_values


@pytest.mark.parametrize("n,r", [(2, 1), (3, 1), (2, 2)])
def test_constants_like_closed_form_matches_enumeration(n, r):
    for kind in ("ClassA", "ClassB"):
        fam = ConstantsLikeFamily(n, r)
        a = density_series(fam, kind, 6 if n == 2 else 4, "enumerate")
        b = density_series(fam, kind, 6 if n == 2 else 4, "closed-form")
        assert a.points == b.points


def test_density_examples():
    # [DERIVED] 8 of the 15 words of length <= 3 have |X| = 1
    assert density_series("bijective", "BijAlpha n=1 k=1", 3).density(3) == Fraction(8, 15)
    un = density_series("unary", "NotInjective", 1, "enumerate")
    assert un.points[1] == (0, 3)


def test_szmielew_beta_limit():
    d = density_series("abelian", "SzBeta p=3 n=0 k=1", s_values=[2000])
    assert abs(float(d.density(2000)) - 1 / 3) < 1e-3


@pytest.mark.parametrize("family,sentence", [
    ("bijective", "BijAlpha n=2 k=1"), ("unary", "UnaryPsi"), ("constant-bijective", "ClassS2"),
    ("two-id-bijective", "OneCycle"), ("abelian", "SzGamma p=2 n=1 k=1"),
])
def test_complement_law(family, sentence):
    a = density_series(family, sentence, 9)
    b = density_series(family, "not " + sentence, 9)
    for s in a.s_values:
        assert a.density(s) + b.density(s) == 1


def _pointwise(family, props, s_max):
    fam = make_family(family)
    out = []
    for ell in range(s_max + 1):
        for e in fam.enumerate_length(ell):
            x, desc = fam.classify(e)
            out.append(tuple(p.holds(x, desc) for p in props))
    return out


@pytest.mark.parametrize("family,t1,t2", [
    ("bijective", "BijAlpha n=1 k=1", "XResidue N=2 r=0"),
    ("unary", "NotInjective", "UnaryAlphaN n=1"),
    ("constant-bijective", "ClassS1", "TermEq u=c v=S(c)"),
])
def test_disjunction_and_conjunction_bounds(family, t1, t2):
    fam = make_family(family)
    sig = getattr(fam.mode, "signature", None)
    p, q = parse_property(t1, sig), parse_property(t2, sig)
    rows = _pointwise(family, (p, q), 6)
    n_or = sum(a or b for a, b in rows)
    n_and = sum(a and b for a, b in rows)
    n_p = sum(a for a, _ in rows)
    n_q = sum(b for _, b in rows)
    assert n_or <= n_p + n_q
    assert n_and <= min(n_p, n_q)
    assert density_series(family, t1, 6).points[6][0] == n_p


def test_property_parsing():
    p = parse_property("not not XResidue N=4 r=1")
    assert not p.negated and dict(p.params) == {"N": 4, "r": 1}
    with pytest.raises(ParseError):
        parse_property("XResidue N=4")
    assert parse_property("not ClassA").negated


def test_strategy_errors():
    with pytest.raises(BudgetExceeded):
        density_series("bijective", "BijAlpha n=1 k=1", 30, "enumerate", budget=1000)
    with pytest.raises(UnsupportedError):
        density_series("bijective", "BijAlpha n=1 k=1", 3, "closed-form")
    with pytest.raises(ValueError):
        density_series("bijective", "BijAlpha n=1 k=1", 3, "guess")
    with pytest.raises(ValueError):
        density_series("bijective", "BijAlpha n=1 k=1")


def test_two_identity_s0_dropped():
    d = density_series("two-id-bijective", "OneCycle", 3)
    # s=1: |X| values 0, 1, 1 and every pair has gcd 1
    assert 0 not in d.points and d.points[1] == (3, 3)


def test_csv_columns():
    d = density_series("bijective", "BijAlpha n=1 k=1", 3)
    lines = d.to_csv().splitlines()
    assert lines[0] == "s,total,count,density_num,density_den,density_float"
    assert lines[-1].startswith("3,15,8,8,15,")


# -- even/odd analysis ---------------------------------------------------

def test_parity_residue_oscillates():
    d = density_series("bijective", "XResidue N=2 r=0", 80)
    rep = even_odd_limits(d)
    assert rep.oscillation
    assert abs(rep.even_last - 2 / 3) < 1e-3 and abs(rep.odd_last - 1 / 3) < 1e-3


def test_alpha_series_no_oscillation():
    d = density_series("bijective", "BijAlpha n=1 k=1", 1000)
    rep = even_odd_limits(d)
    assert not rep.oscillation
    assert rep.even_trend == "decreasing" and rep.odd_trend == "decreasing"
    assert rep.even_last < 0.02 and rep.odd_last < 0.04


def test_constant_series_and_short_series():
    const = DensitySeries("x", "y", "closed-form", {s: (1, 2) for s in range(30)})
    rep = even_odd_limits(const)
    assert not rep.oscillation and rep.even_trend == "constant" == rep.odd_trend
    short = DensitySeries("x", "y", "closed-form", {s: (1, 2) for s in range(12)})
    with pytest.raises(ValueError):
        even_odd_limits(short)


def test_oscillation_flag_matches_tolerance():
    d = density_series("bijective", "XResidue N=2 r=0", 40)
    rep = even_odd_limits(d)
    for tol in (0.1, 0.3, 0.4):
        assert even_odd_limits(d, tolerance=tol).oscillation == (rep.gap > tol)


# -- coprime pairs ---------------------------------------------------------

def test_coprime_reference_limits():
    refs = coprime_reference_limits()
    assert abs(refs["even"] - 0.45032) < 1e-4 and abs(refs["odd"] - 0.72051) < 1e-4
    assert abs(refs["odd_prime_product"] - 8 / math.pi ** 2) < 1e-6


def test_coprime_density_small():
    series, report = coprime_density(1, counting_mode="ordered-with-rep")
    assert series.density(1) == Fraction(8, 9)
    assert report is None


def test_both_x_zero_density_vanishes():
    # both X = 0 is exactly the presentations whose structure is the Z-chain
    fam = make_family("two-id-bijective")
    vals = []
    for s in (2, 4, 8, 16, 32):
        c0 = abs_x_counts(s)[0]
        vals.append(Fraction(math.comb(c0, 2), fam.total(s)))
        if s <= 4:
            d = density_series(fam, "BijBeta n=%d" % (2 * s), s, "enumerate")
            assert d.points[s][0] == math.comb(c0, 2)
    assert all(a > b for a, b in zip(vals, vals[1:]))


# -- constants-like and constant examples ---------------------------------

def test_constants_like_examples():
    a, b = constants_like_density(2, 1, 40)
    assert b.points[1][0] == 0 and a.points[1][0] == 0
    for s in range(3, 41):
        assert Fraction(a.points[s][0], b.points[s][0]) < Fraction(1, 2)
    ratio = Fraction(a.points[40][0], b.points[40][0])
    assert abs(float(ratio) - 0.5) < 0.03
    with pytest.raises(UnsupportedError):
        constants_like_density(1, 1, 5)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_class_b_empty_below_2r(r):
    a, b = constants_like_density(3, r, 2 * r)
    assert b.points[2 * r - 1][0] == 0 and b.points[2 * r][0] > 0


def test_constant_example_s0_and_limits():
    out = constant_example_densities(s_values=[0, 200])
    shares = [out[k].density(0) for k in ("ClassS1", "ClassS2", "ClassS3")]
    # four bases a, c on each side: the length-0 identities split 1:1:2
    assert shares == [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]
    for k, lim in out["limits"].items():
        assert abs(float(out[k].density(200)) - float(lim)) < 1e-2


# -- unary and multi-unary -------------------------------------------------

def test_unary_not_injective_failures_against_enumeration():
    mode = unary_mode()
    for s in range(12):
        fails = sum(1 for ell in range(s + 1) for e in mode.enumerate(ell)
                    if not isinstance(build_unary(e), RhoShape))
        assert fails == unary_not_injective_failures(s) <= 3 * s + 1


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (2, 2)])
def test_multi_unary_bare_side_class(n, m):
    mode = free_mode(n, m)
    for s in range(5):
        bare = sum(1 for ell in range(s + 1) for e in mode.enumerate(ell) if e.lhs.length == 0)
        assert bare == m * m * (n ** (s + 1) - 1) // (n - 1)
        both = sum(1 for ell in range(s + 1) for e in mode.enumerate(ell)
                   if e.lhs.length and e.rhs.length)
        d = multi_unary_phi_density(n, m, 1, s_values=[s])
        assert d.points[s] == (both, mode.total(s))


def test_multi_unary_bound_tends_to_one():
    d = multi_unary_phi_density(2, 1, 1, s_values=[10, 40, 80])
    vals = [d.density(s) for s in (10, 40, 80)]
    assert vals[0] < vals[1] < vals[2] and vals[2] > 0.97


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 60), st.integers(1, 3), st.integers(1, 3))
def test_single_symbol_bound_dominates_printed_bound(s, m, k):
    d = multi_unary_phi_density(1, m, k, s_values=[s])
    assert d.points[s][0] >= math.comb(m * m * (s - 1) * (s - 2) // 2, k)


def test_constants_like_convergence_rate():
    # [DERIVED] 1/8 - A_s = 3/(8s) and 1/4 - B_s = 1/(2s) up to terms of size s/2^s,
    # so a 1e-3 tolerance is first met at s=375 for A and s=500 for B
    for s in (40, 60, 200):
        a, b = constants_like_density(2, 1, s_values=[s])
        assert abs(Fraction(1, 8) - a.density(s) - Fraction(3, 8 * s)) < Fraction(s, 2 ** s)
        assert abs(Fraction(1, 4) - b.density(s) - Fraction(1, 2 * s)) < Fraction(s, 2 ** s)
    err = {}
    for s in (374, 375, 499, 500):
        a, b = constants_like_density(2, 1, s_values=[s])
        err[s] = (Fraction(1, 8) - a.density(s), Fraction(1, 4) - b.density(s))
    tol = Fraction(1, 1000)
    assert err[374][0] >= tol > err[375][0]
    assert err[499][1] >= tol > err[500][1]
