import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from limdens.counting import (CoprimeSweep, abs_x_counts, alpha_count, coprime_bilinear,
                              coprime_pair_count, coprime_pairs_direct, identity_total,
                              one_cycle_counts, pi1_difference_distribution, primorial_threshold,
                              total_presentations, x_residue_distribution, x_value_distribution)
from limdens.errors import UnsupportedError
from limdens.terms import bijective_mode, x_statistic
from limdens.variety import VarietySpec, gaifman_group


def _words(ell):
    return itertools.product((1, -1), repeat=ell)


def _brute_abs(s):
    # |X| of every one-sided word of length <= s
    return [abs(sum(w)) for ell in range(s + 1) for w in _words(ell)]


def test_frozen_totals():
    # [DERIVED] by enumeration
    assert total_presentations("bijective", 3) == 15
    assert total_presentations("unary", 2) == 6
    assert total_presentations("n-symbol", 2, n=2) == 17
    assert total_presentations("bijective", 2, k=2) == math.comb(7, 2)
    assert total_presentations("bijective", 2, k=2, counting_mode="ordered-with-rep") == 49
    assert total_presentations("bijective", 2, k=2, counting_mode="ordered-distinct") == 42
    with pytest.raises(UnsupportedError):
        total_presentations("abelian", 3, k=2)
    with pytest.raises(ValueError):
        total_presentations("bijective", -1)


def test_alpha_count_examples():
    assert alpha_count(1, 1) == 2
    assert alpha_count(2, 4) == 10
    assert alpha_count(3, 2) == 0


@pytest.mark.parametrize("n", range(1, 6))
def test_alpha_count_against_words(n):
    for s in range(11):
        brute = sum(1 for a in _brute_abs(s) if a == n)
        assert alpha_count(n, s) == brute


def test_x_value_examples():
    assert x_value_distribution(length=2).counts == {-2: 1, 0: 2, 2: 1}
    cum = x_value_distribution(s=2)
    assert cum.total == 7
    assert cum.counts == {-2: 1, -1: 1, 0: 3, 1: 1, 2: 1}
    with pytest.raises(ValueError):
        x_value_distribution()


@pytest.mark.parametrize("ell", range(0, 12))
def test_x_value_shape(ell):
    d = x_value_distribution(length=ell)
    assert d.total == 2 ** ell
    assert all(d[v] == d[-v] for v in d.counts)
    assert all((v - ell) % 2 == 0 for v in d.counts)
    vals = [d[v] for v in range(-ell, ell + 1, 2)]
    top = vals.index(max(vals))
    assert vals[:top + 1] == sorted(vals[:top + 1])
    assert vals[top:] == sorted(vals[top:], reverse=True)


def test_two_sided_distribution_against_enumeration():
    mode = bijective_mode()
    for s in range(6):
        brute = {}
        for ell in range(s + 1):
            for e in mode.enumerate(ell):
                v = x_statistic(e.lhs) - x_statistic(e.rhs)
                brute[v] = brute.get(v, 0) + 1
        # one-sided enumeration puts the word on the left only
        assert x_value_distribution(s=s).counts == dict(sorted(brute.items()))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10), st.booleans())
def test_residue_dp_against_words(N, s, two_sided):
    acc = [0] * N
    for ell in range(s + 1):
        for w in _words(ell):
            acc[sum(w) % N] += ell + 1 if two_sided else 1
    assert x_residue_distribution(N, s, two_sided).counts == tuple(acc)


def test_residue_modulus_one_is_everything():
    for s in range(8):
        d = x_residue_distribution(1, s)
        assert d.counts == (2 ** (s + 1) - 1,)
        assert d.share(0) == 1


def test_coprime_examples():
    # [DERIVED] s=1: X in {0, 1, -1}; only (0, 0) fails
    assert coprime_pair_count(1) == 8
    vals = _brute_abs(2)
    assert coprime_pair_count(2) == sum(1 for a in vals for b in vals if math.gcd(a, b) == 1)
    assert coprime_pair_count(2) == 24


@pytest.mark.parametrize("s", range(0, 14))
def test_coprime_routes_agree(s):
    vals = _brute_abs(min(s, 9))
    c = abs_x_counts(s)
    assert coprime_bilinear(c, c) == coprime_pairs_direct(c)
    if s <= 9:
        brute = sum(1 for a in vals for b in vals if math.gcd(a, b) == 1)
        assert coprime_pair_count(s) == brute
        distinct = sum(1 for i, j in itertools.combinations(range(len(vals)), 2)
                       if math.gcd(vals[i], vals[j]) == 1)
        assert coprime_pair_count(s, ordered=False) == distinct
    parts = coprime_pair_count(s, by_parity=True)
    assert sum(parts.values()) == coprime_pair_count(s)


def test_sweep_matches_direct():
    for ell, ordered, diag, N in CoprimeSweep(40):
        assert ordered == coprime_pair_count(ell)
        assert diag == (abs_x_counts(ell)[1] if ell else 0)
        assert N == 2 ** (ell + 1) - 1


def test_counting_mode_relations():
    for s in range(1, 12):
        un, tot = one_cycle_counts(s)
        od, tot2 = one_cycle_counts(s, "ordered-distinct")
        rep, tot3 = one_cycle_counts(s, "ordered-with-rep")
        assert od == 2 * un and tot2 == 2 * tot
        N = identity_total("bijective", s)
        assert tot3 == N * N and rep == coprime_pair_count(s)


def test_primorial_threshold():
    assert primorial_threshold(10) == 2
    assert primorial_threshold(500) == 3
    assert primorial_threshold(10 ** 6) == 3
    with pytest.raises(ValueError):
        primorial_threshold(7)


def test_pi1_examples():
    spec = VarietySpec.basic_bijective()
    assert pi1_difference_distribution(spec, 1).counts == {1: 2, -1: 2}
    assert pi1_difference_distribution(spec, 0).counts == {0: 1}


def test_pi1_max_share_threshold():
    # [DERIVED] the largest share first drops below 0.05 at s = 255
    spec = VarietySpec.basic_bijective()
    at = {s: pi1_difference_distribution(spec, s).max_share() for s in (200, 254, 255)}
    assert abs(float(at[200]) - 0.0563485) < 1e-6
    assert at[254] > Fraction(1, 20) > at[255]


def _brute_pi1(pi, s):
    # all (word, split) pairs of exact length s, summed directly
    out = {}
    n = len(pi)
    for w in itertools.product(range(n), repeat=s):
        for cut in range(s + 1):
            v = sum(pi[i] for i in w[:cut]) - sum(pi[i] for i in w[cut:])
            out[v] = out.get(v, 0) + 1
    return dict(sorted(out.items()))


@pytest.mark.parametrize("symbols,rels", [
    (["S", "S^-1"], [(1, 1)]), (["f", "g"], [(1, 1)]), (["f", "g", "h"], [(1, 0, -2), (1, 1, 0)]),
    (["f", "g"], [(2, 0)]),
])
def test_pi1_against_brute(symbols, rels):
    g = gaifman_group(VarietySpec.genbij(symbols, rels))
    for s in range(7):
        d = pi1_difference_distribution(g, s)
        assert d.counts == _brute_pi1(g.pi1, s)
        assert d.total == (s + 1) * len(symbols) ** s
