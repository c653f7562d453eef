from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from limdens.counting import x_residue_distribution
from limdens.walk import (Distribution, WalkError, WalkSpec, decay_rate_estimate,
                          k_step_distribution, max_deviation, point_mass, tv_distance_to_uniform,
                          uniform, walk_csv, walk_distributions)

F = Fraction
LAZY_PM2 = {2: F(1, 4), -2: F(1, 4), 0: F(1, 2)}


def test_k_step_examples():
    spec = WalkSpec(3, LAZY_PM2)
    assert k_step_distribution(spec, 0) == point_mass(3)
    assert k_step_distribution(spec, 1).as_dict() == {0: F(1, 2), 1: F(1, 4), 2: F(1, 4)}
    par = WalkSpec(2, {1: 1})
    assert k_step_distribution(par, 2).as_dict() == {0: 1}
    with pytest.raises(ValueError):
        k_step_distribution(spec, -1)


def test_tv_examples():
    assert tv_distance_to_uniform(uniform(7)) == 0
    assert tv_distance_to_uniform(point_mass(4)) == F(3, 4)
    assert tv_distance_to_uniform(k_step_distribution(WalkSpec(3, LAZY_PM2), 1)) == F(1, 6)


def test_decay_example_n5():
    spec = WalkSpec(5, {0: F(1, 2), 1: F(1, 4), -1: F(1, 4)})
    assert max_deviation(k_step_distribution(spec, 200)) < F(1, 10 ** 9)
    fit = decay_rate_estimate(spec, 200)
    assert fit.rate < 0 and fit.alpha_hat > 0 and fit.beta_hat > 0


def test_trivial_group():
    spec = WalkSpec(1, {0: 1})
    assert all(tv_distance_to_uniform(d) == 0 for d in walk_distributions(spec, 5))
    with pytest.raises(WalkError):
        decay_rate_estimate(spec, 20)


def test_spec_validation_and_parse():
    assert WalkSpec.parse(5, "0:1/2,1:1/4,-1:1/4") == WalkSpec(5, {0: F(1, 2), 4: F(1, 4), 1: F(1, 4)})
    for bad in ({0: F(1, 2)}, {0: F(3, 2), 1: F(-1, 2)}):
        with pytest.raises(ValueError):
            WalkSpec(4, bad)
    with pytest.raises(ValueError):
        WalkSpec.parse(3, "0-1")
    with pytest.raises(ValueError):
        WalkSpec(0, {0: 1})


def test_periodic_and_non_generating_rejected():
    with pytest.raises(WalkError):
        decay_rate_estimate(WalkSpec(4, {1: F(1, 2), -1: F(1, 2)}), 40)
    with pytest.raises(WalkError):
        decay_rate_estimate(WalkSpec(6, {0: F(1, 2), 2: F(1, 2)}), 40)
    assert not WalkSpec(6, {0: F(1, 2), 2: F(1, 2)}).generating
    assert not WalkSpec(4, {1: F(1, 2), -1: F(1, 2)}).aperiodic


def _grid_specs():
    out = []
    for n in range(2, 13):
        out.append(WalkSpec(n, {0: F(1, 2), 1: F(1, 4), -1: F(1, 4)}))
        out.append(WalkSpec(n, {0: F(1, 3), 1: F(2, 3)}))
        if n % 2:
            out.append(WalkSpec(n, LAZY_PM2))
    return out


@pytest.mark.parametrize("spec", _grid_specs(), ids=lambda s: f"n{s.n}-{len(s.support)}")
def test_grid_monotone_mass_and_decay(spec):
    prev = None
    for d in walk_distributions(spec, 300):
        assert d.mass == 1
        dev = max_deviation(d)
        if prev is not None:
            assert dev <= prev
        prev = dev
    if prev == 0:
        # e.g. n=2 with +-1 merged: exactly uniform after one step
        with pytest.raises(WalkError):
            decay_rate_estimate(spec, 150)
    else:
        assert decay_rate_estimate(spec, 150).rate < 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.lists(st.integers(1, 5), min_size=2, max_size=4), st.integers(0, 30))
def test_mass_and_tv_range_random_specs(n, weights, k):
    tot = sum(weights)
    sup = {}
    for g, w in enumerate(weights):
        sup[g] = sup.get(g, 0) + F(w, tot)
    d = k_step_distribution(WalkSpec(n, sup), k)
    assert d.mass == 1 and all(c >= 0 for c in d.nums)
    assert 0 <= tv_distance_to_uniform(d) <= 1 - F(1, n)
    assert max_deviation(d) <= 2 * tv_distance_to_uniform(d)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_residue_counts_match_walk(n):
    # a length-2j word is j independent pairs, each moving X by +-2 or 0
    spec = WalkSpec(n, LAZY_PM2)
    for j in range(0, 15):
        res = x_residue_distribution(n, 2 * j, lengths=[2 * j])
        walk = k_step_distribution(spec, j)
        for g in range(n):
            assert F(res.counts[g], 4 ** j) == walk[g]


def test_renormalization_recorded():
    spec = WalkSpec(7, {0: F(1, 3), 1: F(1, 3), -1: F(1, 3)})
    d = k_step_distribution(spec, 1005)
    assert d.rounding == "floor to 256 bits" and not d.exact
    assert d.den == 1 << 256
    assert 1 - d.mass < F(7, 1 << 255)
    assert k_step_distribution(spec, 1000).exact


def test_distribution_access_and_csv():
    d = Distribution(3, (1, 1, 2), 4)
    assert d[5] == F(1, 2) and d.mass == 1
    text = walk_csv(WalkSpec(3, LAZY_PM2), 3)
    lines = text.splitlines()
    assert lines[0] == "k,max_deviation,tv_distance" and len(lines) == 5
    assert lines[1] == "0,0.666666666667,0.666666666667"
