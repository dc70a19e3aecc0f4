from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from copematch.model import Matching, random_instance
from copematch.oracle import matching_space
from copematch.sampler import (ExactUniformSampler, McmcSampler, SamplerConfig, apply_move,
                               default_steps, empirical_counts, sample_matching, sample_matchings,
                               transition_matrix, tv_diagnostic)

from naive import instances


def test_default_steps_formula(four_agents):
    # 10 * 6 edges * 4 vertices * ln 20
    assert default_steps(four_agents) == 719
    with pytest.raises(ValueError):
        default_steps(four_agents, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(0)
    with pytest.raises(ValueError):
        SamplerConfig(5, laziness=1)
    assert SamplerConfig(1, laziness=Fraction(1, 2)).lazy_threshold == 1 << 63


def test_moves(four_agents):
    a, b, c, d = range(4)
    empty = Matching()
    ab = apply_move(four_agents, empty, (a, b))
    assert ab == Matching(((a, b),))
    assert apply_move(four_agents, ab, (a, b)) == empty
    assert apply_move(four_agents, ab, (a, c)) == Matching(((a, c),))
    abcd = Matching(((a, b), (c, d)))
    assert apply_move(four_agents, abcd, (a, c)) == abcd


def test_sample_is_reproducible_and_jobs_independent(k33):
    cfg = SamplerConfig(200, seed=5)
    assert sample_matching(k33, cfg, 3) == sample_matchings(k33, cfg, 5)[3]
    one = McmcSampler(k33, cfg, jobs=1).partners(40)
    three = McmcSampler(k33, cfg, jobs=3).partners(40)
    assert np.array_equal(one, three)
    assert np.array_equal(McmcSampler(k33, cfg).partners(10, 30), one[30:])


def test_exact_uniform_sampler_hits_every_matching(odd_cycle):
    s = ExactUniformSampler(odd_cycle, seed=1)
    counts = empirical_counts(odd_cycle, s.partners(4000))
    assert counts.sum() == 4000 and (counts > 800).all()


def test_edgeless_chain_stays_empty():
    inst = random_instance(4, 0, 1, seed=0)
    assert sample_matching(inst, SamplerConfig(10)) == Matching()
    assert transition_matrix(inst) == [[Fraction(1)]]


@settings(max_examples=40, deadline=None)
@given(instances(max_n=5))
def test_transition_matrix_is_symmetric_stochastic(inst):
    P = transition_matrix(inst)
    mu = len(P)
    assert mu == matching_space(inst).mu
    for i in range(mu):
        assert sum(P[i]) == 1
        assert P[i][i] >= Fraction(1, 2)
        for j in range(mu):
            assert P[i][j] == P[j][i]
    # uniform stationarity follows from symmetry, checked directly anyway
    for j in range(mu):
        assert sum(P[i][j] for i in range(mu)) == 1


def test_tv_small_at_default_steps(four_agents):
    tv = tv_diagnostic(four_agents, SamplerConfig.default(four_agents, seed=2), 20000)
    assert isinstance(tv, Fraction)
    assert tv < Fraction(3, 100)


def test_tv_large_when_chain_too_short(k33):
    # one step from the empty matching reaches at most 10 of the 34 matchings
    assert tv_diagnostic(k33, SamplerConfig(1, seed=0), 2000) > Fraction(1, 2)
