import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copematch.election import compare
from copematch.fpras import FprasConfig, rank_rows, run_fpras, sample_size
from copematch.model import random_instance

from naive import instances


def test_sample_size():
    assert sample_size(1, Fraction(1, 2)) == 1
    assert sample_size(3, Fraction(1, 2)) == math.ceil(128 * math.log(3))
    with pytest.raises(ValueError):
        sample_size(3, 0)


def test_edgeless_tournament_all_ties():
    inst = random_instance(3, 0, 1, seed=0)
    rep = run_fpras(inst, FprasConfig(1, backend="exact-uniform"))
    assert rep.k == 36
    assert rep.winner_primed_score == 18
    assert (rep.winner_side, rep.winner_position) == (0, 0)


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        FprasConfig(0)
    with pytest.raises(ValueError):
        FprasConfig(Fraction(1, 2), backend="magic")
    with pytest.raises(ValueError):
        FprasConfig(Fraction(1, 2), k_override=0)


def test_counters_equal_naive_double_loop(k33):
    rep = run_fpras(k33, FprasConfig(Fraction(1, 2), seed=3, k_override=25, backend="exact-uniform"))
    wins0 = [0] * 25
    ties0 = [0] * 25
    wins1 = [0] * 25
    ties1 = [0] * 25
    for i, m in enumerate(rep.sample0):
        for j, n in enumerate(rep.sample1):
            d = compare(k33, m, n).delta
            if d > 0:
                wins0[i] += 1
            elif d < 0:
                wins1[j] += 1
            else:
                ties0[i] += 1
                ties1[j] += 1
    assert (list(rep.wins0), list(rep.ties0), list(rep.wins1), list(rep.ties1)) == (wins0, ties0, wins1, ties1)
    scores = rep.primed_scores(0) + rep.primed_scores(1)
    assert rep.winner_primed_score == max(scores)
    assert scores.index(max(scores)) == rep.winner_side * 25 + rep.winner_position


def test_rank_rows(four_agents):
    p = np.array([[-1, -1, -1, -1], [3, 2, 1, 0]])
    r = rank_rows(four_agents, p)
    assert r[0].tolist() == [4, 4, 4, 4]
    assert r[1].tolist() == [3, 1, 2, 1]


def test_mcmc_report_is_reproducible(four_agents):
    cfg = FprasConfig(Fraction(1, 2), seed=8)
    a, b = run_fpras(four_agents, cfg), run_fpras(four_agents, cfg)
    assert a == b
    assert a.sampler["backend"] == "mcmc"
    # closeness target min(eps/4, 1/20) = 1/20
    assert a.sampler["steps"] == math.ceil(10 * 6 * 4 * math.log(20))
    tight = run_fpras(four_agents, FprasConfig(Fraction(1, 10), seed=8, k_override=2))
    assert tight.sampler["steps"] == math.ceil(10 * 6 * 4 * math.log(40))
    d = a.to_dict(four_agents)
    assert d["half_k_bound_ok"] and d["conservation_ok"] and len(d["samples"][0]) == a.k


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6), st.integers(0, 2**32), st.integers(1, 30))
def test_tournament_invariants(inst, seed, k):
    rep = run_fpras(inst, FprasConfig(Fraction(1, 3), seed=seed, k_override=k, backend="exact-uniform"))
    kk = rep.k
    assert rep.winner_primed_score >= Fraction(kk, 2)
    assert sum(rep.primed_scores(0)) + sum(rep.primed_scores(1)) == kk * kk
    assert all(w + t <= kk for w, t in zip(rep.wins0 + rep.wins1, rep.ties0 + rep.ties1))
