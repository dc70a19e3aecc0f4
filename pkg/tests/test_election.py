import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copematch.election import compare, delta, is_stable, vote
from copematch.model import InstanceError, Matching
from copematch.oracle import matching_space

import naive
from naive import instances


def test_vote_options(four_agents):
    a = four_agents.vertex("a")
    assert vote(four_agents, "a", "b", "c") == 1
    assert vote(four_agents, a, None, "d") == -1
    assert vote(four_agents, a, a, -1) == 0
    with pytest.raises(InstanceError):
        vote(four_agents, "a", "a", "zz")


def test_vote_tie_is_zero(k33):
    assert vote(k33, "2", "1", "5") == 0


def test_compare_against_empty(single_edge):
    m = single_edge.matching([("u", "v")])
    r = compare(single_edge, m, Matching())
    assert (r.votes_for, r.votes_against, r.delta, r.outcome) == (2, 0, 2, "win")
    assert compare(single_edge, Matching(), m).outcome == "loss"


def test_odd_cycle_hand_tally(odd_cycle):
    m12 = odd_cycle.matching([("1", "2")])
    m23 = odd_cycle.matching([("2", "3")])
    # 2 and 3 prefer each other's edge, 1 loses its partner
    assert delta(odd_cycle, m23, m12) == 1


def test_four_agents_nothing_stable(four_agents):
    assert not any(is_stable(four_agents, m)[0] for m in matching_space(four_agents).matchings)


def test_stable_reports_least_blocking_edge(odd_cycle):
    ok, edge = is_stable(odd_cycle, Matching())
    assert not ok and edge == (0, 1)
    assert is_stable(odd_cycle.induced(["1", "2"]), odd_cycle.induced(["1", "2"]).matching([("1", "2")]))[0]


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6), st.data())
def test_delta_matches_naive_and_is_antisymmetric(inst, data):
    ms = matching_space(inst).matchings
    m = data.draw(st.sampled_from(ms))
    n = data.draw(st.sampled_from(ms))
    d = delta(inst, m, n)
    assert d == naive.margin(inst, naive.to_set(m), naive.to_set(n))
    assert delta(inst, n, m) == -d
    assert delta(inst, m, m) == 0
