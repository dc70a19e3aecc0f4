import pytest
from hypothesis import given, settings

from copematch.model import (Instance, InstanceError, Matching, MatchingError, ParseError, augment,
                             parse_instance, parse_matching, random_instance, serialize_instance,
                             serialize_matching)

from naive import edges_of, instances


def test_parse_ties_and_ranks(k33):
    assert k33.n == 6
    assert len(k33.edges) == 9
    two = k33.vertex("2")
    assert {k33.rank[(two, v)] for v in k33.neighbors[two]} == {1}
    assert k33.self_rank[two] == 2
    assert k33.rank[(k33.vertex("1"), k33.vertex("2"))] == 3
    assert not k33.is_strict()


def test_parse_comments_and_blank_lines():
    inst = parse_instance("# hi\n\ninstance v1\n  # indented comment\na: b\nb: a\n")
    assert inst.edges == ((0, 1),)


def test_isolated_vertex_warns():
    inst = parse_instance("instance v1\na:\nb: c\nc: b\n")
    assert inst.validation_warnings() == ["vertex a has an empty preference list"]


@pytest.mark.parametrize("text, line, column", [
    ("instance v2\n", 1, 1),
    ("instance v1\na: b\n", 2, 4),
    ("instance v1\na: b\nb: c\nc:\n", 2, 4),
    ("instance v1\na: b > b\nb: a\n", 2, 8),
    ("instance v1\na: a\n", 2, 4),
    ("instance v1\na b\n", 2, 4),
    ("instance v1\na: b\nb: a\na: b\n", 4, 1),
    ("instance v1\na: b c\nb: a\nc: a\n", 2, 6),
])
def test_parse_errors_locate_problem(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert exc.value.line == line
    assert exc.value.column == column


def test_missing_header():
    with pytest.raises(ParseError):
        parse_instance("# only a comment\n")


def test_matching_roundtrip(four_agents):
    m = four_agents.matching([("a", "d"), ("b", "c")])
    text = serialize_matching(four_agents, m)
    assert parse_matching(text, four_agents) == m


def test_matching_rejects_non_edges_and_overlaps(odd_cycle):
    with pytest.raises(ParseError):
        parse_matching("match v1\n1 - 2\n2 - 3\n", odd_cycle)
    inst = parse_instance("instance v1\na: b\nb: a\nc:\n")
    with pytest.raises(MatchingError):
        inst.matching([("a", "c")])
    with pytest.raises(MatchingError):
        Matching.of([(0, 0)])


def test_asymmetric_preferences_rejected():
    with pytest.raises(InstanceError):
        Instance(("a", "b"), (((1,),), ()))


def test_augment_covers_every_vertex(four_agents):
    m = four_agents.matching([("a", "b")])
    aug = augment(four_agents, m)
    assert aug.loops == {2, 3}
    assert aug.covers_exactly_once(4)


def test_random_instance_deterministic():
    a = random_instance(7, 0.5, 3, seed=4)
    assert a == random_instance(7, 0.5, 3, seed=4)
    assert a.names == tuple(f"v{i}" for i in range(1, 8))


def test_induced_restricts_lists(four_agents):
    sub = four_agents.induced(["a", "b", "d"])
    assert sub.names == ("a", "b", "d")
    assert [len(g) for g in sub.tiers] == [2, 2, 2]


@settings(max_examples=150, deadline=None)
@given(instances(max_n=7))
def test_serialize_parse_roundtrip(inst):
    again = parse_instance(serialize_instance(inst))
    assert again == inst
    assert list(again.edges) == edges_of(inst)


@settings(max_examples=100, deadline=None)
@given(instances(max_n=7))
def test_partner_ranks_match_definition(inst):
    ranks = inst.partner_ranks(Matching())
    assert ranks == [len(t) + 1 for t in inst.tiers]
    for u, v in inst.edges:
        r = inst.partner_ranks(Matching.of([(u, v)]))
        assert r[u] == inst.rank[(u, v)] and r[v] == inst.rank[(v, u)]
