import itertools

import pytest

from copematch.model import Matching
from copematch.oracle import is_popular
from copematch.reduction import (F_TIES, L_TIES, MIRROR, CoverInstance, ReductionError,
                                 StateAssignment, build_dual_certificate, build_reduction,
                                 build_state_matching, extract_cover, parse_cover, serialize_cover,
                                 sweep_red_red_witnesses, valid_assignments, verify_edge_gadget,
                                 verify_gadgets, verify_red_red_witnesses, verify_vertex_gadget)
from copematch.weighted import is_popular_via_solver, verify_dual

ONE_EDGE = CoverInstance(2, ((1, 2),))
PATH3 = CoverInstance(3, ((1, 2), (2, 3)))


def test_parse_and_serialize():
    h = parse_cover("c a path\np vc 3 2\ne 2 1\ne 2 3\n")
    assert h == PATH3
    assert parse_cover(serialize_cover(h)) == h


@pytest.mark.parametrize("text", [
    "e 1 2\n", "p vc 2 2\ne 1 2\n", "p vc 2 1\ne 1 1\n", "p vc 2 1\ne 1 3\n",
    "p vc 2 1\nx 1 2\n", "p vc 2 1\ne 1 2\ne 2 1\n", "p vc two 1\n", "",
])
def test_parse_rejects(text):
    with pytest.raises(ReductionError):
        parse_cover(text)


def test_sizes_for_one_edge():
    art = build_reduction(ONE_EDGE, 100)
    assert art.instance.n == 222
    assert len(art.instance.edges) == 226
    assert len(art.inter_gadget_edges) == 2
    names = art.instance.names
    assert sorted(names[u] + "-" + names[v] for u, v in art.inter_gadget_edges) == ["b1-d(1,2)", "b2-d'(1,2)"]


def test_tie_lists_are_mirror_images():
    assert len(F_TIES) == len(L_TIES) == 10
    assert all(MIRROR[MIRROR[r]] == r for r in MIRROR)
    with pytest.raises(ReductionError):
        build_reduction(ONE_EDGE, 0)


@pytest.mark.parametrize("A", [1, 3])
def test_gadget_counts(A):
    art = build_reduction(ONE_EDGE, A)
    e = verify_edge_gadget(art, (1, 2))
    assert (e.f.ties, e.f.defeats, e.l.ties, e.l.defeats) == (10, 0, 10, 0)
    assert e.f_list_ok and e.l_list_ok
    assert e.min_defeats_plus_ties == 10
    v = verify_vertex_gadget(art, 1)
    assert (v.red.ties, v.red.defeats, v.blue.ties, v.blue.defeats) == (2, 0, 3, 0)
    assert verify_gadgets(art).ok


def test_state_matching_roundtrip_and_certificate():
    art = build_reduction(PATH3, 2)
    for s in valid_assignments(PATH3):
        m = build_state_matching(art, s)
        blue, covers = extract_cover(art, m)
        assert covers and blue == {i for i, c in s.vertex_state.items() if c == "blue"}
        rep = verify_dual(art.instance, m, build_dual_certificate(art, s))
        assert rep.ok and rep.objective == 0
        assert all(rep.edge_slack[x] >= 1 for x in art.inter_gadget_edges)
        assert is_popular_via_solver(art.instance, m)[0]


def test_valid_assignments_are_exactly_the_covers():
    got = {frozenset(i for i, c in s.vertex_state.items() if c == "blue") for s in valid_assignments(PATH3)}
    want = {frozenset(c) for r in range(4) for c in itertools.combinations((1, 2, 3), r)
            if PATH3.is_cover(c)}
    assert got == want


def test_all_red_refused():
    art = build_reduction(ONE_EDGE, 1)
    red = StateAssignment.from_blue(ONE_EDGE, [])
    with pytest.raises(ReductionError):
        build_state_matching(art, red)
    with pytest.raises(ReductionError):
        build_dual_certificate(art, red)
    loose = build_state_matching(art, red, strict=False)
    assert extract_cover(art, loose) == (set(), False)


def test_extract_cover_rejects_inter_gadget_edge():
    art = build_reduction(ONE_EDGE, 1)
    u, v = sorted(art.inter_gadget_edges)[0]
    with pytest.raises(ReductionError):
        extract_cover(art, Matching(((u, v),)))


def test_popular_state_matching_on_tiny_reduction_by_enumeration():
    # small enough (A = 1) for the brute-force oracle on the single-gadget subgraph
    art = build_reduction(CoverInstance(1, ()), 1)
    s = StateAssignment.from_blue(art.cover, [1])
    assert is_popular(art.instance, build_state_matching(art, s))


def test_red_red_witnesses_single_matching():
    art = build_reduction(ONE_EDGE, 3)
    m = build_state_matching(art, StateAssignment.from_blue(ONE_EDGE, []), strict=False)
    rep = verify_red_red_witnesses(art, (1, 2), m)
    assert len(rep.witnesses) == 3 and rep.ok
    with pytest.raises(ReductionError):
        verify_red_red_witnesses(art, (1, 2), build_state_matching(art, StateAssignment.from_blue(ONE_EDGE, [1])))


def test_red_red_sweep_covers_every_case():
    art = build_reduction(ONE_EDGE, 2)
    cases = sweep_red_red_witnesses(art, (1, 2))
    assert {"1", "2", "3a", "3b"} <= set(cases)
    assert sum(len(v) for v in cases.values()) == 816
    assert all(r.ok for v in cases.values() for r in v)
