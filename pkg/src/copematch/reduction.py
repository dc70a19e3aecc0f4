"""Vertex-cover gadget construction and its constructive verifiers.

A cover instance H on vertices 1..n is compiled into a roommates instance:
each H-vertex i gets a gadget on ``a_i, a'_i, b_i, b'_i`` plus A auxiliary
vertices ``u_i^k`` adjacent only to ``a_i``; each H-edge e = (i, j), i < j,
gets a 14-vertex gadget joined to the vertex gadgets by the two edges
``(b_i, d_e)`` and ``(b_j, d'_e)``.

Vertex names: ``a1``, ``a'1``, ``b1``, ``b'1``, ``u1^0`` for vertex gadget 1,
and ``s(1,2)``, ``t''(1,2)``, ``d'(1,2)`` and so on for edge gadget (1, 2).

Whole-instance elections on reduced instances are far beyond enumeration.
Verification is done per gadget (exhaustively) and through explicit
witness matchings and dual certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Literal

import numpy as np

from .election import compare
from .model import Instance, Matching
from .oracle import matching_space, score_table
from .weighted import DualCertificate

__all__ = [
    "CoverInstance",
    "EDGE_ROLES",
    "ReductionArtifacts",
    "ReductionError",
    "StateAssignment",
    "build_dual_certificate",
    "build_reduction",
    "build_state_matching",
    "extract_cover",
    "parse_cover",
    "serialize_cover",
    "valid_assignments",
    "verify_gadgets",
    "verify_red_red_witnesses",
    "sweep_red_red_witnesses",
]

Color = Literal["red", "blue"]
Edge = tuple[int, int]

EDGE_ROLES = ("s", "t", "s'", "t'", "s''", "t''", "v", "v'", "w", "w'", "c", "d", "c'", "d'")
MAIN_ROLES = ("a", "a'", "b", "b'")

# edge-gadget preferences by role, best first; tiers are singletons unless grouped
_EDGE_PREFS = {
    "s": ["t'", "c", "t''", "v'", "v"],
    "t": ["s''", "c'", "s'", "w'", "w"],
    "s'": ["t'", "t"],
    "t'": ["s'", "s"],
    "s''": ["t''", "t"],
    "t''": ["s''", "s"],
    "v": ["s", "v'"],
    "v'": ["v", "s"],
    "w": ["t", "w'"],
    "w'": ["w", "t"],
    "c": ["d", "s"],
    "c'": ["d'", "t"],
}

# the reflection swapping the two halves of an edge gadget
MIRROR = {"s": "t", "t": "s", "s'": "t''", "t''": "s'", "s''": "t'", "t'": "s''",
          "v": "w", "w": "v", "v'": "w'", "w'": "v'", "c": "c'", "c'": "c", "d": "d'", "d'": "d"}

F_ROLES = (("s", "t''"), ("s'", "t'"), ("s''", "t"), ("v", "v'"), ("w", "w'"), ("c", "d"), ("c'", "d'"))
L_ROLES = (("s", "t'"), ("s'", "t"), ("s''", "t''"), ("v", "v'"), ("w", "w'"), ("c", "d"), ("c'", "d'"))

# every edge-gadget matching that ties with F (F itself and L included)
F_TIES = (
    F_ROLES,
    L_ROLES,
    (("c", "d"), ("c'", "d'"), ("v", "v'"), ("w", "w'"), ("s'", "t'"), ("s''", "t''")),
    (("c", "d"), ("c'", "d'"), ("v", "v'"), ("w", "w'"), ("s", "t'"), ("s''", "t''")),
    (("c", "d"), ("c'", "d'"), ("s", "t'"), ("s''", "t''"), ("v", "v'"), ("t", "w")),
    (("c", "d"), ("c'", "d'"), ("s'", "t'"), ("s''", "t''"), ("v", "v'"), ("t", "w")),
    (("c", "d"), ("c'", "d'"), ("s'", "t'"), ("s''", "t''"), ("s", "v"), ("w", "w'")),
    (("c", "d"), ("c'", "d'"), ("s'", "t'"), ("s''", "t''"), ("s", "v"), ("t", "w")),
    (("s'", "t'"), ("s''", "t''"), ("s", "c"), ("v", "v'"), ("w", "w'"), ("c'", "d'")),
    (("s'", "t'"), ("s''", "t''"), ("s", "c"), ("v", "v'"), ("t", "w"), ("c'", "d'")),
)


def mirror_roles(pairs: Iterable[tuple[str, str]]) -> tuple[tuple[str, str], ...]:
    return tuple((MIRROR[x], MIRROR[y]) for x, y in pairs)


L_TIES = tuple(mirror_roles(m) for m in F_TIES)


class ReductionError(ValueError):
    """Invalid cover instance, state assignment or matching for the reduction."""


@dataclass(frozen=True)
class CoverInstance:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ReductionError("vertex count must be nonnegative")
        norm = []
        for i, j in self.edges:
            if i == j:
                raise ReductionError(f"self-edge ({i},{j})")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ReductionError(f"edge ({i},{j}) has an endpoint outside 1..{self.n}")
            norm.append((min(i, j), max(i, j)))
        if len(set(norm)) != len(norm):
            raise ReductionError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def is_cover(self, vertices: Iterable[int]) -> bool:
        chosen = set(vertices)
        return all(i in chosen or j in chosen for i, j in self.edges)


def parse_cover(text: str) -> CoverInstance:
    """``p vc n m`` header followed by ``e i j`` lines; ``c`` lines are comments."""
    header = None
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if not toks or toks[0] == "c" or toks[0].startswith("#"):
            continue
        if toks[0] == "p":
            if header is not None or len(toks) != 4 or toks[1] != "vc":
                raise ReductionError(f"line {lineno}: expected a single 'p vc <n> <m>' line")
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise ReductionError(f"line {lineno}: counts must be integers") from None
        elif toks[0] == "e":
            if header is None:
                raise ReductionError(f"line {lineno}: edge before the 'p vc' line")
            if len(toks) != 3:
                raise ReductionError(f"line {lineno}: expected 'e <i> <j>'")
            try:
                edges.append((int(toks[1]), int(toks[2])))
            except ValueError:
                raise ReductionError(f"line {lineno}: endpoints must be integers") from None
        else:
            raise ReductionError(f"line {lineno}: unknown line type {toks[0]!r}")
    if header is None:
        raise ReductionError("missing 'p vc <n> <m>' line")
    if len(edges) != header[1]:
        raise ReductionError(f"header announces {header[1]} edges, found {len(edges)}")
    return CoverInstance(header[0], tuple(edges))


def serialize_cover(h: CoverInstance) -> str:
    return "".join([f"p vc {h.n} {len(h.edges)}\n"] + [f"e {i} {j}\n" for i, j in h.edges])


def vertex_name(role: str, i: int, k: int | None = None) -> str:
    return f"u{i}^{k}" if role == "u" else f"{role}{i}"


def edge_name(role: str, e: Edge) -> str:
    return f"{role}({e[0]},{e[1]})"


@dataclass(frozen=True, eq=False)
class ReductionArtifacts:
    cover: CoverInstance
    A: int
    instance: Instance
    vertex_gadget: dict[int, tuple[int, ...]]
    edge_gadget: dict[Edge, tuple[int, ...]]
    inter_gadget_edges: frozenset[Edge]

    def vx(self, role: str, i: int, k: int | None = None) -> int:
        return self.instance.index[vertex_name(role, i, k)]

    def ex(self, role: str, e: Edge) -> int:
        return self.instance.index[edge_name(role, e)]

    def edge_pairs(self, e: Edge, roles: Iterable[tuple[str, str]]) -> list[Edge]:
        return [(self.ex(x, e), self.ex(y, e)) for x, y in roles]

    def gadget_map(self) -> dict:
        """Plain-data description of every gadget (for sidecar files)."""
        nm = self.instance.names
        return {
            "A": self.A,
            "vertex_gadgets": {str(i): [nm[x] for x in vs] for i, vs in self.vertex_gadget.items()},
            "edge_gadgets": {f"{i},{j}": [nm[x] for x in vs] for (i, j), vs in self.edge_gadget.items()},
            "inter_gadget_edges": sorted([nm[u], nm[v]] for u, v in self.inter_gadget_edges),
        }


def build_reduction(h: CoverInstance, A: int = 100) -> ReductionArtifacts:
    if A < 1:
        raise ReductionError("auxiliary count A must be positive")
    prefs: dict[str, list] = {}
    order: list[str] = []
    low_edges = {i: [] for i in range(1, h.n + 1)}   # edges where i is the smaller endpoint
    high_edges = {i: [] for i in range(1, h.n + 1)}
    for e in h.edges:
        low_edges[e[0]].append(e)
        high_edges[e[1]].append(e)

    for i in range(1, h.n + 1):
        a, a2, b, b2 = (vertex_name(r, i) for r in MAIN_ROLES)
        us = [vertex_name("u", i, k) for k in range(A)]
        order += [a, a2, b, b2] + us
        prefs[a] = [b, b2, us]
        prefs[a2] = [b, b2]
        last = [edge_name("d", e) for e in low_edges[i]] + [edge_name("d'", e) for e in high_edges[i]]
        prefs[b] = [a, a2] + ([last] if last else [])
        prefs[b2] = [a, a2]
        for u in us:
            prefs[u] = [a]

    for e in h.edges:
        i, j = e
        order += [edge_name(r, e) for r in EDGE_ROLES]
        for role, lst in _EDGE_PREFS.items():
            prefs[edge_name(role, e)] = [edge_name(x, e) for x in lst]
        prefs[edge_name("d", e)] = [[edge_name("c", e), vertex_name("b", i)]]
        prefs[edge_name("d'", e)] = [[edge_name("c'", e), vertex_name("b", j)]]

    inst = Instance.from_preferences(prefs, order)
    idx = inst.index
    vertex_gadget = {
        i: tuple(idx[x] for x in [vertex_name(r, i) for r in MAIN_ROLES]
                 + [vertex_name("u", i, k) for k in range(A)])
        for i in range(1, h.n + 1)}
    edge_gadget = {e: tuple(idx[edge_name(r, e)] for r in EDGE_ROLES) for e in h.edges}
    inter = set()
    for e in h.edges:
        for u, v in ((idx[vertex_name("b", e[0])], idx[edge_name("d", e)]),
                     (idx[vertex_name("b", e[1])], idx[edge_name("d'", e)])):
            inter.add((min(u, v), max(u, v)))
    return ReductionArtifacts(h, A, inst, vertex_gadget, edge_gadget, frozenset(inter))


@dataclass(frozen=True)
class StateAssignment:
    vertex_state: dict[int, Color]

    def edge_choice(self, e: Edge) -> Literal["F", "L"]:
        return "F" if self.vertex_state[min(e)] == "blue" else "L"

    def uncovered_edges(self, h: CoverInstance) -> list[Edge]:
        return [e for e in h.edges if all(self.vertex_state[x] == "red" for x in e)]

    @classmethod
    def from_blue(cls, h: CoverInstance, blue: Iterable[int]) -> "StateAssignment":
        blue = set(blue)
        return cls({i: ("blue" if i in blue else "red") for i in range(1, h.n + 1)})


def valid_assignments(h: CoverInstance) -> list[StateAssignment]:
    """All state assignments with a blue endpoint on every H-edge."""
    out = []
    for colors in product(("red", "blue"), repeat=h.n):
        s = StateAssignment(dict(zip(range(1, h.n + 1), colors)))
        if not s.uncovered_edges(h):
            out.append(s)
    return out


def _check_states(art: ReductionArtifacts, s: StateAssignment) -> None:
    missing = [i for i in range(1, art.cover.n + 1) if i not in s.vertex_state]
    if missing:
        raise ReductionError(f"no state for H-vertices {missing}")
    bad = [c for c in s.vertex_state.values() if c not in ("red", "blue")]
    if bad:
        raise ReductionError(f"unknown state {bad[0]!r}")


def _vertex_state_pairs(art: ReductionArtifacts, i: int, color: Color) -> list[Edge]:
    a, a2, b, b2 = (art.vx(r, i) for r in MAIN_ROLES)
    return [(a, b), (a2, b2)] if color == "red" else [(a, b2), (a2, b)]


def build_state_matching(art: ReductionArtifacts, s: StateAssignment, strict: bool = True) -> Matching:
    """Vertex gadgets in their assigned states; edge gadgets on F or L."""
    _check_states(art, s)
    if strict:
        bad = s.uncovered_edges(art.cover)
        if bad:
            raise ReductionError(f"edge {bad[0]} has two red endpoints")
    pairs = []
    for i, color in s.vertex_state.items():
        pairs += _vertex_state_pairs(art, i, color)
    for e in art.cover.edges:
        pairs += art.edge_pairs(e, F_ROLES if s.edge_choice(e) == "F" else L_ROLES)
    return art.instance.matching(pairs)


_Y_ON_F = {"s": -1, "t": -1, "s'": -1, "s''": 1, "t''": 1, "t'": 1, "v": 1, "w": 1,
           "v'": -1, "w'": -1, "c": 1, "d": -1, "c'": -1, "d'": 1}
_Y_ON_L = {"s": -1, "t": -1, "t''": -1, "s''": 1, "s'": 1, "t'": 1, "v": 1, "w": 1,
           "v'": -1, "w'": -1, "c": -1, "d": 1, "c'": 1, "d'": -1}
_Y_BLUE = {"a": 1, "b": 1, "a'": -1, "b'": -1}
_Y_RED = {"a": 1, "a'": 1, "b": -1, "b'": -1}


def build_dual_certificate(art: ReductionArtifacts, s: StateAssignment) -> DualCertificate:
    """Vertex potentials certifying popularity of the state matching of s."""
    _check_states(art, s)
    bad = s.uncovered_edges(art.cover)
    if bad:
        raise ReductionError(f"edge {bad[0]} has two red endpoints; no certificate exists")
    y: dict[int, int] = {}
    for i, color in s.vertex_state.items():
        table = _Y_BLUE if color == "blue" else _Y_RED
        for role, val in table.items():
            y[art.vx(role, i)] = val
        for k in range(art.A):
            y[art.vx("u", i, k)] = 0
    for e in art.cover.edges:
        table = _Y_ON_F if s.edge_choice(e) == "F" else _Y_ON_L
        for role, val in table.items():
            y[art.ex(role, e)] = val
    return DualCertificate(y)


def extract_cover(art: ReductionArtifacts, m: Matching) -> tuple[set[int], bool]:
    """H-vertices whose gadget is blue in m, and whether they cover H."""
    art.instance.check_matching(m)
    used = [e for e in m.pairs if e in art.inter_gadget_edges]
    if used:
        u, v = used[0]
        nm = art.instance.names
        raise ReductionError(f"matching uses inter-gadget edge {nm[u]}-{nm[v]}")
    blue = set()
    for i in range(1, art.cover.n + 1):
        if all(p in m for p in _vertex_state_pairs(art, i, "blue")):
            blue.add(i)
        elif not all(p in m for p in _vertex_state_pairs(art, i, "red")):
            raise ReductionError(f"vertex gadget {i} is in neither the red nor the blue state")
    return blue, art.cover.is_cover(blue)


# ---------------------------------------------------------------- gadget checks

@dataclass
class GadgetCount:
    ties: int
    defeats: int
    tying: list[Matching] = field(default_factory=list)


def _count_against(sub: Instance, m: Matching) -> GadgetCount:
    space = matching_space(sub)
    r = np.asarray(sub.partner_ranks(m), dtype=np.int32)
    d = np.sign(space.ranks - r[None, :]).sum(axis=1)   # Δ(m, N)
    tying = [space.matchings[i] for i in np.flatnonzero(d == 0)]
    return GadgetCount(len(tying), int((d < 0).sum()), tying)


def _local(sub: Instance, art: ReductionArtifacts, pairs: Iterable[Edge]) -> Matching:
    nm = art.instance.names
    return sub.matching([(nm[u], nm[v]) for u, v in pairs])


@dataclass
class EdgeGadgetReport:
    edge: Edge
    matchings: int
    f: GadgetCount
    l: GadgetCount
    f_list_ok: bool
    l_list_ok: bool
    min_defeats_plus_ties: int
    minimizers: list[Matching]

    @property
    def ok(self) -> bool:
        return (self.f.ties == 10 and self.f.defeats == 0 and self.l.ties == 10
                and self.l.defeats == 0 and self.f_list_ok and self.l_list_ok
                and self.min_defeats_plus_ties == 10)


@dataclass
class VertexGadgetReport:
    vertex: int
    matchings: int
    red: GadgetCount
    blue: GadgetCount
    red_list_ok: bool
    blue_list_ok: bool

    @property
    def ok(self) -> bool:
        return (self.red.ties == 2 and self.blue.ties == 3 and self.red.defeats == 0
                and self.blue.defeats == 0 and self.red_list_ok and self.blue_list_ok)


@dataclass
class GadgetReport:
    edges: list[EdgeGadgetReport]
    vertices: list[VertexGadgetReport]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.edges) and all(r.ok for r in self.vertices)

    def to_dict(self, art: ReductionArtifacts) -> dict:
        return {
            "ok": self.ok,
            "edge_gadgets": [{
                "edge": list(r.edge), "matchings": r.matchings,
                "F": {"ties": r.f.ties, "defeats": r.f.defeats, "list_matches": r.f_list_ok},
                "L": {"ties": r.l.ties, "defeats": r.l.defeats, "list_matches": r.l_list_ok},
                "min_defeats_plus_ties": r.min_defeats_plus_ties,
                "minimizers": len(r.minimizers)} for r in self.edges],
            "vertex_gadgets": [{
                "vertex": r.vertex, "matchings": r.matchings,
                "red": {"ties": r.red.ties, "defeats": r.red.defeats, "list_matches": r.red_list_ok},
                "blue": {"ties": r.blue.ties, "defeats": r.blue.defeats, "list_matches": r.blue_list_ok},
            } for r in self.vertices],
        }


def verify_edge_gadget(art: ReductionArtifacts, e: Edge) -> EdgeGadgetReport:
    sub = art.instance.induced(art.edge_gadget[e])
    f = _count_against(sub, _local(sub, art, art.edge_pairs(e, F_ROLES)))
    l_ = _count_against(sub, _local(sub, art, art.edge_pairs(e, L_ROLES)))
    expect_f = {_local(sub, art, art.edge_pairs(e, m)) for m in F_TIES}
    expect_l = {_local(sub, art, art.edge_pairs(e, m)) for m in L_TIES}
    table = score_table(sub)
    # defeats + ties of N = matchings it does not beat = ties + losses
    dt = [r.ties + r.losses for r in table]
    low = min(dt)
    space = matching_space(sub)
    return EdgeGadgetReport(e, space.mu, f, l_, set(f.tying) == expect_f, set(l_.tying) == expect_l,
                            low, [m for m, x in zip(space.matchings, dt) if x == low])


def verify_vertex_gadget(art: ReductionArtifacts, i: int) -> VertexGadgetReport:
    sub = art.instance.induced(art.vertex_gadget[i])
    red_pairs = _vertex_state_pairs(art, i, "red")
    blue_pairs = _vertex_state_pairs(art, i, "blue")
    red = _count_against(sub, _local(sub, art, red_pairs))
    blue = _count_against(sub, _local(sub, art, blue_pairs))
    red_m = _local(sub, art, red_pairs)
    blue_m = _local(sub, art, blue_pairs)
    top = _local(sub, art, [(art.vx("a", i), art.vx("b", i))])
    return VertexGadgetReport(i, matching_space(sub).mu, red, blue,
                              set(red.tying) == {red_m, blue_m},
                              set(blue.tying) == {red_m, blue_m, top})


def verify_gadgets(art: ReductionArtifacts) -> GadgetReport:
    """Exhaustive tie/defeat counts for every gadget's induced subgraph."""
    return GadgetReport([verify_edge_gadget(art, e) for e in art.cover.edges],
                        [verify_vertex_gadget(art, i) for i in range(1, art.cover.n + 1)])


# ------------------------------------------------------------ red-red witnesses

@dataclass
class WitnessReport:
    edge: Edge
    case: str
    witnesses: list[Matching]
    deltas: list[int]

    @property
    def confirmed(self) -> int:
        """Witnesses that tie with or defeat the restricted matching."""
        return sum(1 for d in self.deltas if d >= 0)

    @property
    def ok(self) -> bool:
        return len(set(self.witnesses)) == len(self.witnesses) and self.confirmed == len(self.witnesses)


def _union_vertices(art: ReductionArtifacts, e: Edge) -> list[int]:
    return sorted(set(art.edge_gadget[e]) | set(art.vertex_gadget[e[0]]) | set(art.vertex_gadget[e[1]]))


class _PairSet:
    """Mutable matching on named roles, used to assemble witnesses."""

    def __init__(self, pairs: Iterable[Edge]):
        self.partner: dict[int, int] = {}
        for u, v in pairs:
            self.partner[u] = v
            self.partner[v] = u

    def drop(self, u: int) -> int | None:
        v = self.partner.pop(u, None)
        if v is not None:
            del self.partner[v]
        return v

    def add(self, u: int, v: int) -> None:
        self.drop(u)
        self.drop(v)
        self.partner[u] = v
        self.partner[v] = u

    def free(self, u: int) -> bool:
        return u not in self.partner

    def has(self, u: int, v: int) -> bool:
        return self.partner.get(u) == v

    def pairs(self) -> list[Edge]:
        return [(u, v) for u, v in self.partner.items() if u < v]


def _witness_case(art: ReductionArtifacts, e: Edge, base: _PairSet):
    """Proof case for the edge-gadget part of a red-red matching, plus the side it acts on.

    Side ``0`` works with s, c, d and vertex gadget i; side ``1`` is the mirror image
    (t, c', d', gadget j).
    """
    x = lambda r: art.ex(r, e)  # noqa: E731
    if base.has(x("s"), x("c")):
        return "1", 0
    if base.has(x("t"), x("c'")):
        return "1", 1
    if base.has(x("s"), x("t'")) and base.has(x("s''"), x("t")):
        return "2", 0
    # s worse than c (or unmatched) unless s sits at its top choice
    side = 1 if base.has(x("s"), x("t'")) else 0
    r = MIRROR if side else {k: k for k in MIRROR}
    t, s1, s2 = x(r["t"]), x(r["s'"]), x(r["s''"])
    if base.has(s1, t) or base.has(s2, t):
        return "3a", side
    return "3b", side


def _build_witness(art: ReductionArtifacts, e: Edge, base: _PairSet, case: str, side: int,
                   k: int) -> list[Edge]:
    r = MIRROR if side else {key: key for key in MIRROR}
    x = lambda role: art.ex(r[role], e)  # noqa: E731
    gi = e[side]
    a, b, u = art.vx("a", gi), art.vx("b", gi), art.vx("u", gi, k)
    w = _PairSet(base.pairs())
    s, c, d = x("s"), x("c"), x("d")
    if case == "2":
        w.drop(x("s"))
        w.drop(x("t"))
        w.add(x("s'"), x("t'"))
        w.add(x("s''"), x("t''"))
    elif case in ("3a", "3b"):
        t = x("t")
        if case == "3a":
            other = w.partner[t]
            top = x("t'") if other == x("s'") else x("t''")
            w.drop(t)
            w.add(other, top)   # frees whatever top was matched to (only ever s)
        else:
            tw, tw2 = x("w"), x("w'")
            if w.has(t, tw):
                w.add(t, tw2)
            elif w.has(t, tw2):
                w.add(tw, tw2)
            else:
                w.add(t, tw)
        old = w.drop(s)
        if old in (x("v"), x("v'")):
            w.add(x("v"), x("v'"))
        elif old == x("t''") and w.free(x("s''")):
            w.add(x("s''"), x("t''"))
    # all cases: s takes c, d takes b_i, a_i takes an auxiliary vertex
    if case != "1":
        w.add(s, c)
    w.drop(d)
    w.add(a, u)
    w.add(d, b)
    return w.pairs()


def verify_red_red_witnesses(art: ReductionArtifacts, e: Edge, m: Matching) -> WitnessReport:
    """Build the A witnesses for a red-red edge and check each ties with or beats m.

    Elections are held on the subgraph induced by the edge gadget and both
    endpoint gadgets, with m restricted to it.
    """
    e = (min(e), max(e))
    if e not in art.edge_gadget:
        raise ReductionError(f"{e} is not an edge of the cover instance")
    art.instance.check_matching(m)
    keep = _union_vertices(art, e)
    inside = set(keep)
    base_pairs = [p for p in m.pairs if p[0] in inside and p[1] in inside]
    base = _PairSet(base_pairs)
    for i in e:
        if not all(base.has(u, v) for u, v in _vertex_state_pairs(art, i, "red")):
            raise ReductionError(f"vertex gadget {i} is not red in the given matching")
    case, side = _witness_case(art, e, base)
    sub = art.instance.induced(keep)
    ref = _local(sub, art, base_pairs)
    witnesses, deltas = [], []
    for k in range(art.A):
        wm = _local(sub, art, _build_witness(art, e, base, case, side, k))
        witnesses.append(wm)
        deltas.append(compare(sub, wm, ref).delta)
    label = case + ("" if side == 0 else "-mirror")
    return WitnessReport(e, label, witnesses, deltas)


def sweep_red_red_witnesses(art: ReductionArtifacts, e: Edge) -> dict[str, list[WitnessReport]]:
    """Run the witness check for every edge-gadget matching under red-red vertex gadgets."""
    e = (min(e), max(e))
    sub = art.instance.induced(art.edge_gadget[e])
    idx = art.instance.index
    reds = _vertex_state_pairs(art, e[0], "red") + _vertex_state_pairs(art, e[1], "red")
    out: dict[str, list[WitnessReport]] = {}
    for t in matching_space(sub).matchings:
        pairs = [(idx[sub.names[u]], idx[sub.names[v]]) for u, v in t.pairs]
        rep = verify_red_red_witnesses(art, e, art.instance.matching(pairs + reds))
        out.setdefault(rep.case, []).append(rep)
    return out
