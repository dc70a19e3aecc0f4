"""Instances with weak rankings, matchings, and their text formats.

An :class:`Instance` stores, for every vertex, its neighbors grouped into
tie-classes ("tiers"); tier 1 is the most preferred.  Being unmatched (the
self-option) is implicitly ranked one tier below the last neighbor tier.
Vertices are addressed internally by their index in file order.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "AugmentedMatching",
    "Instance",
    "InstanceError",
    "Matching",
    "MatchingError",
    "ParseError",
    "augment",
    "parse_instance",
    "parse_matching",
    "random_instance",
    "serialize_instance",
    "serialize_matching",
]

INSTANCE_HEADER = "instance v1"
MATCHING_HEADER = "match v1"

_NAME_RE = re.compile(r"[^\s:>=#]+")


class InstanceError(ValueError):
    """Raised when an instance violates the model invariants."""


class MatchingError(ValueError):
    """Raised when a set of pairs is not a matching of the instance."""


class ParseError(ValueError):
    """Syntax or consistency error in an instance/matching file."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True, order=True)
class Matching:
    """A set of vertex-disjoint edges, stored as sorted index pairs ``(i, j)``, ``i < j``.

    The natural ordering of matchings is lexicographic on the sorted pair
    list, which coincides with the enumeration order of the oracle.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        norm = sorted((min(u, v), max(u, v)) for u, v in pairs)
        seen: set[int] = set()
        for u, v in norm:
            if u == v:
                raise MatchingError(f"self-pair ({u},{u}) is not an edge")
            if u in seen or v in seen:
                raise MatchingError(f"pairs are not vertex-disjoint at ({u},{v})")
            seen.update((u, v))
        return cls(tuple(norm))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair) -> bool:
        u, v = pair
        return (min(u, v), max(u, v)) in self.pairs

    def partner_array(self, n: int) -> list[int]:
        """Partner index per vertex, ``-1`` for unmatched vertices."""
        p = [-1] * n
        for u, v in self.pairs:
            p[u] = v
            p[v] = u
        return p

    def vertices(self) -> set[int]:
        return {x for pair in self.pairs for x in pair}


@dataclass(frozen=True)
class AugmentedMatching:
    """A matching completed with self-loops at every unmatched vertex."""

    base: Matching
    loops: frozenset[int]

    def covers_exactly_once(self, n: int) -> bool:
        counts = [0] * n
        for u, v in self.base.pairs:
            counts[u] += 1
            counts[v] += 1
        for u in self.loops:
            counts[u] += 1
        return all(c == 1 for c in counts)


def augment(inst: "Instance", m: Matching) -> AugmentedMatching:
    inst.check_matching(m)
    covered = m.vertices()
    return AugmentedMatching(m, frozenset(u for u in range(inst.n) if u not in covered))


@dataclass(frozen=True)
class Instance:
    """A roommates instance with weak rankings.

    ``tiers[u]`` lists u's neighbor indices grouped into tie-classes, best
    first.  Construct through :meth:`from_preferences` or :func:`parse_instance`
    unless the tiers are already normalized.
    """

    names: tuple[str, ...]
    tiers: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.tiers) != n:
            raise InstanceError("one tier list per vertex required")
        if len(set(self.names)) != n:
            raise InstanceError("vertex names must be unique")
        for name in self.names:
            if not _NAME_RE.fullmatch(name):
                raise InstanceError(f"invalid vertex name {name!r}")
        for u, groups in enumerate(self.tiers):
            seen: set[int] = set()
            for g in groups:
                if not g:
                    raise InstanceError(f"empty tie-class for {self.names[u]}")
                for v in g:
                    if not 0 <= v < n:
                        raise InstanceError(f"neighbor index {v} out of range")
                    if v == u:
                        raise InstanceError(f"{self.names[u]} ranks itself")
                    if v in seen:
                        raise InstanceError(f"{self.names[u]} lists {self.names[v]} twice")
                    seen.add(v)
        rank = self.rank
        for (u, v) in rank:
            if (v, u) not in rank:
                raise InstanceError(
                    f"asymmetric acceptability: {self.names[u]} lists {self.names[v]} "
                    f"but {self.names[v]} does not list {self.names[u]}")

    @classmethod
    def from_preferences(cls, prefs: Mapping[str, Sequence[Sequence[str] | str]],
                         order: Sequence[str] | None = None) -> "Instance":
        """Build from ``{name: [tie-class, ...]}``; a bare string is a singleton class.

        Tier numbers need not be given; empty classes are dropped.
        """
        names = tuple(order) if order is not None else tuple(prefs)
        index = {name: i for i, name in enumerate(names)}
        tiers = []
        for name in names:
            groups = []
            for g in prefs.get(name, ()):
                members = (g,) if isinstance(g, str) else tuple(g)
                if not members:
                    continue
                try:
                    groups.append(tuple(sorted(index[x] for x in members)))
                except KeyError as exc:
                    raise InstanceError(f"unknown vertex {exc.args[0]!r} in list of {name}") from None
            tiers.append(tuple(groups))
        return cls(names, tuple(tiers))

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def rank(self) -> dict[tuple[int, int], int]:
        """``rank[(u, v)]`` is the tier (1-based) of v in u's list."""
        return {(u, v): t + 1
                for u, groups in enumerate(self.tiers)
                for t, g in enumerate(groups) for v in g}

    @cached_property
    def self_rank(self) -> tuple[int, ...]:
        return tuple(len(groups) + 1 for groups in self.tiers)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for (u, v) in self.rank if u < v))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(v for g in groups for v in g)) for groups in self.tiers)

    def vertex(self, x: int | str) -> int:
        if isinstance(x, str):
            try:
                return self.index[x]
            except KeyError:
                raise InstanceError(f"unknown vertex {x!r}") from None
        if not 0 <= x < self.n:
            raise InstanceError(f"vertex index {x} out of range")
        return x

    def rank_of(self, u: int, x: int | None) -> int:
        """Tier of option x for u; ``None``, ``-1`` or ``u`` itself is the self-option."""
        if x is None or x == -1 or x == u:
            return self.self_rank[u]
        try:
            return self.rank[(u, x)]
        except KeyError:
            raise InstanceError(f"{self.names[x]} is not acceptable to {self.names[u]}") from None

    def is_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.rank

    def matching(self, pairs: Iterable[tuple[int | str, int | str]]) -> Matching:
        """Matching from name or index pairs, validated against this instance."""
        m = Matching.of((self.vertex(u), self.vertex(v)) for u, v in pairs)
        self.check_matching(m)
        return m

    def check_matching(self, m: Matching) -> None:
        for u, v in m.pairs:
            if not (0 <= u < self.n and 0 <= v < self.n) or (u, v) not in self.rank:
                raise MatchingError(f"pair ({u},{v}) is not an edge of the instance")

    def named(self, m: Matching) -> list[tuple[str, str]]:
        return [(self.names[u], self.names[v]) for u, v in m.pairs]

    def partner_ranks(self, m: Matching) -> list[int]:
        """Rank of each vertex's partner in the augmented matching."""
        r = list(self.self_rank)
        for u, v in m.pairs:
            r[u] = self.rank[(u, v)]
            r[v] = self.rank[(v, u)]
        return r

    def induced(self, vertices: Iterable[int | str]) -> "Instance":
        """Induced sub-instance; rankings restricted to surviving neighbors."""
        keep = sorted({self.vertex(x) for x in vertices})
        pos = {u: i for i, u in enumerate(keep)}
        tiers = []
        for u in keep:
            groups = []
            for g in self.tiers[u]:
                sub = tuple(sorted(pos[v] for v in g if v in pos))
                if sub:
                    groups.append(sub)
            tiers.append(tuple(groups))
        return Instance(tuple(self.names[u] for u in keep), tuple(tiers))

    def validation_warnings(self) -> list[str]:
        return [f"vertex {self.names[u]} has an empty preference list"
                for u in range(self.n) if not self.tiers[u]]

    def is_strict(self) -> bool:
        return all(len(g) == 1 for groups in self.tiers for g in groups)


def _tokens(text: str, base: int) -> list[tuple[str, int]]:
    # (token, 1-based column) for whitespace-separated tokens of a line slice at 0-based ``base``
    return [(mt.group(), base + mt.start() + 1) for mt in re.finditer(r"\S+", text)]


def parse_instance(text: str) -> Instance:
    """Parse the ``instance v1`` text format; see :func:`serialize_instance`."""
    header_seen = False
    order: list[str] = []
    raw: dict[str, list[list[tuple[str, int, int]]]] = {}
    first_line: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not header_seen:
            if stripped != INSTANCE_HEADER:
                raise ParseError(f"expected header {INSTANCE_HEADER!r}", lineno,
                                 line.index(stripped[0]) + 1)
            header_seen = True
            continue
        if ":" not in line:
            raise ParseError("expected '<name> : <preferences>'", lineno, len(line) + 1)
        colon = line.index(":")
        name = line[:colon].strip()
        if not name or not _NAME_RE.fullmatch(name):
            raise ParseError(f"invalid agent name {name!r}", lineno, 1)
        if name in raw:
            raise ParseError(f"duplicate agent line for {name!r} (first on line {first_line[name]})",
                             lineno, line.index(name) + 1)
        first_line[name] = lineno
        order.append(name)
        body = line[colon + 1:]
        groups: list[list[tuple[str, int, int]]] = []
        if body.strip():
            gpos = colon + 1
            for gtext in body.split(">"):
                members = []
                mpos = gpos
                for mtext in gtext.split("="):
                    toks = _tokens(mtext, mpos)
                    if len(toks) != 1:
                        col = toks[1][1] if toks else mpos + 1
                        raise ParseError("expected exactly one name between separators", lineno, col)
                    tok, col = toks[0]
                    if not _NAME_RE.fullmatch(tok):
                        raise ParseError(f"invalid name {tok!r}", lineno, col)
                    members.append((tok, lineno, col))
                    mpos += len(mtext) + 1
                groups.append(members)
                gpos += len(gtext) + 1
        raw[name] = groups
    if not header_seen:
        raise ParseError(f"missing header {INSTANCE_HEADER!r}", 1, 1)

    index = {name: i for i, name in enumerate(order)}
    tiers = []
    for name in order:
        seen: set[str] = set()
        groups = []
        for members in raw[name]:
            g = []
            for tok, lineno, col in members:
                if tok not in index:
                    raise ParseError(f"unknown vertex {tok!r}", lineno, col)
                if tok == name:
                    raise ParseError(f"{name!r} lists itself", lineno, col)
                if tok in seen:
                    raise ParseError(f"{tok!r} listed twice by {name!r}", lineno, col)
                seen.add(tok)
                g.append(index[tok])
            groups.append(tuple(sorted(g)))
        tiers.append(tuple(groups))
    for u, name in enumerate(order):
        for members in raw[name]:
            for tok, lineno, col in members:
                v = index[tok]
                if not any(u in g for g in tiers[v]):
                    raise ParseError(
                        f"asymmetric acceptability: {name!r} lists {tok!r} but {tok!r} does not list {name!r}",
                        lineno, col)
    return Instance(tuple(order), tuple(tiers))


def serialize_instance(inst: Instance) -> str:
    lines = [INSTANCE_HEADER]
    for u, name in enumerate(inst.names):
        groups = [" = ".join(inst.names[v] for v in g) for g in inst.tiers[u]]
        lines.append(f"{name}: {' > '.join(groups)}".rstrip())
    return "\n".join(lines) + "\n"


def parse_matching(text: str, inst: Instance) -> Matching:
    """Parse the ``match v1`` format: one ``u - v`` pair per line."""
    header_seen = False
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not header_seen:
            if stripped != MATCHING_HEADER:
                raise ParseError(f"expected header {MATCHING_HEADER!r}", lineno, 1)
            header_seen = True
            continue
        toks = stripped.split()
        if len(toks) != 3 or toks[1] != "-":
            raise ParseError("expected '<u> - <v>'", lineno, 1)
        for tok in (toks[0], toks[2]):
            if tok not in inst.index:
                raise ParseError(f"unknown vertex {tok!r}", lineno, line.index(tok) + 1)
        pairs.append((inst.index[toks[0]], inst.index[toks[2]]))
    if not header_seen:
        raise ParseError(f"missing header {MATCHING_HEADER!r}", 1, 1)
    try:
        return inst.matching(pairs)
    except (MatchingError, InstanceError) as exc:
        raise ParseError(str(exc), 1, 1) from None


def serialize_matching(inst: Instance, m: Matching) -> str:
    lines = [MATCHING_HEADER] + [f"{a} - {b}" for a, b in inst.named(m)]
    return "\n".join(lines) + "\n"


def random_instance(n: int, edge_probability: float | Fraction = Fraction(1, 2),
                    max_tiers: int = 3, seed: int = 0) -> Instance:
    """Erdos-Renyi graph with uniformly random (then normalized) tiers.

    Deterministic in ``seed``.  Vertices are named ``v1 .. vn``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if max_tiers < 1:
        raise ValueError("max_tiers must be positive")
    p = Fraction(edge_probability)
    if not 0 <= p <= 1:
        raise ValueError("edge_probability must lie in [0, 1]")
    rng = random.Random(seed)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u].append(v)
                adj[v].append(u)
    tiers = []
    for u in range(n):
        by_tier: dict[int, list[int]] = {}
        for v in adj[u]:
            by_tier.setdefault(rng.randint(1, max_tiers), []).append(v)
        tiers.append(tuple(tuple(sorted(by_tier[t])) for t in sorted(by_tier)))
    return Instance(tuple(f"v{i + 1}" for i in range(n)), tuple(tiers))
