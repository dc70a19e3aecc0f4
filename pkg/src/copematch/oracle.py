"""Exhaustive enumeration of matchings and exact quantities over all of them.

Everything here is brute force and exact: counts are integers, scores and
marginals are :class:`fractions.Fraction`.  A matching-count budget guards
against accidental use on instances that cannot be enumerated.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal

import numpy as np

from . import kernels
from .model import Instance, Matching

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "MatchingSpace",
    "ScoreRecord",
    "UniformMarginals",
    "copeland_winner",
    "copeland_winners",
    "count_matchings",
    "enumerate_matchings",
    "exact_marginals",
    "is_condorcet",
    "is_pareto_optimal",
    "is_popular",
    "is_semi_popular",
    "margins_against_all",
    "matching_space",
    "score_table",
    "unpopularity_margin",
    "weak_copeland_winners",
    "wt_scores",
]

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "COPEMATCH_BUDGET"

HALF = Fraction(1, 2)


class BudgetExceeded(RuntimeError):
    """The instance has more matchings than the enumeration budget allows."""


def resolve_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def enumerate_matchings(inst: Instance, budget: int | None = None) -> Iterator[Matching]:
    """Yield every matching once, in lexicographic order of sorted edge lists.

    Preorder recursion over the sorted edge list: the current set is emitted,
    then each later compatible edge is added in turn.  The empty matching
    comes first.
    """
    limit = resolve_budget(budget)
    edges = inst.edges
    m = len(edges)
    used = [False] * inst.n
    chosen: list[tuple[int, int]] = []
    count = 0

    def rec(start: int):
        nonlocal count
        count += 1
        if count > limit:
            raise BudgetExceeded(f"more than {limit} matchings (raise the budget or set {BUDGET_ENV})")
        yield Matching(tuple(chosen))
        for i in range(start, m):
            u, v = edges[i]
            if used[u] or used[v]:
                continue
            used[u] = used[v] = True
            chosen.append((u, v))
            yield from rec(i + 1)
            chosen.pop()
            used[u] = used[v] = False

    yield from rec(0)


@dataclass(frozen=True, eq=False)
class MatchingSpace:
    """All matchings of an instance with their partner-rank matrix.

    ``ranks[i, u]`` is the rank of u's partner in the i-th matching (the
    self-option counts as rank ``T_u + 1``).
    """

    instance: Instance
    matchings: tuple[Matching, ...]
    ranks: np.ndarray
    index: dict[Matching, int] = field(repr=False)

    @property
    def mu(self) -> int:
        return len(self.matchings)

    def position(self, m: Matching) -> int:
        try:
            return self.index[m]
        except KeyError:
            raise ValueError("not a matching of this instance") from None


@lru_cache(maxsize=16)
def _space(inst: Instance, limit: int) -> MatchingSpace:
    ms = tuple(enumerate_matchings(inst, limit))
    ranks = np.empty((len(ms), inst.n), dtype=np.int32)
    ranks[:] = inst.self_rank
    for i, m in enumerate(ms):
        for u, v in m.pairs:
            ranks[i, u] = inst.rank[(u, v)]
            ranks[i, v] = inst.rank[(v, u)]
    ranks.setflags(write=False)
    return MatchingSpace(inst, ms, ranks, {m: i for i, m in enumerate(ms)})


def matching_space(inst: Instance, budget: int | None = None) -> MatchingSpace:
    return _space(inst, resolve_budget(budget))


def count_matchings(inst: Instance, budget: int | None = None) -> int:
    return sum(1 for _ in enumerate_matchings(inst, budget))


@dataclass(frozen=True)
class ScoreRecord:
    """Outcome counts of one matching against all matchings (itself included)."""

    wins: int
    ties: int
    losses: int
    margin_sum: int = 0

    @property
    def mu(self) -> int:
        return self.wins + self.ties + self.losses

    @property
    def score(self) -> Fraction:
        return self.wins + Fraction(self.ties, 2)

    def alpha_score(self, alpha) -> Fraction:
        alpha = Fraction(alpha)
        if not 0 <= alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        return self.wins + alpha * self.ties

    @property
    def wt_score(self) -> Fraction:
        return Fraction(self.margin_sum, self.mu)


def _tally_rows(ranks: np.ndarray, jobs: int):
    mu = ranks.shape[0]
    if jobs <= 1 or mu < 2 * jobs:
        return kernels.tally(ranks, ranks)
    bounds = np.linspace(0, mu, jobs + 1).astype(int)
    with ThreadPoolExecutor(jobs) as pool:
        parts = list(pool.map(lambda lo_hi: kernels.tally(ranks[lo_hi[0]:lo_hi[1]], ranks),
                              zip(bounds[:-1], bounds[1:])))
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(4))


def score_table(inst: Instance, budget: int | None = None, jobs: int = 1) -> list[ScoreRecord]:
    """One record per matching, aligned with :func:`matching_space` order."""
    space = matching_space(inst, budget)
    w, t, l, s = _tally_rows(space.ranks, jobs)
    return [ScoreRecord(int(a), int(b), int(c), int(d)) for a, b, c, d in zip(w, t, l, s)]


def copeland_winners(inst: Instance, alpha=HALF, budget: int | None = None) -> list[Matching]:
    """All maximizers of the alpha-weighted Copeland score, in enumeration order."""
    space = matching_space(inst, budget)
    scores = [r.alpha_score(alpha) for r in score_table(inst, budget)]
    best = max(scores)
    return [m for m, s in zip(space.matchings, scores) if s == best]


def copeland_winner(inst: Instance, alpha=HALF, budget: int | None = None) -> Matching:
    return copeland_winners(inst, alpha, budget)[0]


def weak_copeland_winners(inst: Instance, budget: int | None = None) -> list[Matching]:
    space = matching_space(inst, budget)
    mu = space.mu
    return [m for m, r in zip(space.matchings, score_table(inst, budget)) if 2 * r.score >= mu]


def margins_against_all(inst: Instance, m: Matching, budget: int | None = None) -> np.ndarray:
    """``out[i] = Δ(m, N_i)`` for every enumerated matching ``N_i``."""
    inst.check_matching(m)
    space = matching_space(inst, budget)
    r = np.asarray(inst.partner_ranks(m), dtype=np.int32)
    return np.sign(space.ranks - r[None, :]).sum(axis=1)


def is_popular(inst: Instance, m: Matching, budget: int | None = None) -> bool:
    return bool((margins_against_all(inst, m, budget) >= 0).all())


def is_semi_popular(inst: Instance, m: Matching, budget: int | None = None) -> bool:
    d = margins_against_all(inst, m, budget)
    return 2 * int((d >= 0).sum()) >= len(d)


def is_condorcet(inst: Instance, m: Matching, budget: int | None = None) -> bool:
    # m ties with itself and must beat everything else
    d = margins_against_all(inst, m, budget)
    return int((d > 0).sum()) == len(d) - 1


def unpopularity_margin(inst: Instance, m: Matching, budget: int | None = None) -> int:
    return int(-margins_against_all(inst, m, budget).min())


def is_pareto_optimal(inst: Instance, m: Matching, budget: int | None = None) -> bool:
    inst.check_matching(m)
    space = matching_space(inst, budget)
    r = np.asarray(inst.partner_ranks(m), dtype=np.int32)
    weakly = (space.ranks <= r[None, :]).all(axis=1)
    strictly = (space.ranks < r[None, :]).any(axis=1)
    return not bool((weakly & strictly).any())


def wt_scores(inst: Instance, budget: int | None = None) -> list[Fraction]:
    """Average margin against all matchings, computed directly from the table."""
    return [r.wt_score for r in score_table(inst, budget)]


@dataclass(frozen=True)
class UniformMarginals:
    """Coordinates of the uniform mixture over all matchings.

    ``edge_coord[(u, v)]`` (``u < v``) is the fraction of matchings using the
    edge, ``loop_coord[u]`` the fraction leaving u unmatched.  In estimated
    mode these are sample frequencies and ``mu`` is None.
    """

    edge_coord: dict[tuple[int, int], Fraction]
    loop_coord: dict[int, Fraction]
    mode: Literal["exact", "estimated"] = "exact"
    mu: int | None = None
    samples: int | None = None

    def vertex_total(self, u: int) -> Fraction:
        return self.loop_coord[u] + sum(
            (q for (a, b), q in self.edge_coord.items() if u in (a, b)), Fraction(0))

    def edge(self, u: int, v: int) -> Fraction:
        return self.edge_coord[(min(u, v), max(u, v))]


def exact_marginals(inst: Instance, budget: int | None = None) -> UniformMarginals:
    space = matching_space(inst, budget)
    mu = space.mu
    used = {e: 0 for e in inst.edges}
    free = [mu] * inst.n
    for m in space.matchings:
        for u, v in m.pairs:
            used[(u, v)] += 1
            free[u] -= 1
            free[v] -= 1
    return UniformMarginals({e: Fraction(c, mu) for e, c in used.items()},
                            {u: Fraction(c, mu) for u, c in enumerate(free)},
                            "exact", mu)
