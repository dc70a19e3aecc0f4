"""Head-to-head comparisons between matchings and the blocking-pair check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .model import Instance, Matching

__all__ = ["ElectionResult", "compare", "delta", "is_stable", "vote"]

Outcome = Literal["win", "tie", "loss"]


def _option(inst: Instance, u: int, x) -> int | None:
    # normalize a partner designation to an index or None (self-option)
    if x is None:
        return None
    if isinstance(x, str):
        x = inst.vertex(x)
    if x == -1 or x == u:
        return None
    return x


def vote(inst: Instance, u, x, y) -> int:
    """+1 if u strictly prefers option x to y, -1 if y to x, 0 if indifferent.

    Options are neighbors (index or name) or the self-option, written as
    ``None``, ``-1`` or u itself.  Raises if an option is not acceptable to u.
    """
    u = inst.vertex(u)
    rx = inst.rank_of(u, _option(inst, u, x))
    ry = inst.rank_of(u, _option(inst, u, y))
    return (rx < ry) - (rx > ry)


@dataclass(frozen=True)
class ElectionResult:
    votes_for: int
    votes_against: int
    delta: int
    outcome: Outcome

    def __post_init__(self):
        assert self.delta == self.votes_for - self.votes_against


def compare(inst: Instance, m: Matching, n: Matching) -> ElectionResult:
    """Election between m and n; ``delta`` is m's margin."""
    inst.check_matching(m)
    inst.check_matching(n)
    rm = inst.partner_ranks(m)
    rn = inst.partner_ranks(n)
    pro = sum(1 for a, b in zip(rm, rn) if a < b)
    con = sum(1 for a, b in zip(rm, rn) if a > b)
    d = pro - con
    return ElectionResult(pro, con, d, "win" if d > 0 else ("loss" if d < 0 else "tie"))


def delta(inst: Instance, m: Matching, n: Matching) -> int:
    return compare(inst, m, n).delta


def is_stable(inst: Instance, m: Matching) -> tuple[bool, tuple[int, int] | None]:
    """Whether m has no strictly blocking edge; otherwise the least such edge."""
    inst.check_matching(m)
    r = inst.partner_ranks(m)
    for u, v in inst.edges:
        if (u, v) in m:
            continue
        if inst.rank[(u, v)] < r[u] and inst.rank[(v, u)] < r[v]:
            return False, (u, v)
    return True, None
