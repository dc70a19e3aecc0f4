"""Sampling tournament returning an almost weak Copeland winner.

Two independent samples of k matchings each are drawn; every member of one
sample meets every member of the other in a head-to-head election.  A tie
credits both sides, a win credits the winner.  The member with the highest
primed score ``wins' + ties'/2`` is returned.

Identical sampled matchings are grouped, so the k x k table is evaluated as
a (distinct x distinct) sign matrix weighted by multiplicities.  Counters are
still per sample member and exactly equal those of the naive loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from . import kernels
from .model import Instance, Matching
from .sampler import (DEFAULT_DELTA, ExactUniformSampler, McmcSampler, SamplerConfig,
                      default_steps, partners_to_matchings)

__all__ = [
    "FprasConfig",
    "TournamentReport",
    "counters_conserved",
    "rank_rows",
    "run_fpras",
    "sample_size",
    "half_k_bound_holds",
]

SAMPLE_CONSTANT = 32


def sample_size(n: int, epsilon) -> int:
    """``ceil(32 ln n / eps^2)``; 1 when n <= 1."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if n <= 1:
        return 1
    return math.ceil(SAMPLE_CONSTANT * math.log(n) / float(epsilon) ** 2)


@dataclass(frozen=True)
class FprasConfig:
    epsilon: Fraction
    seed: int = 0
    backend: Literal["mcmc", "exact-uniform"] = "mcmc"
    steps: int | None = None
    k_override: int | None = None
    laziness: Fraction = Fraction(1, 2)
    jobs: int = 1
    budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.backend not in ("mcmc", "exact-uniform"):
            raise ValueError(f"unknown sampler backend {self.backend!r}")
        if self.k_override is not None and self.k_override < 1:
            raise ValueError("k_override must be positive")

    def k(self, n: int) -> int:
        if n <= 1:
            return 1
        return self.k_override if self.k_override is not None else sample_size(n, self.epsilon)

    def sampler_config(self, inst: Instance) -> SamplerConfig:
        # chains target TV distance eps/4 (never looser than the standalone default)
        steps = self.steps
        if steps is None:
            steps = default_steps(inst, min(self.epsilon / 4, DEFAULT_DELTA))
        return SamplerConfig(steps, self.seed, self.laziness)


@dataclass(frozen=True)
class TournamentReport:
    k: int
    epsilon: Fraction
    sample0: tuple[Matching, ...]
    sample1: tuple[Matching, ...]
    wins0: tuple[int, ...]
    ties0: tuple[int, ...]
    wins1: tuple[int, ...]
    ties1: tuple[int, ...]
    winner: Matching
    winner_side: int
    winner_position: int
    winner_primed_score: Fraction
    sampler: dict = field(default_factory=dict)

    def primed_scores(self, side: int) -> list[Fraction]:
        w, t = (self.wins0, self.ties0) if side == 0 else (self.wins1, self.ties1)
        return [a + Fraction(b, 2) for a, b in zip(w, t)]

    def to_dict(self, inst: Instance, include_samples: bool = True) -> dict:
        def names(m):
            return [list(p) for p in inst.named(m)]

        out = {
            "k": self.k,
            "epsilon": str(self.epsilon),
            "sampler": self.sampler,
            "winner": names(self.winner),
            "winner_side": self.winner_side,
            "winner_position": self.winner_position,
            "winner_primed_score": str(self.winner_primed_score),
            "half_k_bound_ok": half_k_bound_holds(self),
            "conservation_ok": counters_conserved(self),
        }
        if include_samples:
            out["samples"] = [
                [{"matching": names(m), "wins": w, "ties": t}
                 for m, w, t in zip(ms, ws, ts)]
                for ms, ws, ts in ((self.sample0, self.wins0, self.ties0),
                                   (self.sample1, self.wins1, self.ties1))]
        return out


def half_k_bound_holds(report: TournamentReport) -> bool:
    """The returned member's primed score is at least k/2."""
    return report.winner_primed_score >= Fraction(report.k, 2)


def counters_conserved(report: TournamentReport) -> bool:
    """Each of the k^2 elections hands out exactly one point in total."""
    total = sum(report.primed_scores(0)) + sum(report.primed_scores(1))
    return total == report.k ** 2


def rank_rows(inst: Instance, partners: np.ndarray) -> np.ndarray:
    """Partner-rank matrix from partner arrays (-1 maps to the self rank)."""
    n = inst.n
    table = np.zeros((n, n + 1), dtype=np.int32)
    table[:, 0] = inst.self_rank
    for (u, v), r in inst.rank.items():
        table[u, v + 1] = r
    if n == 0:
        return np.zeros((len(partners), 0), dtype=np.int32)
    return table[np.arange(n)[None, :], np.asarray(partners) + 1]


def run_fpras(inst: Instance, cfg: FprasConfig) -> TournamentReport:
    k = cfg.k(inst.n)
    if cfg.backend == "exact-uniform":
        sampler = ExactUniformSampler(inst, cfg.seed, cfg.budget)
    else:
        sampler = McmcSampler(inst, cfg.sampler_config(inst), cfg.jobs)
    parts = sampler.partners(2 * k, 0)
    p0, p1 = parts[:k], parts[k:]

    u0, inv0, c0 = np.unique(p0, axis=0, return_inverse=True, return_counts=True)
    u1, inv1, c1 = np.unique(p1, axis=0, return_inverse=True, return_counts=True)
    inv0 = inv0.reshape(-1)
    inv1 = inv1.reshape(-1)
    sign = kernels.sign_matrix(rank_rows(inst, u0), rank_rows(inst, u1)).astype(np.int64)
    win0 = (sign > 0).astype(np.int64) @ c1
    tie0 = (sign == 0).astype(np.int64) @ c1
    win1 = c0 @ (sign < 0).astype(np.int64)
    tie1 = c0 @ (sign == 0).astype(np.int64)

    wins0, ties0 = win0[inv0], tie0[inv0]
    wins1, ties1 = win1[inv1], tie1[inv1]
    doubled = np.concatenate([2 * wins0 + ties0, 2 * wins1 + ties1])
    best = int(np.argmax(doubled))  # first maximizer: S0 before S1, then draw order
    side, pos = divmod(best, k)
    best_score = Fraction(int(doubled[best]), 2)

    m0 = partners_to_matchings(u0)
    m1 = partners_to_matchings(u1)
    sample0 = tuple(m0[i] for i in inv0)
    sample1 = tuple(m1[i] for i in inv1)
    report = TournamentReport(
        k=k, epsilon=cfg.epsilon, sample0=sample0, sample1=sample1,
        wins0=tuple(int(x) for x in wins0), ties0=tuple(int(x) for x in ties0),
        wins1=tuple(int(x) for x in wins1), ties1=tuple(int(x) for x in ties1),
        winner=(sample0 if side == 0 else sample1)[pos], winner_side=side,
        winner_position=pos, winner_primed_score=best_score, sampler=sampler.describe())
    if not half_k_bound_holds(report):
        raise AssertionError(f"primed score {best_score} below k/2 = {k}/2")
    if int(doubled.sum()) != 2 * k * k:
        raise AssertionError("tournament counters do not sum to k^2")
    return report
