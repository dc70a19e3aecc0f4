"""Near-uniform sampling of matchings.

The Markov chain starts from the empty matching.  Each step is lazy with
probability ``laziness``; otherwise a uniformly random edge is drawn and
added, removed or slid into the current matching.  The chain is symmetric,
so the uniform distribution over matchings is stationary.

Sample ``i`` under seed ``s`` always uses the random stream ``(s, i)``, so
batches split across workers reproduce a serial run exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .kernels import SplitMix64
from .model import Instance, Matching
from .oracle import matching_space

__all__ = [
    "DEFAULT_DELTA",
    "ExactUniformSampler",
    "McmcSampler",
    "SamplerConfig",
    "apply_move",
    "chain_step",
    "default_steps",
    "partners_to_matchings",
    "sample_matching",
    "sample_matchings",
    "transition_matrix",
    "tv_diagnostic",
]

DEFAULT_DELTA = Fraction(1, 20)
STEP_CONSTANT = 10


def default_steps(inst: Instance, delta=DEFAULT_DELTA) -> int:
    """``ceil(10 * |E| * |V| * ln(1/delta))``, at least 1."""
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return max(1, math.ceil(STEP_CONSTANT * len(inst.edges) * inst.n * math.log(1 / delta)))


@dataclass(frozen=True)
class SamplerConfig:
    steps: int
    seed: int = 0
    laziness: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "laziness", Fraction(self.laziness))
        if self.steps < 1:
            raise ValueError("steps must be positive")
        if not 0 < self.laziness < 1:
            raise ValueError("laziness must lie in (0, 1)")

    @classmethod
    def default(cls, inst: Instance, seed: int = 0, delta=DEFAULT_DELTA) -> "SamplerConfig":
        return cls(default_steps(inst, delta), seed)

    @property
    def lazy_threshold(self) -> int:
        # a step is lazy iff the 64-bit draw falls below this
        return (self.laziness.numerator << 64) // self.laziness.denominator


def apply_move(inst: Instance, m: Matching, edge: tuple[int, int]) -> Matching:
    """Add, remove or slide along ``edge``; unchanged if both ends are matched elsewhere."""
    u, v = edge
    p = m.partner_array(inst.n)
    pu, pv = p[u], p[v]
    pairs = set(m.pairs)
    if pu == v:
        pairs.discard((min(u, v), max(u, v)))
    elif pu == -1 and pv == -1:
        pairs.add((min(u, v), max(u, v)))
    elif pu == -1 or pv == -1:
        x, y = (v, pv) if pu == -1 else (u, pu)
        pairs.discard((min(x, y), max(x, y)))
        pairs.add((min(u, v), max(u, v)))
    else:
        return m
    return Matching(tuple(sorted(pairs)))


def chain_step(inst: Instance, m: Matching, rng: SplitMix64,
               laziness: Fraction = Fraction(1, 2)) -> Matching:
    """One step of the chain, consuming draws exactly as the batch kernels do."""
    laziness = Fraction(laziness)
    if rng.next() < (laziness.numerator << 64) // laziness.denominator:
        return m
    edges = inst.edges
    if not edges:
        return m
    k = ((rng.next() >> 32) * len(edges)) >> 32
    return apply_move(inst, m, edges[k])


def partners_to_matchings(partners: np.ndarray) -> list[Matching]:
    out = []
    for row in partners:
        out.append(Matching(tuple((u, int(v)) for u, v in enumerate(row) if v > u)))
    return out


def _edge_arrays(inst: Instance):
    e = np.asarray(inst.edges, dtype=np.int32).reshape(-1, 2)
    return np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1])


class McmcSampler:
    """Batch sampler running one independent chain per sample."""

    name = "mcmc"

    def __init__(self, inst: Instance, cfg: SamplerConfig, jobs: int = 1):
        self.inst = inst
        self.cfg = cfg
        self.jobs = max(1, jobs)
        self._eu, self._ev = _edge_arrays(inst)

    def partners(self, count: int, first_index: int = 0) -> np.ndarray:
        """Partner arrays (``count`` x n, -1 = unmatched) of samples ``first_index ...``."""
        cfg = self.cfg

        def run(lo: int, hi: int) -> np.ndarray:
            return kernels.run_chains(self._eu, self._ev, self.inst.n, cfg.steps,
                                      cfg.lazy_threshold, cfg.seed, int(first_index + lo), int(hi - lo))

        if self.jobs == 1 or count < 2 * self.jobs:
            return run(0, count)
        bounds = np.linspace(0, count, self.jobs + 1).astype(int)
        with ThreadPoolExecutor(self.jobs) as pool:
            parts = list(pool.map(run, bounds[:-1], bounds[1:]))
        return np.concatenate(parts)

    def describe(self) -> dict:
        return {"backend": self.name, "steps": self.cfg.steps, "seed": self.cfg.seed,
                "laziness": str(self.cfg.laziness)}


class ExactUniformSampler:
    """Draws matchings exactly uniformly from the enumerated list."""

    name = "exact-uniform"

    def __init__(self, inst: Instance, seed: int = 0, budget: int | None = None):
        self.inst = inst
        self.seed = seed
        self.space = matching_space(inst, budget)
        part = np.full((self.space.mu, inst.n), -1, dtype=np.int32)
        for i, m in enumerate(self.space.matchings):
            for u, v in m.pairs:
                part[i, u] = v
                part[i, v] = u
        self.partner_table = part

    def indices(self, count: int, first_index: int = 0) -> np.ndarray:
        return kernels.uniform_indices(self.seed, first_index, count, self.space.mu)

    def partners(self, count: int, first_index: int = 0) -> np.ndarray:
        return self.partner_table[self.indices(count, first_index)]

    def describe(self) -> dict:
        return {"backend": self.name, "seed": self.seed}


def sample_matching(inst: Instance, cfg: SamplerConfig, index: int = 0) -> Matching:
    """The ``index``-th sample under ``cfg``: ``cfg.steps`` chain steps from the empty matching."""
    return partners_to_matchings(McmcSampler(inst, cfg).partners(1, index))[0]


def sample_matchings(inst: Instance, cfg: SamplerConfig, count: int,
                     first_index: int = 0, jobs: int = 1) -> list[Matching]:
    return partners_to_matchings(McmcSampler(inst, cfg, jobs).partners(count, first_index))


def _row_keys(partners: np.ndarray) -> list[bytes]:
    p = np.ascontiguousarray(partners, dtype=np.int32)
    return [row.tobytes() for row in p]


def empirical_counts(inst: Instance, partners: np.ndarray, budget: int | None = None) -> np.ndarray:
    """How often each enumerated matching occurs among the sampled partner arrays."""
    space = matching_space(inst, budget)
    ref = np.full((space.mu, inst.n), -1, dtype=np.int32)
    for i, m in enumerate(space.matchings):
        for u, v in m.pairs:
            ref[i, u] = v
            ref[i, v] = u
    lookup = {k: i for i, k in enumerate(_row_keys(ref))}
    counts = np.zeros(space.mu, dtype=np.int64)
    keys, freq = np.unique(np.ascontiguousarray(partners, dtype=np.int32), axis=0, return_counts=True)
    for key, c in zip(_row_keys(keys), freq):
        counts[lookup[key]] += int(c)
    return counts


def tv_diagnostic(inst: Instance, cfg: SamplerConfig, num_samples: int,
                  budget: int | None = None, jobs: int = 1) -> Fraction:
    """Empirical total-variation distance between ``num_samples`` chain samples and uniform."""
    if num_samples < 1:
        raise ValueError("num_samples must be positive")
    space = matching_space(inst, budget)
    counts = empirical_counts(inst, McmcSampler(inst, cfg, jobs).partners(num_samples), budget)
    mu = space.mu
    # (1/2) * sum |c/N - 1/mu| with a common denominator N*mu
    return Fraction(int(np.abs(counts * mu - num_samples).sum()), 2 * num_samples * mu)


def transition_matrix(inst: Instance, laziness=Fraction(1, 2),
                      budget: int | None = None) -> list[list[Fraction]]:
    """Exact one-step transition probabilities between enumerated matchings."""
    laziness = Fraction(laziness)
    space = matching_space(inst, budget)
    mu = space.mu
    edges = inst.edges
    P = [[Fraction(0)] * mu for _ in range(mu)]
    for i, m in enumerate(space.matchings):
        P[i][i] += laziness if edges else Fraction(1)
        if not edges:
            continue
        share = (1 - laziness) / len(edges)
        for e in edges:
            P[i][space.index[apply_move(inst, m, e)]] += share
    return P
