"""Weight functions on the self-loop augmented graph and their optimization.

Two weight functions live here:

* ``wt*`` built from the uniform marginals: the weight of an augmented
  matching equals its average margin against all matchings (wt-score).
* the popularity weights of a fixed matching M: the weight of an augmented
  matching N equals Δ(N, M), so M is popular iff the optimum is 0.

Maximizing over perfect matchings of the augmented graph is solved as an
ordinary maximum-weight matching on G with shifted edge weights
``w(u,v) - w(u,u) - w(v,v)`` plus the constant ``sum_u w(u,u)``.  All values
are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import networkx as nx
import numpy as np

from .election import vote
from .model import Instance, Matching
from .oracle import UniformMarginals, enumerate_matchings, exact_marginals
from .sampler import DEFAULT_DELTA, ExactUniformSampler, McmcSampler, SamplerConfig

__all__ = [
    "DualCertificate",
    "DualReport",
    "EdgeWeights",
    "build_popularity_weights",
    "build_wt_star",
    "default_apx_samples",
    "estimate_marginals",
    "is_popular_via_solver",
    "max_weight_perfect_matching",
    "verify_dual",
    "weighted_copeland_apx",
    "weighted_copeland_exact",
    "wt_score",
]

Provenance = Literal["wt-star-exact", "wt-star-estimated", "popularity-wt"]
Solver = Literal["blossom", "exhaustive"]


@dataclass(frozen=True)
class EdgeWeights:
    edge_weight: dict[tuple[int, int], Fraction]
    loop_weight: dict[int, Fraction]
    provenance: Provenance

    def edge(self, u: int, v: int) -> Fraction:
        return self.edge_weight[(min(u, v), max(u, v))]

    def weight_of(self, m: Matching, n: int) -> Fraction:
        """Weight of the augmented matching (edges of m plus loops at free vertices)."""
        covered = m.vertices()
        total = sum((self.edge_weight[p] for p in m.pairs), Fraction(0))
        return total + sum((self.loop_weight[u] for u in range(n) if u not in covered), Fraction(0))

    def check_complete(self, inst: Instance) -> None:
        missing = [e for e in inst.edges if e not in self.edge_weight]
        missing += [(u, u) for u in range(inst.n) if u not in self.loop_weight]
        if missing:
            raise ValueError(f"weights missing for {len(missing)} edges/loops, e.g. {missing[0]}")

    def to_dict(self, inst: Instance) -> dict:
        nm = inst.names
        return {
            "provenance": self.provenance,
            "edges": [{"u": nm[u], "v": nm[v], "weight": str(w)}
                      for (u, v), w in sorted(self.edge_weight.items())],
            "loops": {nm[u]: str(w) for u, w in sorted(self.loop_weight.items())},
        }


def build_wt_star(inst: Instance, q: UniformMarginals) -> EdgeWeights:
    """Weights whose augmented-matching total is the margin against the mixture q."""
    try:
        qe = {e: Fraction(q.edge_coord[e]) for e in inst.edges}
        ql = [Fraction(q.loop_coord[u]) for u in range(inst.n)]
    except KeyError as exc:
        raise ValueError(f"marginal missing for {exc.args[0]!r}") from None

    def side(u: int, v: int) -> Fraction:
        # mass of u's options worse than v (self included) minus mass of better ones
        r = inst.rank[(u, v)]
        worse = ql[u]
        better = Fraction(0)
        for x in inst.neighbors[u]:
            rx = inst.rank[(u, x)]
            if rx > r:
                worse += qe[(min(u, x), max(u, x))]
            elif rx < r:
                better += qe[(min(u, x), max(u, x))]
        return worse - better

    edge = {(u, v): side(u, v) + side(v, u) for u, v in inst.edges}
    loops = {u: ql[u] - 1 for u in range(inst.n)}
    prov = "wt-star-exact" if q.mode == "exact" else "wt-star-estimated"
    return EdgeWeights(edge, loops, prov)


def build_popularity_weights(inst: Instance, m: Matching) -> EdgeWeights:
    """``wt(N~) = Δ(N, m)`` for every matching N."""
    inst.check_matching(m)
    p = m.partner_array(inst.n)
    edge = {(u, v): Fraction(vote(inst, u, v, p[u]) + vote(inst, v, u, p[v]))
            for u, v in inst.edges}
    loops = {u: Fraction(0 if p[u] == -1 else -1) for u in range(inst.n)}
    return EdgeWeights(edge, loops, "popularity-wt")


def _shifted(inst: Instance, w: EdgeWeights):
    const = sum(w.loop_weight.values(), Fraction(0))
    shifted = [w.edge_weight[(u, v)] - w.loop_weight[u] - w.loop_weight[v] for u, v in inst.edges]
    return shifted, const


def _solve_blossom(inst: Instance, w: EdgeWeights) -> Matching:
    shifted, _ = _shifted(inst, w)
    m = len(shifted)
    if m == 0:
        return Matching()
    scale = math.lcm(*(x.denominator for x in shifted))
    big_k = inst.n + 1
    g = nx.Graph()
    for idx, ((u, v), x) in enumerate(zip(inst.edges, shifted)):
        ints = int(x * scale)
        if ints <= 0:
            continue
        # weight first, then fewer edges, then the lexicographically least edge list
        g.add_edge(u, v, weight=(big_k * ints - 1) * (1 << m) + (1 << (m - 1 - idx)))
    mate = nx.max_weight_matching(g, maxcardinality=False, weight="weight")
    return Matching.of(mate)


def _solve_exhaustive(inst: Instance, w: EdgeWeights, budget: int | None) -> Matching:
    best_key = None
    best = Matching()
    for cand in enumerate_matchings(inst, budget):
        key = (-w.weight_of(cand, inst.n), len(cand), cand.pairs)
        if best_key is None or key < best_key:
            best_key, best = key, cand
    return best


def max_weight_perfect_matching(inst: Instance, w: EdgeWeights, solver: Solver = "blossom",
                                budget: int | None = None) -> tuple[Matching, Fraction]:
    """Matching maximizing the augmented weight, and that optimum.

    Co-optimal solutions are resolved toward fewer edges, then the
    lexicographically least edge list; both solvers agree on the choice.
    """
    w.check_complete(inst)
    if solver == "blossom":
        best = _solve_blossom(inst, w)
    elif solver == "exhaustive":
        best = _solve_exhaustive(inst, w, budget)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return best, w.weight_of(best, inst.n)


def wt_score(inst: Instance, m: Matching, q: UniformMarginals | None = None) -> Fraction:
    """Average margin of m against all matchings, evaluated through wt*."""
    inst.check_matching(m)
    q = exact_marginals(inst) if q is None else q
    if q.mode != "exact":
        raise ValueError("wt-score needs exact marginals")
    return build_wt_star(inst, q).weight_of(m, inst.n)


def weighted_copeland_exact(inst: Instance, solver: Solver = "blossom",
                            budget: int | None = None) -> tuple[Matching, Fraction]:
    """A matching with the largest wt-score, and that score."""
    q = exact_marginals(inst, budget)
    return max_weight_perfect_matching(inst, build_wt_star(inst, q), solver, budget)


def default_apx_samples(inst: Instance, epsilon) -> int:
    """``ceil(64 n^2 ln(4 (|E|+|V|) n) / eps^2)``, at least 1."""
    n = inst.n
    if n == 0:
        return 1
    eps = float(Fraction(epsilon))
    return max(1, math.ceil(64 * n * n * math.log(4 * (len(inst.edges) + n) * n) / eps ** 2))


_CHUNK = 1 << 16


def estimate_marginals(inst: Instance, sampler, num_samples: int) -> UniformMarginals:
    """Sample frequencies of edge use and of staying unmatched."""
    if num_samples < 1:
        raise ValueError("num_samples must be positive")
    edges = inst.edges
    eu = np.array([u for u, _ in edges], dtype=np.int64)
    ev = np.array([v for _, v in edges], dtype=np.int64)
    used = np.zeros(len(edges), dtype=np.int64)
    free = np.zeros(inst.n, dtype=np.int64)
    if isinstance(sampler, ExactUniformSampler):
        hits = np.bincount(sampler.indices(num_samples), minlength=sampler.space.mu)
        table = sampler.partner_table
        used = hits @ (table[:, eu] == ev[None, :]).astype(np.int64) if len(edges) else used
        free = hits @ (table == -1).astype(np.int64)
    else:
        for lo in range(0, num_samples, _CHUNK):
            p = sampler.partners(min(_CHUNK, num_samples - lo), lo)
            if len(edges):
                used += (p[:, eu] == ev[None, :]).sum(axis=0)
            free += (p == -1).sum(axis=0)
    return UniformMarginals({e: Fraction(int(c), num_samples) for e, c in zip(edges, used)},
                            {u: Fraction(int(c), num_samples) for u, c in enumerate(free)},
                            "estimated", None, num_samples)


def weighted_copeland_apx(inst: Instance, epsilon, sampler=None, num_samples: int | None = None,
                          seed: int = 0, solver: Solver = "blossom") -> tuple[Matching, EdgeWeights]:
    """Max-weight solution under wt* built from estimated marginals.

    ``sampler`` defaults to the Markov chain at its default step count.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if sampler is None:
        sampler = McmcSampler(inst, SamplerConfig.default(inst, seed, DEFAULT_DELTA))
    if num_samples is None:
        num_samples = default_apx_samples(inst, epsilon)
    w = build_wt_star(inst, estimate_marginals(inst, sampler, num_samples))
    best, _ = max_weight_perfect_matching(inst, w, solver)
    return best, w


@dataclass(frozen=True)
class DualCertificate:
    """Vertex potentials ``y``; odd-set variables are implicitly zero."""

    y: dict[int, int]

    @classmethod
    def from_names(cls, inst: Instance, y: dict[str, int]) -> "DualCertificate":
        return cls({inst.vertex(k): int(v) for k, v in y.items()})

    def to_dict(self, inst: Instance) -> dict:
        return {inst.names[u]: v for u, v in sorted(self.y.items())}


@dataclass(frozen=True)
class DualReport:
    ok: bool
    objective: int
    violations: list[str] = field(default_factory=list)
    edge_slack: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    loop_slack: dict[int, Fraction] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def verify_dual(inst: Instance, m: Matching, cert: DualCertificate) -> DualReport:
    """Check y against the popularity weights of m; success certifies m popular."""
    missing = [inst.names[u] for u in range(inst.n) if u not in cert.y]
    if missing:
        raise ValueError(f"certificate has no value for {', '.join(missing[:5])}")
    w = build_popularity_weights(inst, m)
    y = cert.y
    violations = []
    edge_slack = {}
    for (u, v), wt in w.edge_weight.items():
        s = y[u] + y[v] - wt
        edge_slack[(u, v)] = s
        if s < 0:
            violations.append(f"edge {inst.names[u]}-{inst.names[v]}: {y[u]} + {y[v]} < {wt}")
    loop_slack = {}
    for u, wt in w.loop_weight.items():
        s = y[u] - wt
        loop_slack[u] = s
        if s < 0:
            violations.append(f"loop {inst.names[u]}: {y[u]} < {wt}")
    objective = sum(y[u] for u in range(inst.n))
    if objective != 0:
        violations.append(f"objective {objective} != 0")
    return DualReport(not violations, objective, violations, edge_slack, loop_slack)


def is_popular_via_solver(inst: Instance, m: Matching, solver: Solver = "blossom",
                          budget: int | None = None) -> tuple[bool, Matching | None, int]:
    """(popular, witness beating m or None, unpopularity margin of m)."""
    best, opt = max_weight_perfect_matching(inst, build_popularity_weights(inst, m), solver, budget)
    margin = int(opt)
    return margin == 0, (best if margin > 0 else None), margin
