"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs on the same inputs under every importable backend; the
outputs are compared for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from copematch.kernels import backends
from copematch.model import random_instance
from copematch.oracle import matching_space
from copematch.sampler import SamplerConfig, default_steps


def _time(fn, repeat: int):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    inst = random_instance(8, 0.6, 3, seed=11)
    space = matching_space(inst)
    ranks = np.asarray(space.ranks)
    eu = np.array([u for u, _ in inst.edges], dtype=np.int32)
    ev = np.array([v for _, v in inst.edges], dtype=np.int32)
    cfg = SamplerConfig(default_steps(inst), seed=1)
    chains = 500

    cases = {
        f"tally {space.mu}x{space.mu}": lambda k: k.tally(ranks, ranks),
        f"sign_matrix {space.mu}x{space.mu}": lambda k: k.sign_matrix(ranks, ranks),
        f"run_chains {chains}x{cfg.steps} steps": lambda k: k.run_chains(
            eu, ev, inst.n, cfg.steps, cfg.lazy_threshold, cfg.seed, 0, chains),
    }
    mods = backends()
    print(f"instance: n={inst.n} |E|={len(inst.edges)} mu={space.mu}; backends: {', '.join(mods)}")
    for label, fn in cases.items():
        times = {}
        outs = {}
        for name, mod in mods.items():
            times[name], outs[name] = _time(lambda: fn(mod), args.repeat)
        agree = all(_same(outs["python"], o) for o in outs.values())
        line = "  ".join(f"{name} {t * 1e3:9.2f} ms" for name, t in times.items())
        if "cython" in times:
            line += f"  speedup x{times['python'] / times['cython']:.1f}"
        print(f"{label:32s} {line}  outputs {'equal' if agree else 'DIFFER'}")


if __name__ == "__main__":
    main()
