"""Pure-Python/numpy implementations of the hot kernels.

These define the reference semantics; ``_ckernels.pyx`` must agree with
them bit for bit (see tests/test_kernels.py).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# chunk of rows processed at once by the numpy tallies (bounds memory)
_CHUNK_CELLS = 1 << 22


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_state(seed: int, index: int) -> int:
    """Initial SplitMix64 state of the stream for sample ``index`` under ``seed``."""
    return mix64((seed & MASK64) + mix64(index + 1))


class SplitMix64:
    """SplitMix64 generator; one instance per sampling stream."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def for_sample(cls, seed: int, index: int) -> "SplitMix64":
        return cls(stream_state(seed, index))

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniform_indices(seed: int, first_index: int, count: int, bound: int) -> np.ndarray:
    """First draw of each stream ``first_index .. first_index+count-1``, mapped into ``[0, bound)``.

    Equals ``((SplitMix64.for_sample(seed, i).next() >> 32) * bound) >> 32``.
    """
    if not 0 < bound < (1 << 32):
        raise ValueError("bound must lie in [1, 2**32)")
    with np.errstate(over="ignore"):
        idx = np.arange(first_index + 1, first_index + count + 1, dtype=np.uint64)
        state = _mix64_array(np.uint64(seed & MASK64) + _mix64_array(idx))
        x = _mix64_array(state + np.uint64(GOLDEN))
        return ((x >> np.uint64(32)) * np.uint64(bound) >> np.uint64(32)).astype(np.int64)


def _signs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # delta[i, j] = sum_u sign(b[j,u] - a[i,u]); lower rank means preferred
    return np.sign(b[None, :, :] - a[:, None, :]).sum(axis=2)


def tally(a: np.ndarray, b: np.ndarray):
    """Per row M of ``a`` against all rows N of ``b``: wins, ties, losses, sum of margins."""
    a = np.ascontiguousarray(a, dtype=np.int32)
    b = np.ascontiguousarray(b, dtype=np.int32)
    na, nb = a.shape[0], b.shape[0]
    wins = np.zeros(na, dtype=np.int64)
    ties = np.zeros(na, dtype=np.int64)
    losses = np.zeros(na, dtype=np.int64)
    margin = np.zeros(na, dtype=np.int64)
    if na == 0 or nb == 0:
        return wins, ties, losses, margin
    width = max(1, a.shape[1])
    step = max(1, _CHUNK_CELLS // (nb * width))
    for lo in range(0, na, step):
        d = _signs(a[lo:lo + step], b)
        wins[lo:lo + step] = (d > 0).sum(axis=1)
        ties[lo:lo + step] = (d == 0).sum(axis=1)
        losses[lo:lo + step] = (d < 0).sum(axis=1)
        margin[lo:lo + step] = d.sum(axis=1)
    return wins, ties, losses, margin


def sign_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[i, j] = sign(delta(a_i, b_j))`` as int8."""
    a = np.ascontiguousarray(a, dtype=np.int32)
    b = np.ascontiguousarray(b, dtype=np.int32)
    out = np.zeros((a.shape[0], b.shape[0]), dtype=np.int8)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return out
    width = max(1, a.shape[1])
    step = max(1, _CHUNK_CELLS // (b.shape[0] * width))
    for lo in range(0, a.shape[0], step):
        out[lo:lo + step] = np.sign(_signs(a[lo:lo + step], b))
    return out


def run_chains(eu, ev, n: int, steps: int, lazy_threshold: int, seed: int,
               first_index: int, count: int) -> np.ndarray:
    """Run ``count`` independent lazy add/remove/slide chains from the empty matching.

    Chain ``r`` uses the stream for sample ``first_index + r``.  Each step
    draws x; the step is lazy iff ``x < lazy_threshold``, otherwise a second
    draw y picks edge ``((y >> 32) * |E|) >> 32``.  Returns partner arrays, ``-1`` = unmatched.
    """
    eu = [int(x) for x in eu]
    ev = [int(x) for x in ev]
    seed, first_index, steps, lazy_threshold = int(seed), int(first_index), int(steps), int(lazy_threshold)
    m = len(eu)
    out = np.full((count, n), -1, dtype=np.int32)
    if m == 0 or count == 0:
        return out
    for r in range(count):
        rng = SplitMix64.for_sample(seed, first_index + r)
        p = [-1] * n
        for _ in range(steps):
            if rng.next() < lazy_threshold:
                continue
            k = ((rng.next() >> 32) * m) >> 32
            u = eu[k]
            v = ev[k]
            pu = p[u]
            pv = p[v]
            if pu == v:
                p[u] = -1
                p[v] = -1
            elif pu == -1 and pv == -1:
                p[u] = v
                p[v] = u
            elif pu == -1:
                # v matched to pv, u free: slide (v, pv) -> (v, u)
                p[pv] = -1
                p[v] = u
                p[u] = v
            elif pv == -1:
                p[pu] = -1
                p[u] = v
                p[v] = u
        out[r, :] = p
    return out
