import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copematch import kernels
from copematch.kernels import SplitMix64, stream_state, uniform_indices
from copematch.model import Matching, random_instance
from copematch.oracle import matching_space
from copematch.sampler import SamplerConfig, chain_step

BACKENDS = kernels.backends()


def test_splitmix_reference_vector():
    # published first outputs of SplitMix64 seeded with 0
    g = SplitMix64(0)
    assert [g.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_uniform_indices_match_scalar_stream():
    got = uniform_indices(9, 5, 50, 37)
    want = [((SplitMix64(stream_state(9, i)).next() >> 32) * 37) >> 32 for i in range(5, 55)]
    assert got.tolist() == want
    with pytest.raises(ValueError):
        uniform_indices(0, 0, 1, 0)


def _ranks(seed):
    inst = random_instance(6, 0.7, 3, seed=seed)
    return np.asarray(matching_space(inst).ranks)


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree_on_tallies(seed):
    r = _ranks(seed)
    outs = [tuple(np.asarray(x) for x in mod.tally(r, r)) for mod in BACKENDS.values()]
    signs = [np.asarray(mod.sign_matrix(r[:7], r)) for mod in BACKENDS.values()]
    for o in outs[1:]:
        assert all(np.array_equal(a, b) for a, b in zip(outs[0], o))
    for s in signs[1:]:
        assert np.array_equal(signs[0], s)


def test_tally_definition():
    r = _ranks(1)
    wins, ties, losses, msum = (np.asarray(x) for x in kernels.tally(r, r))
    d = np.sign(r[None, :, :] - r[:, None, :]).sum(axis=2)
    assert np.array_equal(wins, (d > 0).sum(1))
    assert np.array_equal(ties, (d == 0).sum(1))
    assert np.array_equal(losses, (d < 0).sum(1))
    assert np.array_equal(msum, d.sum(1))
    assert np.array_equal(np.asarray(kernels.sign_matrix(r, r)), np.sign(d))


def _edge_arrays(inst):
    e = np.asarray(inst.edges, dtype=np.int32).reshape(-1, 2)
    return np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 2**40), st.integers(1, 40))
def test_chain_backends_agree_with_stepwise_replay(inst_seed, seed, steps):
    inst = random_instance(6, 0.6, 3, seed=inst_seed)
    cfg = SamplerConfig(steps, seed)
    eu, ev = _edge_arrays(inst)
    outs = [np.asarray(mod.run_chains(eu, ev, inst.n, steps, cfg.lazy_threshold, seed, 3, 4))
            for mod in BACKENDS.values()]
    for o in outs[1:]:
        assert np.array_equal(outs[0], o)
    for j in range(4):
        rng = SplitMix64.for_sample(seed, 3 + j)
        m = Matching()
        for _ in range(steps):
            m = chain_step(inst, m, rng, cfg.laziness)
        assert outs[0][j].tolist() == m.partner_array(inst.n)


def test_compiled_backend_present():
    # the build ships the extension; the fallback is still exercised above
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_env_forces_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, COPEMATCH_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import copematch.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
