"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled extension (``_ckernels``, built from Cython) is used when it
imports; otherwise the numpy/pure-Python versions in ``_pykernels`` are used.
Set ``COPEMATCH_PURE_PYTHON=1`` to force the fallback.  Both backends
return identical results for identical inputs.
"""

from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import SplitMix64, mix64, stream_state, uniform_indices  # noqa: F401

BACKEND = "python"
_impl = _pykernels

if os.environ.get("COPEMATCH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        pass

tally = _impl.tally
sign_matrix = _impl.sign_matrix
run_chains = _impl.run_chains


def backends() -> dict:
    """Every importable backend module, keyed by name (used by tests and benchmarks)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
