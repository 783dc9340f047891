"""Kernel dispatch: compiled extension when available, numpy/Python otherwise.

Set MOTZETA_PURE_PYTHON=1 to force the reference implementations.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("MOTZETA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

system_histogram = _impl.system_histogram
howe_cover_count = _impl.howe_cover_count
coprime_height_counts = _impl.coprime_height_counts

_INT64_SAFE = 1 << 62


def fourier_accumulate(phi, xdig, ydig, bil, add_tab, mul_tab, trace, p):
    """Character-sum accumulation; exact for arbitrarily large integer tables."""
    phi = np.asarray(phi, dtype=object)
    bound = int(sum(abs(int(v)) for v in phi.ravel())) if phi.size else 0
    if BACKEND == "cython" and bound < _INT64_SAFE:
        out = _impl.fourier_accumulate(phi.astype(np.int64), xdig, ydig, bil,
                                       add_tab, mul_tab, trace, p)
        return out.astype(object)
    return _pykernels.fourier_accumulate(phi, xdig, ydig, bil, add_tab, mul_tab, trace, p)
