from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from motzeta import _pykernels, kernels
from motzeta.fields import gf

compiled = pytest.importorskip("motzeta._kernels", reason="compiled kernels not built")


def test_howe_counts_agree():
    for sizes in ([1, 2], [2, 2, 1], [3, 1, 1]):
        for L in range(max(sizes), sum(sizes) + 1):
            assert compiled.howe_cover_count(sizes, L) == _pykernels.howe_cover_count(sizes, L)


def test_height_counts_agree():
    for p, d in ((2, 6), (3, 3)):
        assert list(compiled.coprime_height_counts(p, d)) == list(_pykernels.coprime_height_counts(p, d))


def test_histograms_agree():
    F = gf(7)
    exps = np.array([[2, 0], [0, 1], [1, 1]], dtype=np.int64)
    coefs = np.array([1, 6, 3], dtype=np.int64)
    owner = np.array([0, 0, 1], dtype=np.int64)
    kinds = np.array([0, 2], dtype=np.int64)
    a = compiled.system_histogram(F.add_table, F.mul_table, 7, 2, exps, coefs, owner, kinds)
    b = _pykernels.system_histogram(F.add_table, F.mul_table, 7, 2, exps, coefs, owner, kinds)
    assert list(a) == list(b)


def test_pure_python_switch():
    env = dict(os.environ, MOTZETA_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from motzeta import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND == "cython"
