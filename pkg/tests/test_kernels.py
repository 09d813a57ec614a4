import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from mmcast import _kernels_py, kernels

compiled = pytest.importorskip("mmcast._kernels") if kernels.BACKEND == "cython" else None


def _tables(codebook):
    t = codebook.table
    return t.boresight, t.theta3, t.half_ml, t.g0, t.gsl


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    out = subprocess.run([sys.executable, "-c", "import mmcast.kernels as k; print(k.BACKEND)"],
                         env={**os.environ, "MMCAST_PURE_PYTHON": "1"}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_fallback_hand_case(codebook, los):
    base = np.array([-100.0])
    dirs = np.array([0.0])
    rates = _kernels_py.beam_min_rates(base, dirs, *_tables(codebook), los.noise_dbm, los.eta_w_hz)
    g0 = codebook.table.g0[0]
    expect = los.eta_w_hz * np.log2(1 + 10 ** ((-100.0 + g0 - los.noise_dbm) / 10))
    assert rates[0] == pytest.approx(expect, rel=1e-14)
    assert rates.argmax() == 0


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
@settings(max_examples=200, deadline=None)
@given(hnp.arrays(np.float64, st.integers(1, 30), elements=st.floats(-150, -40)),
       st.integers(0, 2**32 - 1))
def test_backends_bit_identical(codebook, los, base, seed):
    dirs = np.random.default_rng(seed).uniform(-10, 370, size=base.shape)
    a = compiled.beam_min_rates(base, dirs, *_tables(codebook), los.noise_dbm, los.eta_w_hz)
    b = _kernels_py.beam_min_rates(base, dirs, *_tables(codebook), los.noise_dbm, los.eta_w_hz)
    assert a.tobytes() == b.tobytes()


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
def test_backends_agree_on_exact_lobe_edges(codebook, los):
    t = codebook.table
    dirs = np.concatenate([t.boresight + t.half_ml, t.boresight - t.half_ml, t.boresight + t.theta3 / 2])
    base = np.full(dirs.shape, -90.0)
    a = compiled.beam_min_rates(base, dirs, *_tables(codebook), los.noise_dbm, los.eta_w_hz)
    b = _kernels_py.beam_min_rates(base, dirs, *_tables(codebook), los.noise_dbm, los.eta_w_hz)
    assert a.tobytes() == b.tobytes()
