import os
import subprocess
import sys

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_state
from thermolab import BACKEND
from thermolab._kernels import gap_ratios, gap_ratios_numpy, site_states, site_states_numpy


def test_backend_default():
    assert BACKEND in {"numba", "numpy"}


def test_numpy_fallback_selected_by_env():
    env = dict(os.environ, THERMOLAB_DISABLE_NUMBA="1")
    code = "import thermolab, thermolab._kernels as k; print(thermolab.BACKEND, k.site_states is k.site_states_numpy)"
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.split() == ["numpy", "True"]


@given(st.integers(0, 2**32 - 1), st.integers(1, 7), st.integers(1, 3))
def test_site_states_agree(seed, L, T):
    rng = np.random.default_rng(seed)
    psi = np.array([random_state(rng, 2**L) for _ in range(T)])
    assert np.allclose(site_states(psi, L), site_states_numpy(psi, L), atol=1e-14)


@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=3, max_size=60))
def test_gap_ratios_agree(vals):
    lv = np.sort(np.array(vals))
    r = gap_ratios(lv)
    assert np.allclose(r, gap_ratios_numpy(lv), atol=1e-15)
    assert np.all((r >= 0) & (r <= 1))


def test_gap_ratio_degenerate():
    assert np.array_equal(gap_ratios(np.array([0.0, 0.0, 0.0, 1.0])), [1.0, 0.0])
