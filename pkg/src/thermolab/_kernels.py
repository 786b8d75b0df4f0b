"""Hot loops with a numba path and a pure-numpy fallback.

Set ``THERMOLAB_DISABLE_NUMBA=1`` to force the numpy implementations. The
active backend is reported by :data:`BACKEND`.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("THERMOLAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised via env flag in a subprocess
    njit = None

BACKEND = "numpy" if njit is None else "numba"


def site_states_numpy(psi: np.ndarray, L: int) -> np.ndarray:
    """Single-site reduced density matrices of a batch of pure states.

    ``psi`` has shape (T, 2**L); site 0 is the most significant bit. Returns
    an array of shape (T, L, 2, 2).
    """
    T = psi.shape[0]
    out = np.empty((T, L, 2, 2), dtype=np.complex128)
    for n in range(L):
        v = psi.reshape(T, 2**n, 2, 2 ** (L - n - 1))
        out[:, n] = np.einsum("tiaj,tibj->tab", v, v.conj())
    return out


def gap_ratios_numpy(levels: np.ndarray) -> np.ndarray:
    """Consecutive-gap ratios min(s_n, s_n+1) / max(s_n, s_n+1)."""
    s = np.diff(levels)
    lo = np.minimum(s[:-1], s[1:])
    hi = np.maximum(s[:-1], s[1:])
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 1.0)
    return r


if njit is not None:

    @njit(cache=True)
    def _site_states_nb(psi, L):  # pragma: no cover - compiled
        T, D = psi.shape
        out = np.zeros((T, L, 2, 2), dtype=np.complex128)
        for t in range(T):
            for i in range(D):
                a = psi[t, i]
                w = a.real * a.real + a.imag * a.imag
                for n in range(L):
                    shift = L - 1 - n
                    b = (i >> shift) & 1
                    out[t, n, b, b] += w
                    if b == 0:
                        c = psi[t, i | (1 << shift)]
                        out[t, n, 0, 1] += a * np.conj(c)
            for n in range(L):
                out[t, n, 1, 0] = np.conj(out[t, n, 0, 1])
        return out

    @njit(cache=True)
    def _gap_ratios_nb(levels):  # pragma: no cover - compiled
        m = levels.shape[0] - 2
        out = np.empty(max(m, 0))
        for n in range(m):
            s0 = levels[n + 1] - levels[n]
            s1 = levels[n + 2] - levels[n + 1]
            hi = max(s0, s1)
            out[n] = min(s0, s1) / hi if hi > 0 else 1.0
        return out

    def site_states(psi: np.ndarray, L: int) -> np.ndarray:
        return _site_states_nb(np.ascontiguousarray(psi, dtype=np.complex128), L)

    def gap_ratios(levels: np.ndarray) -> np.ndarray:
        return _gap_ratios_nb(np.ascontiguousarray(levels, dtype=np.float64))

else:
    site_states = site_states_numpy
    gap_ratios = gap_ratios_numpy

site_states.__doc__ = site_states_numpy.__doc__
gap_ratios.__doc__ = gap_ratios_numpy.__doc__
