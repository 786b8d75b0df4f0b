"""Time the compiled kernels against their numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--L 10] [--T 200] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from thermolab import BACKEND
from thermolab._kernels import gap_ratios, gap_ratios_numpy, site_states, site_states_numpy


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--L", type=int, default=10)
    ap.add_argument("--T", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    rng = np.random.default_rng(0)
    psi = rng.normal(size=(a.T, 2**a.L)) + 1j * rng.normal(size=(a.T, 2**a.L))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    levels = np.sort(rng.normal(size=2**a.L * 16))
    site_states(psi[:1], a.L)
    gap_ratios(levels[:4])
    print(f"backend: {BACKEND}; L={a.L}, T={a.T}")
    for name, fast, ref, arg in (
        ("site_states", site_states, site_states_numpy, (psi, a.L)),
        ("gap_ratios", gap_ratios, gap_ratios_numpy, (levels,)),
    ):
        tf = min(timeit.repeat(lambda: fast(*arg), number=1, repeat=a.repeat))
        tr = min(timeit.repeat(lambda: ref(*arg), number=1, repeat=a.repeat))
        print(f"{name:12s} active {tf * 1e3:9.2f} ms   numpy {tr * 1e3:9.2f} ms   ratio {tr / tf:6.2f}")


if __name__ == "__main__":
    main()
