"""Throughput of the rotation kernel and of zeta_line.

    python3 scripts/benchmark_kernel.py
"""

from __future__ import annotations

import time

import numpy as np

from zetamoments import TGrid, zeta_line
from zetamoments.kernel import dirichlet_poly_line


def bench(terms: int, points: int) -> float:
    n = np.arange(1, terms + 1, dtype=np.float64)
    dirichlet_poly_line(n**-0.75, np.log(n), 1.0, 0.01, 1000)  # compile
    t = time.perf_counter()
    dirichlet_poly_line(n**-0.75, np.log(n), 1.0, 0.01, points)
    return (time.perf_counter() - t) / (terms * points) * 1e9


def main():
    for terms, points in ((1000, 1 << 18), (20000, 1 << 16), (80000, 1 << 15)):
        print(f"kernel  terms={terms:6d} points={points:7d}  {bench(terms, points):.3f} ns/term-point")
    for T in (1e3, 1e4):
        t = time.perf_counter()
        z = zeta_line(TGrid(0.75, 1.0, T, 0.01), 1e-8)
        print(f"zeta_line sigma=0.75 T={T:g} h=0.01: {time.perf_counter() - t:.2f}s "
              f"(max cutoff {z.meta['max_cutoff']})")


if __name__ == "__main__":
    main()
