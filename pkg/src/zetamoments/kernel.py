"""Dense evaluation of Dirichlet polynomials on uniform t-grids.

Computes S(t_j) = sum_n c_n exp(-i w_n t_j) for t_j = t0 + j h. Each
frequency carries a unit rotation exp(-i w_n h) that is applied once per grid
step, so a sweep costs one complex multiply-add per (term, point). Rotations
are re-seeded from direct exponentials every ``renorm`` steps, which bounds
the multiplicative drift of the recurrence.

The frequency axis is processed in cache-sized blocks; the t axis is split
into chunks that are evaluated independently and written to disjoint slices,
so the result does not depend on the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

RENORM_STEPS = 1 << 12
DEFAULT_CHUNK = 1 << 16
_BLOCK = 512


@njit(fastmath=True, cache=True, nogil=True)
def _sweep(coef, omega, t0, h, j_start, count, renorm, out_re, out_im, final_re, final_im):
    """Accumulate sum_n coef[n] exp(-i omega[n] t_j) into out[0:count].

    t_j = t0 + (j_start + j) h. final_* receive the rotation state after the
    last point (used for drift diagnostics).
    """
    M = coef.shape[0]
    sr = np.empty(_BLOCK)
    si = np.empty(_BLOCK)
    cr = np.empty(_BLOCK)
    ci = np.empty(_BLOCK)
    for b0 in range(0, M, _BLOCK):
        nb = min(_BLOCK, M - b0)
        for i in range(nb):
            a = omega[b0 + i] * h
            cr[i] = np.cos(a)
            ci[i] = -np.sin(a)
        for j0 in range(0, count, renorm):
            t = t0 + (j_start + j0) * h
            for i in range(nb):
                a = omega[b0 + i] * t
                sr[i] = coef[b0 + i] * np.cos(a)
                si[i] = -coef[b0 + i] * np.sin(a)
            j1 = min(j0 + renorm, count)
            for j in range(j0, j1):
                ar = 0.0
                ai = 0.0
                for i in range(nb):
                    x = sr[i]
                    y = si[i]
                    ar += x
                    ai += y
                    sr[i] = x * cr[i] - y * ci[i]
                    si[i] = x * ci[i] + y * cr[i]
                out_re[j] += ar
                out_im[j] += ai
        # state now holds the rotation one step past the last point; step back
        for i in range(nb):
            x = sr[i]
            y = si[i]
            final_re[b0 + i] = x * cr[i] + y * ci[i]
            final_im[b0 + i] = -x * ci[i] + y * cr[i]


def dirichlet_poly_chunk(coef, omega, t0, h, j_start, count, renorm=RENORM_STEPS):
    """Evaluate one contiguous chunk; returns (samples, final_state)."""
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    omega = np.ascontiguousarray(omega, dtype=np.float64)
    out_re = np.zeros(count)
    out_im = np.zeros(count)
    fin_re = np.zeros(coef.shape[0])
    fin_im = np.zeros(coef.shape[0])
    if coef.shape[0] and count:
        _sweep(coef, omega, float(t0), float(h), int(j_start), int(count), int(renorm),
               out_re, out_im, fin_re, fin_im)
    return out_re + 1j * out_im, fin_re + 1j * fin_im


def chunk_bounds(count: int, chunk: int) -> list[tuple[int, int]]:
    return [(j, min(j + chunk, count)) for j in range(0, count, chunk)]


def dirichlet_poly_line(coef, omega, t0, h, count, chunk=DEFAULT_CHUNK, threads=1,
                        renorm=RENORM_STEPS):
    """sum_n coef[n] exp(-i omega[n] (t0 + j h)) for j < count."""
    out = np.empty(count, dtype=np.complex128)
    bounds = chunk_bounds(count, chunk)

    def work(b):
        j0, j1 = b
        out[j0:j1] = dirichlet_poly_chunk(coef, omega, t0, h, j0, j1 - j0, renorm)[0]

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, bounds))
    else:
        for b in bounds:
            work(b)
    return out


def direct_poly(coef, omega, t) -> np.ndarray:
    """Reference evaluation with explicit exponentials (small sizes only)."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return np.exp(-1j * np.outer(t, omega)) @ np.asarray(coef, dtype=np.float64)
