"""Finite-T time averages: inner products, moments, Fourier coefficients and
Besicovitch distances.

All integrals use composite Simpson weights on the uniform grid. When a mask
is attached, every subinterval touching a masked point is dropped, each
remaining run of consecutive points is integrated on its own, and averages
are normalised by the retained measure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .series import LineSeries, TGrid, check_same_grid, pow_line


@dataclass(frozen=True)
class EstimateRecord:
    """A finite-T estimate with a self-consistency error proxy.

    ``error_proxy`` is |value over [t0, t1] - value over [t0, t1/2]|, a
    heuristic rather than a bound.
    """

    value: complex | float
    error_proxy: float
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.error_proxy >= 0:
            raise ValueError(f"error_proxy must be >= 0, got {self.error_proxy}")

    @property
    def real(self) -> float:
        return float(np.real(self.value))

    def as_dict(self) -> dict:
        return {
            "value_re": float(np.real(self.value)),
            "value_im": float(np.imag(self.value)),
            "error_proxy": float(self.error_proxy),
            "params": self.params,
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


# --- quadrature -------------------------------------------------------------------


def run_weights(m: int, h: float) -> np.ndarray:
    """Quadrature weights for m equally spaced points.

    Simpson for an even number of intervals; Simpson plus a closing 3/8 panel
    for an odd number; trapezoid for a single interval.
    """
    w = np.zeros(m)
    if m < 2:
        return w
    if m == 2:
        w[:] = h / 2
        return w
    n_simpson = m if m % 2 == 1 else m - 3  # points covered by the Simpson part
    if n_simpson >= 3:
        w[:n_simpson:2] = 2 * h / 3
        w[1:n_simpson:2] = 4 * h / 3
        w[0] = w[n_simpson - 1] = h / 3
    if m % 2 == 0:
        s = m - 4
        w[s:] += (3 * h / 8) * np.array([1.0, 3.0, 3.0, 1.0])
    return w


def masked_runs(excluded: np.ndarray) -> list[tuple[int, int]]:
    """Half-open index ranges of consecutive retained points."""
    keep = np.concatenate(([False], ~excluded, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(keep))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def quadrature_weights(grid: TGrid, excluded: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """(weights, retained measure) for integrating over the unmasked grid."""
    if grid.count < 3:
        raise ValueError(f"need at least 3 grid points, got {grid.count}")
    if excluded is None or not excluded.any():
        return run_weights(grid.count, grid.h), grid.length
    w = np.zeros(grid.count)
    measure = 0.0
    for a, b in masked_runs(excluded):
        w[a:b] = run_weights(b - a, grid.h)
        measure += grid.h * (b - a - 1)
    if measure <= 0:
        raise ValueError("no retained measure: every subinterval is masked")
    return w, measure


def _integrate(grid: TGrid, values: np.ndarray, excluded: np.ndarray | None) -> tuple[complex, float]:
    w, measure = quadrature_weights(grid, excluded)
    ok = w != 0  # masked samples may be non-finite
    return np.sum(w[ok] * values[ok]), measure


def _combined_exclusion(*series) -> np.ndarray | None:
    ex = None
    for s in series:
        if s.mask is not None:
            e = s.excluded()
            ex = e if ex is None else ex | e
    return ex


def _half_count(grid: TGrid) -> int:
    """Point count of the prefix ending at t1/2 (or the midpoint if that is too short)."""
    n = grid.prefix(grid.t1 / 2).count if grid.t1 / 2 > grid.t0 else 0
    if n < 3:
        n = grid.count // 2 + 1
    return n


def _windowed_mean(grid: TGrid, values: np.ndarray, excluded: np.ndarray | None):
    """(mean over the grid, mean over the first half, integral, retained measure)."""
    integral, measure = _integrate(grid, values, excluded)
    n = _half_count(grid)
    half_grid = TGrid(grid.sigma, grid.t0, grid.t0 + grid.h * (n - 1), grid.h, grid.allow_low)
    half_ex = None if excluded is None else excluded[:n]
    try:
        hi, hm = _integrate(half_grid, values[:n], half_ex)
        half = hi / hm
    except ValueError:
        half = integral / measure
    return integral / measure, half, integral, measure


def _params(series: LineSeries, **extra) -> dict:
    g = series.grid
    p = {"sigma": g.sigma, "t0": g.t0, "T": g.t1, "h": g.h, "count": g.count}
    for key in ("tol", "chunk", "N", "k"):
        if key in series.meta:
            p[key] = series.meta[key]
    p.update(extra)
    return p


# --- functionals ------------------------------------------------------------------


def mean_inner(f: LineSeries, g: LineSeries) -> EstimateRecord:
    """(1 / |retained|) * integral of f conj(g) over the grid."""
    check_same_grid(f.grid, g.grid)
    ex = _combined_exclusion(f, g)
    if f is g:
        prod = (f.samples.real**2 + f.samples.imag**2).astype(np.complex128)
    else:
        prod = f.samples * np.conj(g.samples)
    mean, half, integral, measure = _windowed_mean(f.grid, prod, ex)
    return EstimateRecord(
        complex(mean), float(abs(mean - half)), _params(f),
        {"integral": [float(integral.real), float(integral.imag)], "retained_measure": measure},
    )


def mean_square(f: LineSeries) -> EstimateRecord:
    """||f||^2 as a real-valued record."""
    r = mean_inner(f, f)
    return EstimateRecord(r.real, r.error_proxy, r.params, r.extra)


def moment(k: int, series: LineSeries) -> EstimateRecord:
    """M_k = integral |f|^{2k} dt; value is M_k / |retained|, extra holds M_k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a2 = series.samples.real**2 + series.samples.imag**2
    vals = a2**k
    mean, half, integral, measure = _windowed_mean(series.grid, vals, _combined_exclusion(series))
    return EstimateRecord(
        float(mean), float(abs(mean - half)), _params(series, k=k),
        {"integral": float(integral), "retained_measure": measure},
    )


def fourier_coeff(series: LineSeries, lam: float) -> EstimateRecord:
    """(1 / |retained|) * integral of f(t) e^{-i lam t} dt."""
    grid = series.grid
    if abs(lam) > math.pi / grid.h:
        raise ValueError(
            f"|lambda|={abs(lam):g} exceeds the grid Nyquist bound pi/h={math.pi / grid.h:g}"
        )
    vals = series.samples * np.exp(-1j * lam * grid.t)
    mean, half, integral, measure = _windowed_mean(grid, vals, _combined_exclusion(series))
    return EstimateRecord(
        complex(mean), float(abs(mean - half)), _params(series, **{"lambda": lam}),
        {"retained_measure": measure},
    )


def besicovitch_dist2(k: int, N: int, zeta_series: LineSeries,
                      partial: LineSeries | None = None) -> EstimateRecord:
    """||zeta^k - f_N||^2; N = 0 means f_0 = 0."""
    from .approximants import partial_sum_line

    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    zk = pow_line(zeta_series, k)
    if N == 0:
        d = zk
    else:
        if partial is None:
            partial = partial_sum_line(k, N, zeta_series.grid)
        check_same_grid(zeta_series.grid, partial.grid)
        d = LineSeries(zk.grid, zk.samples - partial.samples, "zeta^k - f_N", zk.mask, zk.meta)
    r = mean_square(d)
    return EstimateRecord(r.value, r.error_proxy, {**r.params, "k": k, "N": N}, r.extra)
