"""Finite-T diagnostics built from zeta, P_N and their phases: phase
exceedance, the zero-one ratio, the 1 - cos 2x = 2 sin^2 x residual, mass on
interval sets and the |zeta|^{2k} density profile.

Phase arguments follow one convention throughout: ``pn_series`` is P_N and
``pn_theta`` is theta_{P_N}, both for k = 1; powers of k are applied here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .approximants import PhaseSeries, wrap_phase
from .meanvalue import EstimateRecord, _params, _windowed_mean, quadrature_weights
from .series import LineSeries, check_same_grid


def _exclusion(grid, *objs, mask=None) -> np.ndarray | None:
    ex = None
    for o in objs:
        if o is not None and o.mask is not None:
            e = o.excluded()
            ex = e if ex is None else ex | e
    if mask is not None:
        e = mask.indicator(grid.t)
        ex = e if ex is None else ex | e
    return ex


def masked_fraction(theta: PhaseSeries) -> float:
    """Fraction of grid points flagged as excluded."""
    return float(np.mean(theta.excluded()))


def phase_exceedance(theta: PhaseSeries, eps: float) -> float:
    """Fraction of unmasked grid points with |theta| >= eps."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    keep = ~theta.excluded()
    if not keep.any():
        raise ValueError("every grid point is masked")
    return float(np.count_nonzero(np.abs(theta.theta[keep]) >= eps) / np.count_nonzero(keep))


def z_phase(zeta_series: LineSeries, pn_theta: PhaseSeries) -> np.ndarray:
    """theta_{Z_N} = wrap(arg zeta - theta_{P_N}) from the closed-form phase."""
    check_same_grid(zeta_series.grid, pn_theta.grid)
    tp = pn_theta.unwrapped if pn_theta.unwrapped is not None else pn_theta.theta
    return wrap_phase(np.angle(zeta_series.samples) - tp)


def zero_one_ratio(k: int, N: int, zeta_series: LineSeries, pn_theta: PhaseSeries,
                   mask=None) -> EstimateRecord:
    """integral |zeta|^{2k} sin^2(k theta_{Z_N}) / integral |zeta|^{2k}, both over
    the points retained after masking. ``N`` is recorded in the params."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    grid = zeta_series.grid
    ex = _exclusion(grid, zeta_series, pn_theta, mask=mask)
    a = (zeta_series.samples.real**2 + zeta_series.samples.imag**2) ** k
    s2 = np.sin(k * z_phase(zeta_series, pn_theta)) ** 2
    num, num_half, num_int, measure = _windowed_mean(grid, a * s2, ex)
    den, den_half, den_int, _ = _windowed_mean(grid, a, ex)
    if not den > 0:
        raise ValueError("zero denominator: |zeta|^{2k} integrates to 0 on the retained set")
    ratio = num / den
    half = num_half / den_half if den_half > 0 else ratio
    return EstimateRecord(
        float(ratio), float(abs(ratio - half)), _params(zeta_series, k=k, N=N),
        {"numerator": float(num_int), "moment": float(den_int), "retained_measure": measure,
         "total_measure": grid.length},
    )


@dataclass(frozen=True)
class IdentityResidual:
    residual: float
    moment: float  # integral |zeta|^{2k} over the retained set

    @property
    def relative(self) -> float:
        return self.residual / self.moment if self.moment > 0 else math.inf


def sin2_identity_terms(k: int, zeta_series: LineSeries, pn_series: LineSeries,
                        pn_theta: PhaseSeries, mask=None) -> IdentityResidual:
    """Residual of M_k - Re int zeta^{2k} e^{-2ik theta_P} - 2 int |zeta|^{2k} sin^2(k theta_Z).

    theta_Z is taken as arg(zeta / P_N), the route independent of the closed
    form used for theta_P, so the residual checks both constructions.
    """
    grid = zeta_series.grid
    check_same_grid(grid, pn_series.grid, pn_theta.grid)
    ex = _exclusion(grid, zeta_series, pn_series, pn_theta, mask=mask)
    w, _ = quadrature_weights(grid, ex)
    ok = w != 0
    w = w[ok]
    z = zeta_series.samples[ok]
    tp = (pn_theta.unwrapped if pn_theta.unwrapped is not None else pn_theta.theta)[ok]
    tz = np.angle(z / pn_series.samples[ok])
    a = (z.real**2 + z.imag**2) ** k
    m_k = float(np.sum(w * a))
    cross = float(np.sum(w * np.real(z ** (2 * k) * np.exp(-2j * k * tp))))
    s2 = float(np.sum(w * a * np.sin(k * tz) ** 2))
    return IdentityResidual(abs(m_k - cross - 2.0 * s2), m_k)


def sin2_identity_residual(k: int, zeta_series: LineSeries, pn_series: LineSeries,
                           pn_theta: PhaseSeries, mask=None) -> float:
    """Absolute residual of the sin^2 identity (see :func:`sin2_identity_terms`)."""
    return sin2_identity_terms(k, zeta_series, pn_series, pn_theta, mask).residual


def mass_on_set(f: LineSeries, S) -> float:
    """integral_S |f|^2 / integral |f|^2 over the whole grid.

    The last grid point counts as inside S when S reaches it, so S covering
    [t0, t1] gives exactly 1.
    """
    grid = f.grid
    w, _ = quadrature_weights(grid)
    a = f.samples.real**2 + f.samples.imag**2
    total = float(np.sum(w * a))
    if not total > 0:
        raise ValueError("|f|^2 integrates to 0")
    ind = S.indicator(grid.t, right_closed_at=grid.t_last)
    return float(np.sum(w * a * ind)) / total


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    mass: np.ndarray

    @property
    def bins(self) -> int:
        return self.mass.size

    def to_csv(self, path) -> None:
        write_histogram_csv(self, path)


def write_histogram_csv(hist: Histogram, path) -> None:
    with Path(path).open("w", newline="\n") as fh:
        fh.write("bin_lo,bin_hi,mass\n")
        for lo, hi, m in zip(hist.edges[:-1].tolist(), hist.edges[1:].tolist(), hist.mass.tolist()):
            fh.write(f"{lo:.17g},{hi:.17g},{m:.17g}\n")


def density_profile(k: int, zeta_series: LineSeries, bins: int) -> Histogram:
    """Share of integral |zeta|^{2k} falling in each of ``bins`` equal t-bins.

    Each trapezoid cell [t_j, t_{j+1}] goes to the bin holding its midpoint.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    grid = zeta_series.grid
    if grid.count < 2:
        raise ValueError("need at least 2 grid points")
    a = (zeta_series.samples.real**2 + zeta_series.samples.imag**2) ** k
    cell = 0.5 * grid.h * (a[:-1] + a[1:])
    mid = grid.t[:-1] + 0.5 * grid.h
    edges = np.linspace(grid.t0, grid.t_last, bins + 1)
    idx = np.clip(np.searchsorted(edges, mid, side="right") - 1, 0, bins - 1)
    mass = np.bincount(idx, weights=cell, minlength=bins)
    total = mass.sum()
    if not total > 0:
        raise ValueError("|zeta|^{2k} integrates to 0")
    return Histogram(edges, mass / total)
