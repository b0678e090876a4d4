"""The smoothed Euler product P_N, the quotient Z_N = zeta / P_N, partial
Dirichlet sums f_N of zeta^k, and their wrapped phases.

P_N(s) = exp(sum_{2 <= n <= N^2} Lambda_N(n) / (n^s log n)). The exponent is a
Dirichlet polynomial supported on prime powers, so it is evaluated with the
same rotation kernel as zeta itself and exponentiated pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import divisor_table, smoothed_mangoldt_table
from .kernel import DEFAULT_CHUNK, dirichlet_poly_line
from .series import LineSeries, TGrid, check_same_grid, constant_series

TWO_PI = 2.0 * math.pi


def wrap_phase(x):
    """Reduce x modulo 2 pi into (-pi, pi]; -pi maps to pi."""
    arr = np.asarray(x, dtype=np.float64)
    r = arr - TWO_PI * np.round(arr / TWO_PI)
    r = np.where(r <= -math.pi, r + TWO_PI, r)
    r = np.where(r > math.pi, r - TWO_PI, r)
    return float(r) if r.ndim == 0 else r


@dataclass(frozen=True)
class PhaseSeries:
    """Wrapped phases on a grid; values at masked points are not constrained.

    ``unwrapped`` optionally keeps the continuous representative the phases
    were reduced from (available for closed-form phases such as theta_{P_N}).
    """

    grid: TGrid
    theta: np.ndarray
    mask: object = None
    label: str = ""
    unwrapped: np.ndarray | None = None

    def __post_init__(self):
        if self.theta.shape != (self.grid.count,):
            raise ValueError(f"{self.theta.size} phases for a grid of {self.grid.count} points")
        keep = ~self.excluded()
        th = self.theta[keep]
        if not np.all(np.isfinite(th)) or np.any(th <= -math.pi) or np.any(th > math.pi):
            raise ValueError(f"unmasked phases of {self.label!r} leave (-pi, pi]")

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    def excluded(self) -> np.ndarray:
        if self.mask is None:
            return np.zeros(self.grid.count, dtype=bool)
        return self.mask.indicator(self.grid.t)

    def with_mask(self, mask) -> "PhaseSeries":
        return PhaseSeries(self.grid, self.theta, mask, self.label, self.unwrapped)

    def to_csv(self, path) -> None:
        write_phase_csv(self, path)


def write_phase_csv(phase: PhaseSeries, path) -> None:
    """``t,theta,masked`` rows, masked as 0/1."""
    ex = phase.excluded()
    with Path(path).open("w", newline="\n") as fh:
        fh.write("t,theta,masked\n")
        for tj, th, m in zip(phase.grid.t.tolist(), phase.theta.tolist(), ex.tolist()):
            fh.write(f"{tj:.17g},{th:.17g},{int(m)}\n")


# --- P_N ------------------------------------------------------------------------


def pn_exponent_terms(N: int, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """(coefficients Lambda_N(n) / (n^sigma log n), frequencies log n) over the
    prime powers n <= N^2 where Lambda_N is nonzero."""
    if N < 2:
        raise ValueError(f"P_N needs N >= 2, got {N}")
    lam = smoothed_mangoldt_table(N).values
    n = np.flatnonzero(lam) + 1
    logn = np.log(n.astype(np.float64))
    return lam[n - 1] / (n**sigma * logn), logn


def pn_exponent_line(N: int, grid: TGrid, chunk: int = DEFAULT_CHUNK, threads: int = 1) -> np.ndarray:
    """log P_N(sigma + i t_j) on the grid (the k = 1 exponent)."""
    coef, omega = pn_exponent_terms(N, grid.sigma)
    return dirichlet_poly_line(coef, omega, grid.t0, grid.h, grid.count, chunk, threads)


def p_n_line(N: int, k: int, grid: TGrid, exponent: np.ndarray | None = None,
             chunk: int = DEFAULT_CHUNK, threads: int = 1) -> LineSeries:
    """P_N(sigma + i t)^k. A precomputed ``exponent`` (from pn_exponent_line)
    can be passed to share work across k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if exponent is None:
        exponent = pn_exponent_line(N, grid, chunk, threads)
    return LineSeries(grid, np.exp(k * exponent), f"P_{N}^{k}", None,
                      {"N": N, "k": k, "chunk": chunk})


def theta_p_line(N: int, k: int, grid: TGrid, exponent: np.ndarray | None = None,
                 chunk: int = DEFAULT_CHUNK, threads: int = 1) -> PhaseSeries:
    """theta_{P_N^k} = wrap(-k sum Lambda_N(n) sin(t log n) / (n^sigma log n)).

    Taken from the imaginary part of the exponent sum, never from arg P_N.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if exponent is None:
        exponent = pn_exponent_line(N, grid, chunk, threads)
    raw = k * exponent.imag
    return PhaseSeries(grid, wrap_phase(raw), None, f"theta_P_{N}^{k}", raw)


def z_n_line(zeta_series: LineSeries, pn_series: LineSeries, mask=None,
             pn_theta: PhaseSeries | None = None) -> tuple[LineSeries, PhaseSeries]:
    """Z_N = zeta / P_N and theta_{Z_N} = wrap(arg zeta - theta_{P_N}).

    theta_{P_N} is taken from ``pn_theta`` (its unwrapped values when present)
    and otherwise from arg P_N; the result only depends on it modulo 2 pi.
    Points inside ``mask`` are flagged as excluded.
    """
    check_same_grid(zeta_series.grid, pn_series.grid)
    if pn_theta is not None:
        check_same_grid(zeta_series.grid, pn_theta.grid)
        tp = pn_theta.unwrapped if pn_theta.unwrapped is not None else pn_theta.theta
    else:
        tp = np.angle(pn_series.samples)
    z = zeta_series.samples / pn_series.samples
    theta = wrap_phase(np.angle(zeta_series.samples) - tp)
    grid = zeta_series.grid
    zn = LineSeries(grid, z, f"{zeta_series.label}/{pn_series.label}", mask,
                    {**zeta_series.meta, **pn_series.meta})
    return zn, PhaseSeries(grid, theta, mask, "theta_Z")


# --- partial sums -----------------------------------------------------------------


def partial_sum_terms(k: int, N: int, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    d = divisor_table(k, N).values.astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    return d * n**-sigma, np.log(n)


def partial_sum_line(k: int, N: int, grid: TGrid, chunk: int = DEFAULT_CHUNK,
                     threads: int = 1) -> LineSeries:
    """f_N(sigma + i t) = sum_{n <= N} d_k(n) n^{-sigma - i t}."""
    if k < 1 or N < 1:
        raise ValueError(f"need k >= 1 and N >= 1, got k={k}, N={N}")
    if N == 1:
        return constant_series(grid, 1.0, f"f_1[k={k}]")
    coef, omega = partial_sum_terms(k, N, grid.sigma)
    samples = dirichlet_poly_line(coef, omega, grid.t0, grid.h, grid.count, chunk, threads)
    return LineSeries(grid, samples, f"f_{N}[k={k}]", None, {"N": N, "k": k})
