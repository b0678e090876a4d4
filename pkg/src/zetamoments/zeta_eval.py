"""Evaluation of zeta(s) at points and along vertical grids.

Two independent routes:

* Euler-Maclaurin summation (``zeta_point``, ``zeta_line``). The cutoff M and
  the number of Bernoulli corrections p come from the remainder bound

      |R| <= 4 |(s)_{2p}| / (2 pi)^{2p} * M^{1 - sigma - 2p} / (sigma + 2p - 1)

  ((s)_k the rising factorial), minimising M over p <= MAX_BERNOULLI.
* Borwein's accelerated alternating series for eta(s) = (1 - 2^{1-s}) zeta(s)
  (``zeta_eta``), used as a cross-check for moderate t.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .kernel import DEFAULT_CHUNK, RENORM_STEPS, chunk_bounds, dirichlet_poly_chunk
from .series import LineSeries, TGrid

MAX_BERNOULLI = 40
DEFAULT_TOL = 1e-10
_EPS = np.finfo(float).eps
_LOG_2PI = math.log(2 * math.pi)


class ZetaPoleError(ValueError):
    """Evaluation requested at (or numerically at) the pole s = 1."""


class ZetaPrecisionError(ValueError):
    """Requested tolerance is below what double precision can deliver."""


@lru_cache(maxsize=None)
def bernoulli_factorial_ratios(p: int = MAX_BERNOULLI) -> np.ndarray:
    """B_{2j} / (2j)! for j = 1..p, from exact Bernoulli numbers."""
    # Akiyama-Tanigawa gives B_m exactly
    m_max = 2 * p
    bern = []
    a = [Fraction(0)] * (m_max + 1)
    for m in range(m_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        bern.append(a[0])
    # Akiyama-Tanigawa yields B_1 = +1/2; only even indices are used
    return np.array([float(bern[2 * j] / math.factorial(2 * j)) for j in range(1, p + 1)])


def em_parameters(s: complex, tol: float, max_terms: int = MAX_BERNOULLI) -> tuple[int, int]:
    """Smallest cutoff M (and its Bernoulli depth p) meeting the remainder bound."""
    sigma, t = s.real, abs(s.imag)
    s_abs = complex(sigma, t)
    best = None
    log_poch = 0.0
    for p in range(1, max_terms + 1):
        log_poch += math.log(abs(s_abs + 2 * p - 2)) + math.log(abs(s_abs + 2 * p - 1))
        expo = sigma + 2 * p - 1
        if expo <= 0:
            continue
        rhs = math.log(4.0) + log_poch - 2 * p * _LOG_2PI - math.log(expo) - math.log(tol)
        M = max(4, math.ceil(math.exp(rhs / expo)))
        if best is None or M < best[0]:
            best = (M, p)
    return best


def em_remainder_bound(s: complex, M: int, p: int) -> float:
    sigma, t = s.real, abs(s.imag)
    s_abs = complex(sigma, t)
    log_poch = sum(math.log(abs(s_abs + k)) for k in range(2 * p))
    expo = sigma + 2 * p - 1
    return math.exp(math.log(4.0) + log_poch - 2 * p * _LOG_2PI
                    - expo * math.log(M) - math.log(expo))


def rounding_floor(sigma: float, t: float, M: int) -> float:
    """Rough size of double-precision rounding in the main sum.

    Phase errors of size eps * t on each term add like a random walk, weighted
    by sqrt(sum n^{-2 sigma}). Observed errors sit well below this.
    """
    if abs(2 * sigma - 1) < 1e-12:
        s2 = 1.0 + math.log(M)
    else:
        s2 = 1.0 + (M ** (1 - 2 * sigma) - 1) / (1 - 2 * sigma)
    return _EPS * max(1.0, abs(t)) * math.sqrt(s2)


def _em_tail(s: np.ndarray, M: int, p: int) -> np.ndarray:
    """M^{1-s}/(s-1) + M^{-s}/2 + Bernoulli corrections, vectorised over s."""
    ratios = bernoulli_factorial_ratios()
    logM = math.log(M)
    m_neg_s = np.exp(-s * logM)
    total = M * m_neg_s / (s - 1) + 0.5 * m_neg_s
    # q_j = (s)_{2j-1} / M^{2j-1}; stays O((t/M)^{2j-1}) instead of overflowing
    q = s / M
    corr = np.zeros_like(s)
    inv_m2 = 1.0 / (M * M)
    for j in range(1, p + 1):
        corr = corr + ratios[j - 1] * q
        q = q * (s + 2 * j - 1) * (s + 2 * j) * inv_m2
    return total + corr * m_neg_s


def _check_domain(s: complex) -> None:
    if not 0.0 < s.real <= 2.0:
        raise ValueError(f"Re s must lie in (0, 2], got {s}")
    if abs(s - 1) < 1e-8:
        raise ZetaPoleError(f"zeta has a pole at s = 1 (got {s})")


def zeta_point(s: complex, tol: float = DEFAULT_TOL) -> complex:
    """zeta(s) by Euler-Maclaurin summation, absolute error <= tol."""
    s = complex(s)
    _check_domain(s)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if s.imag < 0:
        return zeta_point(s.conjugate(), tol).conjugate()
    M, p = em_parameters(s, tol)
    floor = rounding_floor(s.real, s.imag, M)
    if tol < floor:
        raise ZetaPrecisionError(
            f"tol={tol:g} is below the double-precision floor {floor:.2g} at s={s}"
        )
    n = np.arange(1, M, dtype=np.float64)
    main = np.sum(np.exp(-s * np.log(n)))
    return complex(main + _em_tail(np.array([s]), M, p)[0])


# --- alternating eta series (Borwein) -----------------------------------------


@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> np.ndarray:
    """(-1)^k (d_n - d_k) / d_n for k < n, exact until the final division."""
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    fact = [1]
    for i in range(1, 2 * n + 1):
        fact.append(fact[-1] * i)
    partial = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(fact[n + i - 1] * 4**i, fact[n - i] * fact[2 * i]) if i else Fraction(1, n)
        partial.append(acc)
    dn = partial[n]
    w = np.array([float((dn - partial[k]) / dn) for k in range(n)])
    w[1::2] *= -1
    return w


def eta_terms_needed(s: complex, tol: float) -> int:
    t = abs(s.imag)
    denom = abs(1 - 2 ** (1 - s))
    log_bound = math.log(3 * (1 + 2 * t)) + math.pi * t / 2 - math.log(denom)
    return max(8, math.ceil((log_bound - math.log(tol)) / math.log(3 + math.sqrt(8))))


def zeta_eta(s: complex, tol: float = DEFAULT_TOL) -> complex:
    """zeta(s) = eta(s) / (1 - 2^{1-s}) with Borwein's acceleration."""
    s = complex(s)
    _check_domain(s)
    denom = 1 - 2 ** (1 - s)
    if abs(denom) < 1e-8:
        raise ZetaPoleError(f"1 - 2^(1-s) vanishes at s={s}")
    n = eta_terms_needed(s, tol)
    w = _borwein_weights(n)
    k = np.arange(1, n + 1, dtype=np.float64)
    return complex(np.sum(w * np.exp(-s * np.log(k))) / denom)


# --- grids --------------------------------------------------------------------


def default_step(n_max: int) -> float:
    """h = 0.05 / log n_max, resolving e^{i t log n} for every n <= n_max."""
    return 0.05 / math.log(max(int(n_max), 3))


def _zeta_chunk(grid: TGrid, j0: int, j1: int, tol: float):
    t = grid.t0 + grid.h * np.arange(j0, j1)
    t_max = float(np.max(np.abs(t)))
    s_worst = complex(grid.sigma, t_max)
    M, p = em_parameters(s_worst, tol)
    floor = rounding_floor(grid.sigma, t_max, M)
    if tol < floor:
        raise ZetaPrecisionError(
            f"tol={tol:g} is below the double-precision floor {floor:.2g} at t={t_max:g}"
        )
    n = np.arange(1, M, dtype=np.float64)
    main, _ = dirichlet_poly_chunk(n ** -grid.sigma, np.log(n), grid.t0, grid.h, j0, j1 - j0)
    s = grid.sigma + 1j * t
    return main + _em_tail(s, M, p), M, p


def zeta_line(grid: TGrid, tol: float = DEFAULT_TOL, chunk: int = DEFAULT_CHUNK,
              threads: int = 1) -> LineSeries:
    """zeta(sigma + i t_j) on every grid point.

    The grid is cut into chunks of ``chunk`` points; each chunk uses its own
    cutoff from the remainder bound at its largest |t| and re-seeds the
    rotations, so results are reproducible for a fixed chunk size.
    """
    t_all = grid.t
    if np.any(np.abs(grid.sigma + 1j * t_all - 1) < 1e-8):
        raise ZetaPoleError("grid passes through s = 1")
    out = np.empty(grid.count, dtype=np.complex128)
    bounds = chunk_bounds(grid.count, chunk)
    cutoffs = [None] * len(bounds)

    def work(i):
        j0, j1 = bounds[i]
        out[j0:j1], M, p = _zeta_chunk(grid, j0, j1, tol)
        cutoffs[i] = (M, p)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, range(len(bounds))))
    else:
        for i in range(len(bounds)):
            work(i)
    meta = {
        "tol": tol,
        "chunk": chunk,
        "renorm": RENORM_STEPS,
        "max_cutoff": max(m for m, _ in cutoffs),
        "max_bernoulli": max(p for _, p in cutoffs),
    }
    return LineSeries(grid, out, f"zeta(sigma={grid.sigma})", None, meta)
