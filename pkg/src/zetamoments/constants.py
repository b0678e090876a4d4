"""Moment constants: the arithmetic factor a_k, the Barnes-G ratio g_k, the
limiting series sum d_k(n)^2 / n^{2 sigma} and the leading-order moment
prediction a_k g_k T (log T)^{k^2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import comb, exp1

from .arith import divisor_table, prime_sieve
from .zeta_eval import zeta_point


class TailToleranceError(ValueError):
    """A truncated product or series cannot be certified to the requested tol."""


@lru_cache(maxsize=8)
def _primes(p_max: int) -> np.ndarray:
    return prime_sieve(p_max).astype(np.float64)


def _prime_power_tail(exponent: float, p_max: int) -> float:
    """Estimate of sum_{p > p_max} p^{-exponent} from the prime density 1/log x."""
    return float(exp1((exponent - 1.0) * math.log(p_max)))


# --- a_k ----------------------------------------------------------------------


def arithmetic_log_terms(k: int, p_max: int) -> np.ndarray:
    """log of (1 - 1/p)^{(k-1)^2} sum_n C(k-1, n)^2 p^{-n} for each p <= p_max."""
    j = k - 1
    x = 1.0 / _primes(p_max)
    poly = np.zeros_like(x)
    for n in range(j, 0, -1):  # Horner on sum_{n>=1} C(j,n)^2 x^n
        poly = (poly + comb(j, n, exact=True) ** 2) * x
    return j * j * np.log1p(-x) + np.log1p(poly)


def arithmetic_log_tail(k: int, p_max: int) -> float:
    """Contribution of primes beyond p_max to log a_k.

    Each log-factor is -j^2 (j+1)^2 / 4 * p^{-2} + O(p^{-3}) with j = k - 1.
    """
    j = k - 1
    return -(j * j * (j + 1) ** 2 / 4.0) * _prime_power_tail(2.0, p_max)


def arithmetic_factor(k: int, p_max: int = 10**6, tol: float = 1e-6) -> float:
    """a_k = prod_p (1 - 1/p)^{(k-1)^2} sum_{n<k} C(k-1, n)^2 p^{-n}.

    Primes up to p_max are multiplied exactly (in log space); the remaining
    primes enter through :func:`arithmetic_log_tail`. Raises
    TailToleranceError when a fifth of that tail correction exceeds tol.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    if k == 1:
        return 1.0
    log_head = math.fsum(arithmetic_log_terms(k, p_max))
    log_tail = arithmetic_log_tail(k, p_max)
    value = math.exp(log_head + log_tail)
    slack = 0.2 * abs(log_tail) * value
    if slack > tol:
        raise TailToleranceError(
            f"a_{k}: tail uncertainty {slack:.2g} beyond p_max={p_max} exceeds tol={tol:g}"
        )
    return value


# --- g_k ----------------------------------------------------------------------


def barnes_g(n: int) -> int:
    """G(n) for positive integers: G(1) = G(2) = 1, G(n + 1) = (n - 1)! G(n)."""
    if n < 1:
        raise ValueError(f"barnes_g needs a positive integer, got {n}")
    g, fact = 1, 1
    for m in range(2, n):
        fact *= m - 1  # (m-1)!
        g *= fact
    return g


def barnes_g_factor(k: int) -> Fraction:
    """g_k = G(k + 1)^2 / G(2k + 1), exactly."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return Fraction(barnes_g(k + 1) ** 2, barnes_g(2 * k + 1))


# --- sum d_k(n)^2 n^{-2 sigma} ---------------------------------------------------


def _check_sigma(sigma: float) -> None:
    if not 0.5 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (1/2, 1), got {sigma}")


def dk_partial_sum(k: int, sigma: float, N: int) -> float:
    """sum_{n <= N} d_k(n)^2 / n^{2 sigma} (0 for N = 0)."""
    if N <= 0:
        return 0.0
    d = divisor_table(k, N).values.astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    return math.fsum(d * d * n ** (-2.0 * sigma))


def _local_factor_log(k: int, x: np.ndarray) -> np.ndarray:
    """log[(1 - x)^{k^2} sum_m C(m+k-1, k-1)^2 x^m] for x = p^{-2 sigma}."""
    series = np.zeros_like(x)
    x_max = float(x.max()) if x.size else 0.0
    m = 1
    while True:
        c = comb(m + k - 1, k - 1, exact=True) ** 2
        series += c * x**m
        if c * x_max**m < 1e-18:
            break
        m += 1
    return k * k * np.log1p(-x) + np.log1p(series)


DK_PRIME_LIMITS = (10**5, 10**6, 10**7)


def dk_series(k: int, sigma: float, tol: float = 1e-10, p_max: int | None = None) -> float:
    """sum_{n >= 1} d_k(n)^2 / n^{2 sigma} for 1/2 < sigma < 1.

    Evaluated through the factorisation zeta(2 sigma)^{k^2} H(2 sigma), where
    the Euler product H converges absolutely (its local factors are
    1 - k^2 (k-1)^2 / 4 p^{-4 sigma} + ...). Primes beyond p_max enter through
    an integral estimate; TailToleranceError if a fifth of it exceeds tol.
    Without an explicit p_max the limits in DK_PRIME_LIMITS are tried in turn.
    """
    _check_sigma(sigma)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    z = zeta_point(2.0 * sigma, tol=min(1e-12, tol)).real
    if k == 1:
        return z
    limits = DK_PRIME_LIMITS if p_max is None else (p_max,)
    for i, pm in enumerate(limits):
        log_tail = -(k * k * (k - 1) ** 2 / 4.0) * _prime_power_tail(4.0 * sigma, pm)
        slack = 0.2 * abs(log_tail) * z ** (k * k)
        if slack <= tol or i == len(limits) - 1:
            break
    x = _primes(pm) ** (-2.0 * sigma)
    log_h = math.fsum(_local_factor_log(k, x))
    value = z ** (k * k) * math.exp(log_h + log_tail)
    slack = 0.2 * abs(log_tail) * value
    if slack > tol:
        raise TailToleranceError(
            f"dk_series(k={k}, sigma={sigma}): tail uncertainty {slack:.2g} beyond "
            f"p_max={pm} exceeds tol={tol:g}"
        )
    return value


def dk_tail(k: int, sigma: float, N: int, tol: float = 1e-10) -> float:
    """sum_{n > N} d_k(n)^2 / n^{2 sigma}."""
    return dk_series(k, sigma, tol) - dk_partial_sum(k, sigma, N)


# --- prediction ---------------------------------------------------------------


@dataclass(frozen=True)
class MomentPrediction:
    """Leading-order prediction a_k g_k T (log T)^{k^2} for the 2k-th moment."""

    k: int
    a_k: float
    g_k: Fraction

    @property
    def constant(self) -> float:
        return self.a_k * float(self.g_k)

    def predicted(self, T: float) -> float:
        if T <= math.e:
            raise ValueError(f"prediction needs T > e, got {T}")
        return self.constant * T * math.log(T) ** (self.k * self.k)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "a_k": self.a_k,
            "g_k_num": self.g_k.numerator,
            "g_k_den": self.g_k.denominator,
            "a_k_g_k": self.constant,
        }


def moment_prediction(k: int, p_max: int = 10**6, tol: float = 1e-6) -> MomentPrediction:
    return MomentPrediction(k, arithmetic_factor(k, p_max, tol), barnes_g_factor(k))


def ks_prediction(k: int, T: float, p_max: int = 10**6) -> float:
    """a_k g_k T (log T)^{k^2}."""
    return moment_prediction(k, p_max).predicted(T)
