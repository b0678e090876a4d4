"""Arithmetic functions used by the zeta experiments.

Divisor functions d_k(n), von Mangoldt weights Lambda(n) and the tapered
weights Lambda_N(n), Dirichlet convolution, and the Dirichlet exponential
(the coefficient map exp(sum a(n) n^-s) -> sum b(n) n^-s).

Tables are stored 1-indexed in spirit: ``table.values[n - 1]`` is c(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

EXACT = "exact"
FLOATING = "floating"

_INT64_MAX = np.iinfo(np.int64).max


@dataclass(frozen=True)
class CoeffTable:
    """Values c(1), ..., c(n_max) of an arithmetic function.

    Attributes:
        n_max: Largest argument stored.
        values: Array of length n_max with values[n - 1] = c(n).
        kind: ``"exact"`` (int64, overflow-checked) or ``"floating"``.
    """

    n_max: int
    values: np.ndarray
    kind: str = FLOATING

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if len(self.values) != self.n_max:
            raise ValueError(
                f"table length {len(self.values)} does not match n_max={self.n_max}"
            )
        if self.kind not in (EXACT, FLOATING):
            raise ValueError(f"unknown table kind {self.kind!r}")
        self.values.setflags(write=False)

    def __getitem__(self, n: int):
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside 1..{self.n_max}")
        return self.values[n - 1]

    def __len__(self) -> int:
        return self.n_max

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1)

    def to_csv(self, path) -> None:
        """Write ``n,value`` rows; floats use 17 significant digits."""
        path = Path(path)
        with path.open("w", newline="\n") as fh:
            fh.write("n,value\n")
            if self.kind == EXACT:
                for n, v in enumerate(self.values.tolist(), start=1):
                    fh.write(f"{n},{v}\n")
            else:
                for n, v in enumerate(self.values.tolist(), start=1):
                    fh.write(f"{n},{v:.17g}\n")


def delta_table(n_max: int) -> CoeffTable:
    """The convolution identity: 1 at n = 1, else 0."""
    values = np.zeros(n_max, dtype=np.int64)
    values[0] = 1
    return CoeffTable(n_max, values, EXACT)


def ones_table(n_max: int) -> CoeffTable:
    return CoeffTable(n_max, np.ones(n_max, dtype=np.int64), EXACT)


# --- primes and von Mangoldt -------------------------------------------------


def prime_sieve(n_max: int) -> np.ndarray:
    """Primes <= n_max (Eratosthenes)."""
    if n_max < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n_max) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def _integer_root(n: int, m: int) -> int:
    """floor(n ** (1/m)) for n >= 1, exact."""
    r = int(round(n ** (1.0 / m)))
    while r**m > n:
        r -= 1
    while (r + 1) ** m <= n:
        r += 1
    return r


def prime_power_base(n: int) -> int | None:
    """Return p if n = p^m for a prime p and m >= 1, else None."""
    if n < 2:
        return None
    p = _smallest_prime_factor(n)
    m = round(math.log(n) / math.log(p))
    for e in (m - 1, m, m + 1):
        if e >= 1 and _integer_root(n, e) == p and p**e == n:
            return p
    return None


def von_mangoldt(n: int) -> float:
    """Lambda(n): log p when n is a power of the prime p, otherwise 0."""
    if n < 1:
        raise ValueError(f"von_mangoldt needs n >= 1, got {n}")
    p = prime_power_base(n)
    return math.log(p) if p is not None else 0.0


def mangoldt_table(n_max: int) -> CoeffTable:
    """Lambda(n) for n <= n_max, by sieving prime powers."""
    values = np.zeros(n_max, dtype=np.float64)
    for p in prime_sieve(n_max).tolist():
        lp = math.log(p)
        q = p
        while q <= n_max:
            values[q - 1] = lp
            q *= p
    return CoeffTable(n_max, values, FLOATING)


def smoothed_mangoldt_table(N: int) -> CoeffTable:
    """Lambda_N(n) on 1..N^2.

    Lambda_N(n) = Lambda(n) for n <= N and Lambda(n) (2 - log n / log N) for
    N < n <= N^2, so the weight tapers linearly in log n to 0 at n = N^2.
    """
    if N < 2:
        raise ValueError(f"smoothed_mangoldt_table needs N >= 2, got {N}")
    n_max = N * N
    lam = mangoldt_table(n_max).values.copy()
    n = np.arange(1, n_max + 1)
    taper = n > N
    lam[taper] *= 2.0 - np.log(n[taper]) / math.log(N)
    lam[n_max - 1] = 0.0  # weight is exactly 0 at n = N^2
    np.clip(lam, 0.0, None, out=lam)
    return CoeffTable(n_max, lam, FLOATING)


# --- Dirichlet convolution ---------------------------------------------------


@njit(cache=True)
def _convolve_int(a, b):
    n_max = a.shape[0]
    out = np.zeros(n_max, dtype=np.int64)
    for m in range(1, n_max + 1):
        am = a[m - 1]
        if am == 0:
            continue
        for q in range(1, n_max // m + 1):
            bq = b[q - 1]
            if bq == 0:
                continue
            if abs(am) > _INT64_MAX // abs(bq):
                raise OverflowError("Dirichlet convolution overflows int64")
            prod = am * bq
            cur = out[m * q - 1]
            if (prod > 0 and cur > _INT64_MAX - prod) or (
                prod < 0 and cur < -_INT64_MAX - prod
            ):
                raise OverflowError("Dirichlet convolution overflows int64")
            out[m * q - 1] = cur + prod
    return out


@njit(cache=True)
def _convolve_float(a, b):
    n_max = a.shape[0]
    out = np.zeros(n_max, dtype=np.float64)
    for m in range(1, n_max + 1):
        am = a[m - 1]
        if am == 0.0:
            continue
        for q in range(1, n_max // m + 1):
            out[m * q - 1] += am * b[q - 1]
    return out


def dirichlet_convolve(a: CoeffTable, b: CoeffTable) -> CoeffTable:
    """(a * b)(n) = sum over m | n of a(m) b(n/m)."""
    if a.n_max != b.n_max:
        raise ValueError(f"n_max mismatch: {a.n_max} != {b.n_max}")
    if a.kind == EXACT and b.kind == EXACT:
        return CoeffTable(a.n_max, _convolve_int(a.values, b.values), EXACT)
    out = _convolve_float(a.values.astype(np.float64), b.values.astype(np.float64))
    return CoeffTable(a.n_max, out, FLOATING)


def divisor_table(k: int, n_max: int) -> CoeffTable:
    """Exact d_k(n) for n <= n_max.

    Built as the (k-1)-fold convolution of the all-ones table with itself;
    raises OverflowError if a value would not fit in int64.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ones = ones_table(n_max)
    table = ones
    for _ in range(k - 1):
        table = dirichlet_convolve(table, ones)
    return table


# --- Dirichlet exponential / logarithm ----------------------------------------


@njit(cache=True)
def _dirichlet_exp(a):
    n_max = a.shape[0]
    b = np.zeros(n_max)
    acc = np.zeros(n_max)
    b[0] = 1.0
    # weights a(d) log d, nonzero support only
    support = np.flatnonzero(a[1:]) + 2
    wts = np.empty(support.shape[0])
    for i in range(support.shape[0]):
        d = support[i]
        wts[i] = a[d - 1] * np.log(d)
    for n in range(1, n_max + 1):
        if n > 1:
            b[n - 1] = acc[n - 1] / np.log(n)
        bn = b[n - 1]
        if bn == 0.0:
            continue
        lim = n_max // n
        for i in range(support.shape[0]):
            d = support[i]
            if d > lim:
                break
            acc[n * d - 1] += wts[i] * bn
    return b


def dirichlet_exp(a: CoeffTable) -> CoeffTable:
    """Coefficients b with exp(sum a(n) n^-s) = sum b(n) n^-s, truncated.

    Uses the log-derivative recurrence
    b(n) log n = sum over d | n, d > 1 of a(d) log d b(n/d), with b(1) = 1.
    """
    if a.values[0] != 0:
        raise ValueError("dirichlet_exp needs a(1) = 0")
    return CoeffTable(a.n_max, _dirichlet_exp(a.values.astype(np.float64)), FLOATING)


@njit(cache=True)
def _dirichlet_log(b):
    n_max = b.shape[0]
    a = np.zeros(n_max)
    # acc[n] collects sum over 1 < d < n, d | n of a(d) log d b(n/d)
    acc = np.zeros(n_max)
    for n in range(2, n_max + 1):
        ln = np.log(n)
        a[n - 1] = (b[n - 1] * ln - acc[n - 1]) / ln
        w = a[n - 1] * ln
        if w == 0.0:
            continue
        for q in range(2, n_max // n + 1):
            acc[n * q - 1] += w * b[q - 1]
    return a


def dirichlet_log(b: CoeffTable) -> CoeffTable:
    """Inverse of :func:`dirichlet_exp` on tables with b(1) = 1."""
    if b.values[0] != 1:
        raise ValueError("dirichlet_log needs b(1) = 1")
    return CoeffTable(b.n_max, _dirichlet_log(b.values.astype(np.float64)), FLOATING)
