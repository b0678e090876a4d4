"""Zero ordinates of zeta on the critical line and the interval sets built
around them.

Ordinates are ingested from a plain-text table (one decimal per line, ``#``
comments allowed). A Hardy Z sign-change scanner is provided only to validate
such tables against the evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.optimize import brentq
from scipy.special import loggamma

from .series import TGrid
from .zeta_eval import zeta_line, zeta_point

DEFAULT_DELTA = 0.05
FIRST_ZERO_FLOOR = 14.0
BUNDLED_TABLE = "zeros_to_1e4.txt"


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint half-open intervals [a, b), kept sorted and merged."""

    intervals: tuple = ()

    def __post_init__(self):
        merged: list[list[float]] = []
        for a, b in sorted((float(a), float(b)) for a, b in self.intervals if b > a):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @property
    def total_measure(self) -> float:
        return math.fsum(b - a for a, b in self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def clip(self, lo: float, hi: float) -> "IntervalSet":
        return IntervalSet(tuple((max(a, lo), min(b, hi)) for a, b in self.intervals))

    def indicator(self, t: np.ndarray, right_closed_at: float | None = None) -> np.ndarray:
        """True where t lies in the set.

        ``right_closed_at`` additionally admits points equal to that value when
        they are the right end of an interval (so a set covering [t0, t1]
        contains the last grid point t1).
        """
        t = np.asarray(t, dtype=np.float64)
        if not self.intervals:
            return np.zeros(t.shape, dtype=bool)
        starts = np.array([a for a, _ in self.intervals])
        ends = np.array([b for _, b in self.intervals])
        idx = np.searchsorted(starts, t, side="right") - 1
        ok = idx >= 0
        inside = np.zeros(t.shape, dtype=bool)
        inside[ok] = t[ok] < ends[idx[ok]]
        if right_closed_at is not None:
            edge = (t == right_closed_at) & ok
            inside[edge] |= t[edge] <= ends[idx[edge]]
        return inside


# --- zero tables ----------------------------------------------------------------


class ZeroTableError(ValueError):
    """Base class for zero-table ingestion failures."""


class EmptyZeroTableError(ZeroTableError):
    pass


class ZeroTableParseError(ZeroTableError):
    pass


class NonMonotoneZerosError(ZeroTableError):
    pass


class ZeroTableRangeError(ZeroTableError):
    pass


@dataclass(frozen=True)
class ZeroTable:
    """Strictly increasing ordinates gamma_1 < gamma_2 < ... of zeros 1/2 + i gamma."""

    ordinates: np.ndarray
    source: str = ""

    def __post_init__(self):
        o = self.ordinates
        if o.size == 0:
            raise EmptyZeroTableError(f"no ordinates in {self.source or 'table'}")
        steps = np.diff(o)
        if np.any(steps <= 0):
            i = int(np.flatnonzero(steps <= 0)[0])
            raise NonMonotoneZerosError(
                f"{self.source}: ordinates not strictly increasing at entry {i + 2} "
                f"({o[i]!r} then {o[i + 1]!r})"
            )
        if o[0] <= FIRST_ZERO_FLOOR:
            raise ZeroTableRangeError(
                f"{self.source}: first ordinate {o[0]!r} is below the floor {FIRST_ZERO_FLOOR}"
            )
        o.setflags(write=False)

    def __len__(self) -> int:
        return self.ordinates.size

    def up_to(self, T: float) -> np.ndarray:
        return self.ordinates[: count_zeros(self, T)]


def parse_zero_lines(lines: Iterable[str], source: str = "") -> ZeroTable:
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))  # correctly rounded decimal -> double
        except ValueError:
            raise ZeroTableParseError(f"{source}:{lineno}: cannot parse {line!r}") from None
        if not math.isfinite(values[-1]):
            raise ZeroTableParseError(f"{source}:{lineno}: non-finite ordinate {line!r}")
    return ZeroTable(np.array(values, dtype=np.float64), source)


def load_zero_table(path) -> ZeroTable:
    """Parse and validate a zero-ordinate file."""
    path = Path(path)
    with path.open() as fh:
        return parse_zero_lines(fh, str(path))


def bundled_zero_table() -> ZeroTable:
    """The table shipped with the package (all ordinates up to 10^4)."""
    ref = resources.files("zetamoments") / "data" / BUNDLED_TABLE
    with ref.open() as fh:
        return parse_zero_lines(fh, f"zetamoments/data/{BUNDLED_TABLE}")


def count_zeros(z: ZeroTable, T: float) -> int:
    """#{gamma <= T}."""
    return int(np.searchsorted(z.ordinates, T, side="right"))


def neighborhoods(z: ZeroTable, delta: float = DEFAULT_DELTA,
                  t_range: tuple[float, float] | None = None) -> IntervalSet:
    """Union of (gamma - delta, gamma + delta), clipped to t_range and merged."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    g = z.ordinates
    if t_range is not None:
        lo, hi = t_range
        g = g[(g + delta > lo) & (g - delta < hi)]
    sets = IntervalSet(tuple(zip((g - delta).tolist(), (g + delta).tolist())))
    return sets.clip(*t_range) if t_range is not None else sets


# --- validation ---------------------------------------------------------------------


def siegel_theta(t: np.ndarray) -> np.ndarray:
    """theta(t) = arg Gamma(1/4 + i t / 2) - (t / 2) log pi (continuous branch)."""
    t = np.asarray(t, dtype=np.float64)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def hardy_z(t: np.ndarray, zeta_values: np.ndarray) -> np.ndarray:
    """Z(t) = exp(i theta(t)) zeta(1/2 + i t), real on the critical line."""
    return np.real(np.exp(1j * siegel_theta(t)) * zeta_values)


def scan_zero_ordinates(t0: float, t1: float, h: float = 0.01, tol: float = 1e-10,
                        xtol: float = 1e-11) -> np.ndarray:
    """Sign changes of Hardy's Z on [t0, t1], refined by Brent's method.

    Zeros closer together than h can be missed; compare the count against a
    reference N(T) before trusting the output.
    """
    grid = TGrid(0.5, t0, t1, h)
    t = grid.t
    z = hardy_z(t, zeta_line(grid, tol).samples)
    flips = np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)

    def Z(x):
        return float(hardy_z(np.array([x]), np.array([zeta_point(0.5 + 1j * x, tol)]))[0])

    return np.array([brentq(Z, t[i], t[i + 1], xtol=xtol) for i in flips])


def local_minima_check(z: ZeroTable, t_max: float = 1e3, halfwidth: float = DEFAULT_DELTA,
                       step: float = 1e-4) -> np.ndarray:
    """min |zeta(1/2 + i t)| over a fine grid on [gamma - halfwidth, gamma + halfwidth]
    for every tabulated gamma <= t_max."""
    mins = []
    for g in z.up_to(t_max).tolist():
        grid = TGrid(0.5, max(1.0, g - halfwidth), g + halfwidth, step)
        mins.append(float(np.min(np.abs(zeta_line(grid, 1e-10).samples))))
    return np.array(mins)
