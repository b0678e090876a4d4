"""Vertical-line grids and sampled series on them."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

BINARY_MAGIC = b"ZLS1"
BINARY_VERSION = 1
# magic (4s), version (uint32), count (uint64) -> 16 bytes
_HEADER = struct.Struct("<4sIQ")


class GridMismatchError(ValueError):
    """Two series that must share a grid do not."""


@dataclass(frozen=True)
class TGrid:
    """Uniform samples t_j = t0 + j h, j < count, on the line Re s = sigma.

    ``t0 >= 1`` is enforced unless ``allow_low`` is set (used only for the
    reflection checks on negative t).
    """

    sigma: float
    t0: float
    t1: float
    h: float
    allow_low: bool = False

    def __post_init__(self):
        if not 0.0 < self.sigma <= 2.0:
            raise ValueError(f"sigma must lie in (0, 2], got {self.sigma}")
        if not self.h > 0.0:
            raise ValueError(f"step h must be positive, got {self.h}")
        if not self.t1 > self.t0:
            raise ValueError(f"need t1 > t0, got [{self.t0}, {self.t1}]")
        if self.t0 < 1.0 and not self.allow_low:
            raise ValueError(f"grids start at t0 >= 1, got t0={self.t0}")
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)):
            raise ValueError("grid endpoints must be finite")

    @property
    def count(self) -> int:
        return int(math.floor((self.t1 - self.t0) / self.h + 1e-7)) + 1

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.count)

    @property
    def t_last(self) -> float:
        return self.t0 + self.h * (self.count - 1)

    @property
    def length(self) -> float:
        """Measure of [t0, t_last], the span actually integrated over."""
        return self.h * (self.count - 1)

    def nyquist_ok(self, max_freq: float) -> bool:
        return self.h * abs(max_freq) < math.pi

    def prefix(self, t_end: float) -> "TGrid":
        """Sub-grid sharing t0 and h, keeping points t_j <= t_end."""
        return TGrid(self.sigma, self.t0, min(t_end, self.t1), self.h, self.allow_low)

    def params(self) -> dict:
        return {"sigma": self.sigma, "t0": self.t0, "t1": self.t1, "h": self.h}


def same_grid(a: TGrid, b: TGrid) -> bool:
    return (a.sigma, a.t0, a.h, a.count) == (b.sigma, b.t0, b.h, b.count)


def check_same_grid(*grids: TGrid) -> None:
    for g in grids[1:]:
        if not same_grid(grids[0], g):
            raise GridMismatchError(f"grid mismatch: {grids[0]} vs {g}")


@dataclass(frozen=True)
class LineSeries:
    """Complex samples of a function on a TGrid.

    ``mask`` (an IntervalSet of excluded t) is optional; non-finite samples are
    only allowed at masked points.
    """

    grid: TGrid
    samples: np.ndarray
    label: str = ""
    mask: object = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples.shape != (self.grid.count,):
            raise ValueError(
                f"{len(self.samples)} samples for a grid of {self.grid.count} points"
            )
        bad = ~np.isfinite(self.samples)
        if bad.any():
            if self.mask is None or not self.mask.indicator(self.grid.t)[bad].all():
                raise ValueError(f"non-finite samples in unmasked part of {self.label!r}")

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    def excluded(self) -> np.ndarray:
        """Boolean array: True where the sample lies in the mask."""
        if self.mask is None:
            return np.zeros(self.grid.count, dtype=bool)
        return self.mask.indicator(self.grid.t)

    def with_mask(self, mask) -> "LineSeries":
        return LineSeries(self.grid, self.samples, self.label, mask, dict(self.meta))

    def prefix(self, t_end: float) -> "LineSeries":
        g = self.grid.prefix(t_end)
        return LineSeries(g, self.samples[: g.count], self.label, self.mask, dict(self.meta))

    def to_csv(self, path) -> None:
        write_line_csv(self, path)

    def to_binary(self, path) -> None:
        write_line_binary(self, path)


def constant_series(grid: TGrid, value: complex, label: str = "constant") -> LineSeries:
    return LineSeries(grid, np.full(grid.count, complex(value)), label)


def pow_line(f: LineSeries, k: int) -> LineSeries:
    """Pointwise k-th power."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        return f
    return LineSeries(f.grid, f.samples**k, f"({f.label})^{k}", f.mask, dict(f.meta))


# --- export ---------------------------------------------------------------


def write_line_csv(series: LineSeries, path) -> None:
    """``t,re,im`` rows with 17 significant digits (round-trips doubles)."""
    t = series.grid.t
    with Path(path).open("w", newline="\n") as fh:
        fh.write("t,re,im\n")
        for tj, z in zip(t.tolist(), series.samples.tolist()):
            fh.write(f"{tj:.17g},{z.real:.17g},{z.imag:.17g}\n")


def read_line_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read back ``t,re,im``; returns (t, samples)."""
    rows = Path(path).read_text().splitlines()[1:]
    if not rows:
        return np.zeros(0), np.zeros(0, dtype=complex)
    data = np.array([[float(x) for x in r.split(",")] for r in rows])
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def write_line_binary(series: LineSeries, path) -> None:
    """16-byte header (magic, version, count) then little-endian f64 pairs."""
    with Path(path).open("wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, BINARY_VERSION, series.grid.count))
        fh.write(series.samples.astype("<c16").tobytes())


def read_line_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    magic, version, count = _HEADER.unpack_from(raw)
    if magic != BINARY_MAGIC or version != BINARY_VERSION:
        raise ValueError(f"{path}: not a line-series file (magic={magic!r}, version={version})")
    body = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    if body.shape[0] != count:
        raise ValueError(f"{path}: header says {count} samples, found {body.shape[0]}")
    return body.astype(np.complex128)
