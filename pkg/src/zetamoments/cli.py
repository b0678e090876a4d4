"""Experiment runner.

    zetamoments <experiment> [--config FILE] [--k K] [--sigma S] [--T T] ...

Experiments: moments, fourier, besicovitch, phase, zero-one, constants, mass,
identity. Each run writes ``summary.json`` (resolved config, input hash,
results) and CSV tables into ``--out``; the summary is also printed to stdout.
Config files are flat ``key = value`` lines; command-line flags override them.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .approximants import PhaseSeries, pn_exponent_line, theta_p_line, write_phase_csv
from .constants import dk_series, dk_partial_sum, moment_prediction
from .meanvalue import besicovitch_dist2, fourier_coeff, moment
from .series import LineSeries, TGrid, write_line_csv
from .stats import (
    Histogram,
    density_profile,
    masked_fraction,
    mass_on_set,
    phase_exceedance,
    sin2_identity_terms,
    write_histogram_csv,
    zero_one_ratio,
)
from .zeros import ZeroTable, bundled_zero_table, count_zeros, load_zero_table, neighborhoods
from .zeta_eval import default_step, zeta_line

EXPERIMENTS = ("moments", "fourier", "besicovitch", "phase", "zero-one", "constants", "mass", "identity")
NEEDS_ZEROS = ("phase", "mass")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    experiment: str
    k: int = 1
    sigma: float = 0.75
    T: float = 1e4
    t0: float = 1.0
    h: float | None = None
    N: list = field(default_factory=lambda: [10])
    n: list = field(default_factory=lambda: [1, 2, 3])
    eps: float = 0.5
    delta: float = 0.05
    zeros: str | None = None
    out: str | None = None
    threads: int = 1
    chunk: int = 1 << 16
    tol: float = 1e-8
    bins: int = 50
    save_series: bool = False

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not 0 < self.sigma <= 1:
            raise ConfigError(f"sigma must lie in (0, 1], got {self.sigma}")
        if self.t0 < 1:
            raise ConfigError(f"t0 must be >= 1, got {self.t0}")
        if not self.T > self.t0:
            raise ConfigError(f"T must exceed t0, got T={self.T}, t0={self.t0}")
        if self.h is not None and not self.h > 0:
            raise ConfigError(f"h must be positive, got {self.h}")
        if not self.N or any(v < 0 for v in self.N):
            raise ConfigError(f"N must be a non-empty list of integers >= 0, got {self.N}")
        if self.experiment in ("phase", "zero-one", "identity") and min(self.N) < 2:
            raise ConfigError(f"{self.experiment} builds P_N and needs N >= 2, got {self.N}")
        if not self.n or any(v < 1 for v in self.n):
            raise ConfigError(f"n must be a non-empty list of positive integers, got {self.n}")
        if not self.eps > 0 or not self.delta > 0:
            raise ConfigError("eps and delta must be positive")
        if self.threads < 1 or self.chunk < 1 or self.bins < 1:
            raise ConfigError("threads, chunk and bins must be positive")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.experiment in NEEDS_ZEROS and not self.zeros:
            raise ConfigError(f"experiment {self.experiment!r} needs a zero table (--zeros PATH or 'bundled')")

    def n_max_downstream(self) -> int:
        """Largest n whose frequency log n the experiment resolves."""
        if self.experiment == "fourier":
            return max(self.n)
        if self.experiment in ("phase", "zero-one", "identity"):
            return max(self.N) ** 2
        return max(max(self.N), 2)

    def resolved_h(self) -> float:
        return self.h if self.h is not None else default_step(self.n_max_downstream())

    def grid(self) -> TGrid:
        return TGrid(self.sigma, self.t0, self.T, self.resolved_h())

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["h"] = self.resolved_h()
        return d


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _int_list(text: str) -> list:
    try:
        return [int(float(x)) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of integers, got {text!r}") from None


def _coerce(key: str, value):
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    if value is None:
        return None
    try:
        if key in ("N", "n"):
            return _int_list(value)
        if key in ("k", "threads", "chunk", "bins"):
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if key in ("sigma", "T", "t0", "h", "eps", "delta", "tol"):
            return float(value)
        if key == "save_series":
            if isinstance(value, bool):
                return value
            if str(value).lower() in ("1", "true", "yes"):
                return True
            if str(value).lower() in ("0", "false", "no"):
                return False
            raise ValueError
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return str(value)


def read_config_file(path) -> dict:
    """Flat ``key = value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for i, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{i}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetamoments", description="zeta moment experiments")
    p.add_argument("experiment", nargs="?", help="|".join(EXPERIMENTS))
    p.add_argument("--config", help="flat key = value file")
    for name in ("k", "sigma", "T", "t0", "h", "N", "n", "eps", "delta", "zeros", "out",
                 "threads", "chunk", "tol", "bins", "save_series"):
        p.add_argument(f"--{name}", dest=name, default=None)
    return p


def resolve_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = read_config_file(args.config) if args.config else {}
    for key, raw in vars(args).items():
        if key in ("config", "experiment") or raw is None:
            continue
        values[key] = _coerce(key, raw)
    experiment = args.experiment or values.pop("experiment", None)
    values.pop("experiment", None)
    if experiment is None:
        raise ConfigError("no experiment given")
    cfg = RunConfig(experiment=experiment, **values)
    cfg.validate()
    return cfg


# --- output -----------------------------------------------------------------------


@dataclass(frozen=True)
class CsvTable:
    columns: tuple
    rows: list


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def emit_csv(obj, path) -> Path:
    """Write a LineSeries, PhaseSeries, Histogram or CsvTable as CSV."""
    path = Path(path)
    if isinstance(obj, LineSeries):
        write_line_csv(obj, path)
    elif isinstance(obj, PhaseSeries):
        write_phase_csv(obj, path)
    elif isinstance(obj, Histogram):
        write_histogram_csv(obj, path)
    elif isinstance(obj, CsvTable):
        with path.open("w", newline="\n") as fh:
            fh.write(",".join(obj.columns) + "\n")
            for row in obj.rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        raise TypeError(f"cannot emit {type(obj).__name__} as CSV")
    return path


def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def input_hash(cfg: RunConfig) -> str:
    """Hash of everything that determines the results (not out/threads)."""
    d = cfg.as_dict()
    for key in ("out", "threads", "save_series"):
        d.pop(key)
    h = hashlib.sha256(json.dumps(d, sort_keys=True).encode())
    if cfg.zeros:
        if cfg.zeros == "bundled":
            h.update(bundled_zero_table().ordinates.tobytes())
        else:
            h.update(_sha256_file(cfg.zeros).encode())
    h.update(__version__.encode())
    return h.hexdigest()


# --- experiments --------------------------------------------------------------------


class Run:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out or f"runs/{cfg.experiment}")
        self.files: list[str] = []
        self._zeta = None
        self._zeros = None

    def emit(self, obj, name: str) -> None:
        emit_csv(obj, self.out / name)
        self.files.append(name)

    @property
    def zeta(self) -> LineSeries:
        if self._zeta is None:
            c = self.cfg
            self._zeta = zeta_line(c.grid(), c.tol, c.chunk, c.threads)
            if c.save_series:
                self.emit(self._zeta, "zeta.csv")
        return self._zeta

    @property
    def zeros(self) -> ZeroTable:
        if self._zeros is None:
            c = self.cfg
            try:
                z = bundled_zero_table() if c.zeros == "bundled" else load_zero_table(c.zeros)
            except OSError as exc:
                raise ConfigError(f"cannot read zero table {c.zeros}: {exc}") from None
            if z.ordinates[-1] < c.T - 1.0:
                raise ConfigError(
                    f"zero table ends at {z.ordinates[-1]:.3f}, short of T={c.T:g}; masks would be incomplete"
                )
            self._zeros = z
        return self._zeros

    def zero_mask(self):
        c = self.cfg
        return neighborhoods(self.zeros, c.delta, (c.t0, c.T))

    # each returns a JSON-able results dict

    def constants(self) -> dict:
        c = self.cfg
        res = moment_prediction(c.k).as_dict()
        if 0.5 < c.sigma < 1:
            res["dk_series"] = dk_series(c.k, c.sigma)
            res["sigma"] = c.sigma
        return res

    def moments(self) -> dict:
        c = self.cfg
        rec = moment(c.k, self.zeta)
        res = {"moment": rec.as_dict(), "M_k": rec.extra["integral"], "M_k_over_T": rec.value}
        if 0.5 < c.sigma < 1:
            res["limit_dk_series"] = dk_series(c.k, c.sigma)
        self.emit(density_profile(c.k, self.zeta, c.bins), "density.csv")
        return res

    def fourier(self) -> dict:
        c = self.cfg
        from .arith import divisor_table

        d = divisor_table(c.k, max(c.n)).values
        zk = self.zeta if c.k == 1 else LineSeries(self.zeta.grid, self.zeta.samples**c.k)
        rows, recs = [], []
        for n in c.n:
            lam = -math.log(n)
            rec = fourier_coeff(zk, lam)
            pred = float(d[n - 1]) * n**-c.sigma
            recs.append({"n": n, "predicted": pred, **rec.as_dict()})
            rows.append((n, lam, rec.value.real, rec.value.imag, pred, rec.error_proxy))
        self.emit(CsvTable(("n", "lambda", "re", "im", "predicted", "error_proxy"), rows), "fourier.csv")
        return {"coefficients": recs}

    def besicovitch(self) -> dict:
        c = self.cfg
        rows, recs = [], []
        for N in c.N:
            rec = besicovitch_dist2(c.k, N, self.zeta)
            pred = None
            if 0.5 < c.sigma < 1:
                pred = dk_series(c.k, c.sigma) - dk_partial_sum(c.k, c.sigma, N)
            recs.append({"N": N, "predicted_tail": pred, **rec.as_dict()})
            rows.append((N, rec.value, rec.error_proxy, "" if pred is None else pred))
        self.emit(CsvTable(("N", "dist2", "error_proxy", "predicted_tail"), rows), "besicovitch.csv")
        return {"distances": recs}

    def _pn_theta(self, N: int) -> PhaseSeries:
        c = self.cfg
        grid = self.zeta.grid
        if not grid.nyquist_ok(math.log(N * N)):
            raise ConfigError(f"h={grid.h:g} does not resolve log(N^2) for N={N}")
        return theta_p_line(N, 1, grid, pn_exponent_line(N, grid, c.chunk, c.threads))

    def phase(self) -> dict:
        from .stats import z_phase

        c = self.cfg
        mask = self.zero_mask()
        rows, out = [], []
        for N in c.N:
            theta_z = PhaseSeries(self.zeta.grid, z_phase(self.zeta, self._pn_theta(N)), mask, f"theta_Z_{N}")
            frac = phase_exceedance(theta_z, c.eps)
            mf = masked_fraction(theta_z)
            out.append({"N": N, "exceedance": frac, "masked_fraction": mf})
            rows.append((N, frac, mf))
            if c.save_series:
                self.emit(theta_z, f"theta_Z_N{N}.csv")
        self.emit(CsvTable(("N", "exceedance", "masked_fraction"), rows), "phase.csv")
        return {"eps": c.eps, "delta": c.delta, "zeros_below_T": count_zeros(self.zeros, c.T),
                "mask_measure": mask.total_measure, "exceedance": out}

    def zero_one(self) -> dict:
        c = self.cfg
        mask = self.zero_mask() if c.zeros else None
        rows, recs = [], []
        for N in c.N:
            rec = zero_one_ratio(c.k, N, self.zeta, self._pn_theta(N), mask)
            recs.append({"N": N, **rec.as_dict()})
            rows.append((N, rec.value, rec.error_proxy))
        self.emit(CsvTable(("N", "ratio", "error_proxy"), rows), "zero_one.csv")
        return {"ratios": recs}

    def identity(self) -> dict:
        c = self.cfg
        mask = self.zero_mask() if c.zeros else None
        rows, recs = [], []
        for N in c.N:
            grid = self.zeta.grid
            ell = pn_exponent_line(N, grid, c.chunk, c.threads)
            pn = LineSeries(grid, np.exp(ell), f"P_{N}")
            r = sin2_identity_terms(c.k, self.zeta, pn, theta_p_line(N, 1, grid, ell), mask)
            recs.append({"N": N, "residual": r.residual, "moment": r.moment, "relative": r.relative})
            rows.append((N, r.residual, r.moment, r.relative))
        self.emit(CsvTable(("N", "residual", "moment", "relative"), rows), "identity.csv")
        return {"residuals": recs}

    def mass(self) -> dict:
        c = self.cfg
        S = self.zero_mask()
        frac = mass_on_set(self.zeta, S)
        self.emit(density_profile(c.k, self.zeta, c.bins), "density.csv")
        return {"delta": c.delta, "mass_fraction": frac, "set_measure": S.total_measure,
                "set_density": S.total_measure / (c.T - c.t0),
                "zeros_below_T": count_zeros(self.zeros, c.T)}

    def execute(self) -> dict:
        self.out.mkdir(parents=True, exist_ok=True)
        results = getattr(self, self.cfg.experiment.replace("-", "_"))()
        summary = {
            "experiment": self.cfg.experiment,
            "version": __version__,
            "config": self.cfg.as_dict(),
            "input_hash": input_hash(self.cfg),
            "results": results,
            "files": sorted(self.files),
        }
        (self.out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True, default=_json_default) + "\n")
        return summary


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def run_experiment(cfg: RunConfig) -> dict:
    cfg.validate()
    return Run(cfg).execute()


def _error(kind: str, msg: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": msg}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
        t_start = time.time()
        summary = run_experiment(cfg)
    except ConfigError as exc:
        return _error("config", str(exc), 2)
    except SystemExit as exc:  # argparse usage errors, or --help
        if not exc.code:
            return 0
        return _error("usage", f"invalid command line (argparse exit {exc.code})", 2)
    except (ValueError, OSError) as exc:
        return _error(type(exc).__name__, str(exc), 1)
    print(json.dumps(summary, indent=2, sort_keys=True, default=_json_default))
    print(f"[{cfg.experiment}] done in {time.time() - t_start:.1f}s -> {Path(cfg.out or 'runs/' + cfg.experiment)}",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
