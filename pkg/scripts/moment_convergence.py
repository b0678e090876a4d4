"""M_k(sigma, T) / T against T on one long line, next to the limit
sum d_k(n)^2 n^{-2 sigma}.

    python3 scripts/moment_convergence.py --k 2 --sigma 0.8 --T 1e5 --h 0.02
"""

from __future__ import annotations

import argparse
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from zetamoments import TGrid, dk_series, moment, zeta_line
from zetamoments.cli import CsvTable, emit_csv


@dataclass
class Config:
    k: int = 1
    sigma: float = 0.75
    T: float = 1e5
    h: float = 0.01
    windows: int = 12
    out: str = "runs/moment_convergence"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in asdict(Config()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    cfg = Config(**vars(ap.parse_args(argv)))

    t0 = time.time()
    z = zeta_line(TGrid(cfg.sigma, 1.0, cfg.T, cfg.h), 1e-8)
    print(f"zeta line: {z.grid.count} points in {time.time() - t0:.1f}s")
    limit = dk_series(cfg.k, cfg.sigma)
    rows = []
    for T in np.geomspace(cfg.T / 2 ** (cfg.windows - 1), cfg.T, cfg.windows):
        if T < 10:
            continue
        r = moment(cfg.k, z.prefix(T))
        rows.append((T, r.value, limit, r.value / limit - 1.0))
        print(f"T={T:11.1f}  M_k/T={r.value:.6f}  limit={limit:.6f}  rel={r.value / limit - 1:+.4f}")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    emit_csv(CsvTable(("T", "M_k_over_T", "limit", "rel_dev"), rows), out / f"moments_k{cfg.k}_s{cfg.sigma}.csv")


if __name__ == "__main__":
    main()
