"""Phase exceedance and zero-one ratio over a grid of (sigma, N).

Zero neighbourhoods from the bundled table are masked, so T is capped at the
table's range (10^4).

    python3 scripts/phase_sweep.py --T 1e4 --h 0.02 --sigmas 0.6,0.75,0.9 --Ns 10,100,1000
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path

from zetamoments import TGrid, neighborhoods, phase_exceedance, zero_one_ratio, zeta_line
from zetamoments.approximants import PhaseSeries, pn_exponent_line, theta_p_line
from zetamoments.cli import CsvTable, emit_csv
from zetamoments.stats import z_phase
from zetamoments.zeros import bundled_zero_table


@dataclass
class Config:
    T: float = 1e4
    h: float = 0.02
    eps: float = 0.5
    delta: float = 0.05
    sigmas: list = field(default_factory=lambda: [0.6, 0.75, 0.9])
    Ns: list = field(default_factory=lambda: [10, 100, 1000])
    out: str = "runs/phase_sweep"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=Config.T)
    ap.add_argument("--h", type=float, default=Config.h)
    ap.add_argument("--eps", type=float, default=Config.eps)
    ap.add_argument("--delta", type=float, default=Config.delta)
    ap.add_argument("--sigmas", default="0.6,0.75,0.9")
    ap.add_argument("--Ns", default="10,100,1000")
    ap.add_argument("--out", default=Config.out)
    a = ap.parse_args(argv)
    cfg = Config(a.T, a.h, a.eps, a.delta, [float(s) for s in a.sigmas.split(",")],
                 [int(n) for n in a.Ns.split(",")], a.out)

    zeros = bundled_zero_table()
    mask = neighborhoods(zeros, cfg.delta, (1.0, cfg.T))
    rows = []
    for sigma in cfg.sigmas:
        t0 = time.time()
        g = TGrid(sigma, 1.0, cfg.T, cfg.h)
        z = zeta_line(g, 1e-8)
        for N in cfg.Ns:
            th = theta_p_line(N, 1, g, pn_exponent_line(N, g))
            ex = phase_exceedance(PhaseSeries(g, z_phase(z, th), mask), cfg.eps)
            zo = zero_one_ratio(1, N, z, th, mask).value
            rows.append((sigma, N, ex, zo))
            print(f"sigma={sigma:.2f} N={N:5d}  exceedance={ex:.3e}  zero-one={zo:.3e}")
        print(f"  ({time.time() - t0:.1f}s)")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    emit_csv(CsvTable(("sigma", "N", "exceedance", "zero_one"), rows), out / "phase_sweep.csv")


if __name__ == "__main__":
    main()
