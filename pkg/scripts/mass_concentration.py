"""Share of the mean square of zeta carried by delta-neighbourhoods of the
critical-line zeros, against the density |S|/T of those sets.

    python3 scripts/mass_concentration.py --sigma 0.9 --T 1e4
"""

from __future__ import annotations

import argparse
from dataclasses import asdict, dataclass
from pathlib import Path

from zetamoments import TGrid, mass_on_set, neighborhoods, zeta_line
from zetamoments.cli import CsvTable, emit_csv
from zetamoments.zeros import bundled_zero_table


@dataclass
class Config:
    sigma: float = 0.9
    T: float = 1e4
    h: float = 0.005
    out: str = "runs/mass_concentration"


DELTAS = (0.2, 0.1, 0.05, 0.02, 0.01, 0.005)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in asdict(Config()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    cfg = Config(**vars(ap.parse_args(argv)))

    z = zeta_line(TGrid(cfg.sigma, 1.0, cfg.T, cfg.h), 1e-8)
    zeros = bundled_zero_table()
    rows = []
    for delta in DELTAS:
        S = neighborhoods(zeros, delta, (1.0, cfg.T))
        density = S.total_measure / (cfg.T - 1.0)
        mass = mass_on_set(z, S)
        rows.append((delta, density, mass, mass / density))
        print(f"delta={delta:6.3f}  |S|/T={density:.4e}  mass={mass:.4e}  ratio={mass / density:.3f}")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    emit_csv(CsvTable(("delta", "set_density", "mass", "mass_over_density"), rows), out / "mass.csv")


if __name__ == "__main__":
    main()
