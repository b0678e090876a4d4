"""Build the bundled table of zeta-zero ordinates up to T.

Sign changes of Hardy's Z are located on a fine grid and refined with Brent's
method. The count is checked against mpmath's N(T) and a sample of ordinates
against mpmath.zetazero before the file is written.

    python3 scripts/make_zero_table.py --T 10000 --out src/zetamoments/data/zeros_to_1e4.txt
"""

from __future__ import annotations

import argparse
import time

import mpmath
import numpy as np

from zetamoments.zeros import scan_zero_ordinates


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=1e4)
    ap.add_argument("--h", type=float, default=0.005)
    ap.add_argument("--spot", type=int, default=40, help="ordinates checked against mpmath.zetazero")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="src/zetamoments/data/zeros_to_1e4.txt")
    args = ap.parse_args(argv)

    t_start = time.time()
    gam = scan_zero_ordinates(10.0, args.T, h=args.h)
    print(f"scanned {gam.size} sign changes in {time.time() - t_start:.1f}s")

    expected = int(mpmath.nzeros(args.T))
    if gam.size != expected:
        raise SystemExit(f"count mismatch: scan found {gam.size}, N(T) = {expected}")

    rng = np.random.default_rng(args.seed)
    picks = np.unique(np.concatenate(([0, gam.size - 1], rng.integers(0, gam.size, args.spot))))
    worst = 0.0
    for i in picks.tolist():
        ref = float(mpmath.zetazero(i + 1).imag)
        worst = max(worst, abs(ref - gam[i]))
    print(f"max deviation from mpmath.zetazero over {picks.size} ordinates: {worst:.2e}")
    if worst > 1e-8:
        raise SystemExit("spot check failed")

    with open(args.out, "w", newline="\n") as fh:
        fh.write(f"# ordinates of zeta zeros 1/2 + i gamma, 0 < gamma <= {args.T:g}\n")
        fh.write(f"# {gam.size} entries; Hardy Z sign changes refined by Brent's method\n")
        fh.write(f"# count matches N(T); {picks.size} entries checked against mpmath to {worst:.1e}\n")
        for g in gam.tolist():
            fh.write(f"{g:.12f}\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
