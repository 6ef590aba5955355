"""Switching angles and THD against modulation index for both operating
modes, on a fine demand grid. Output is plot-ready CSV."""

import argparse
import csv
from pathlib import Path

import numpy as np

from she_chb.core import InverterConfig
from she_chb.harmonics import thd
from she_chb.solver import PsoParams, solve, solve_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--out", type=Path, default=Path("results/angles_vs_m.csv"))
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    cfg = InverterConfig(2, 200.0)
    ms = np.round(np.arange(args.step, 1.0 + 1e-9, args.step), 10).tolist()
    conventional = solve_sweep(ms, cfg, PsoParams(), workers=args.workers)
    unity = solve(1.0, cfg)
    unity_thd = 100 * thd(unity.angles)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vo_pu", "conv_theta1", "conv_theta2", "conv_thd_percent",
                    "prop_theta1", "prop_theta2", "prop_dc_link_volts", "prop_thd_percent"])
        for m, r in zip(ms, conventional):
            w.writerow([m, r.angles[0], r.angles[1], 100 * thd(r.angles),
                        unity.angles[0], unity.angles[1], m * cfg.v_dc, unity_thd])
    print(f"wrote {len(ms)} rows to {args.out}")


if __name__ == "__main__":
    main()
