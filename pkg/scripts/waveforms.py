"""Output waveforms and spectra for the 120 V and 240 V cases, in both
operating modes. Writes one waveform CSV and one spectrum CSV per case."""

import argparse
import csv
from pathlib import Path

from she_chb.core import InverterConfig
from she_chb.dclink import required_dc_link
from she_chb.harmonics import fft_thd, spectrum, spectrum_csv, synthesize_waveform, thd
from she_chb.solver import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("results/waveforms"))
    ap.add_argument("--samples", type=int, default=4096)
    ap.add_argument("--max-order", type=int, default=49)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    base = InverterConfig(2, 200.0)
    unity = solve(1.0, base)
    for vo in (0.3, 0.6):
        cases = {
            "conventional": (solve(vo, base).angles, base),
            "proposed": (unity.angles, InverterConfig(2, required_dc_link(vo, base))),
        }
        for mode, (angles, cfg) in cases.items():
            tag = f"{mode}_{vo:g}"
            wave = synthesize_waveform(angles, cfg, args.samples)
            with (args.outdir / f"wave_{tag}.csv").open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["t_over_T", "volts"])
                w.writerows(wave.samples)
            spec = spectrum(angles, cfg, args.max_order)
            (args.outdir / f"spectrum_{tag}.csv").write_text(spectrum_csv(spec))
            print(f"{tag:>18}: angles {angles[0]:7.3f} {angles[1]:7.3f}  levels {wave.levels}  "
                  f"V1 {spec.fundamental_peak:6.1f} V  V3 {spec.components[3]:6.2f} V  "
                  f"THD@199 {100 * thd(angles, 199):6.2f}% (fft {100 * fft_thd(wave, 199):6.2f}%)  "
                  f"THD@999 {100 * thd(angles):6.2f}%")


if __name__ == "__main__":
    main()
