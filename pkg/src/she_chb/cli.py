"""Command-line entry point.

Exit codes: 0 ok, 2 usage or validation, 3 infeasible demand or solver
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .core import (
    MODES,
    InfeasibleDemandError,
    InverterConfig,
    RectifierConfig,
    SheError,
    SolverFailure,
    validate_angles,
)
from .dclink import full_output_v_s, regulate
from .harmonics import DEFAULT_MAX_ORDER, spectrum, spectrum_csv, thd
from .lut import build_lut, serialize_lut, with_mode
from .solver import PsoParams, solve

TABLE_DEMANDS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4


class _IOFailure(Exception):
    pass


def _env(name: str, default, cast):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"error: environment variable {name}={raw!r} is not a valid {cast.__name__}")


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vdc", type=float, default=_env("SHE_VDC", 200.0, float),
                   help="volts per isolated dc source (env SHE_VDC, default 200)")
    p.add_argument("--sources", type=int, default=2, help="number of dc sources (default 2)")


def _add_pso_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=_env("SHE_SEED", 0, int),
                   help="base RNG seed (env SHE_SEED, default 0)")
    p.add_argument("--swarm", type=int, default=PsoParams.swarm_size)
    p.add_argument("--iters", type=int, default=PsoParams.max_iters)
    p.add_argument("--fundamental-weight", type=float, default=PsoParams.fundamental_weight,
                   help="weight of the fundamental-error term; 1 gives the unweighted cost")


def _params(args) -> PsoParams:
    if args.seed < 0:
        raise SheError("--seed must be non-negative")
    return PsoParams(
        swarm_size=args.swarm, max_iters=args.iters, seed=args.seed,
        fundamental_weight=args.fundamental_weight,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="she-chb",
        description="Switching angles, harmonics and dc-link regulation for a cascaded H-bridge inverter.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="PSO switching angles for one modulation index")
    p.add_argument("--m", type=float, required=True, help="modulation index, per unit of N*v_dc")
    _add_system_flags(p)
    _add_pso_flags(p)
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="write a LUT CSV over a demand range")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=MODES, default=None, help="default: both modes")
    p.add_argument("--vs", type=float, default=None,
                   help="rectifier secondary voltage (default: pi*v_dc/3, full output at alpha=0)")
    _add_system_flags(p)
    _add_pso_flags(p)
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="harmonic spectrum CSV of a staircase")
    p.add_argument("--angles", required=True, help="comma-separated degrees, e.g. 4.96,54.97")
    p.add_argument("--vdc", type=float, default=_env("SHE_VDC", 200.0, float))
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout (default)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("regulate", help="dc-link voltage and firing angle for a demand")
    p.add_argument("--vo-pu", type=float, required=True)
    p.add_argument("--vdc", type=float, default=_env("SHE_VDC", 200.0, float))
    p.add_argument("--vs", type=float, required=True)
    p.add_argument("--sources", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_regulate)

    p = sub.add_parser("compare", help="THD of conventional vs adjustable dc-link operation")
    p.add_argument("--out", default=None, help="also write the LUT CSV here")
    p.add_argument("--vs", type=float, default=None)
    _add_system_flags(p)
    _add_pso_flags(p)
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_compare)
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _rect(args, config: InverterConfig) -> RectifierConfig:
    return RectifierConfig(v_s=args.vs if args.vs is not None else full_output_v_s(config))


def _demand_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise SheError("step must be > 0")
    if start > stop:
        raise SheError("from must not exceed to")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def cmd_solve(args) -> int:
    config = InverterConfig(args.sources, args.vdc)
    res = solve(args.m, config, _params(args))
    ratio = thd(res.angles, args.max_order)
    if args.json:
        print(json.dumps({
            "m": res.target_m,
            "angles_deg": list(res.angles.angles),
            "achieved_pu": res.achieved_pu,
            "residuals_pu": {str(n): v for n, v in res.residuals.items()},
            "cost": res.cost,
            "thd_percent": 100.0 * ratio,
            "iterations": res.iterations,
            "seed": res.seed,
        }))
        return EXIT_OK
    print(f"m            {res.target_m:.4f}")
    print("angles_deg   " + ", ".join(f"{a:.4f}" for a in res.angles))
    print(f"achieved_pu  {res.achieved_pu:.6f}")
    for n, v in res.residuals.items():
        print(f"residual_h{n:<3d}{v:.6f}")
    print(f"cost         {res.cost:.3e}")
    print(f"thd_percent  {100.0 * ratio:.2f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = InverterConfig(args.sources, args.vdc)
    demands = _demand_grid(args.start, args.stop, args.step)
    modes = (args.mode,) if args.mode else MODES
    lut = build_lut(demands, config, _rect(args, config), _params(args),
                    args.max_order, modes=modes, workers=args.workers)
    _write(args.out, serialize_lut(lut))
    worst = max(lut, key=lambda e: e.thd_percent)
    print(f"{len(lut)} rows written to {args.out}; worst THD {worst.thd_percent:.2f}% "
          f"({worst.mode}, vo_pu={worst.vo_pu:g})", file=sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    try:
        raw = [float(a) for a in args.angles.split(",") if a.strip()]
    except ValueError:
        raise SheError(f"cannot parse --angles {args.angles!r}") from None
    angles = validate_angles(raw)
    config = InverterConfig(len(angles), args.vdc)
    spec = spectrum(angles, config, args.max_order)
    _write(args.out, spectrum_csv(spec))
    if args.out != "-":
        dominant = max((n for n in spec.components if n > 1), key=lambda n: spec.components[n])
        print(f"fundamental {spec.fundamental_peak:.2f} V, THD {100 * spec.thd:.2f}%, "
              f"largest harmonic n={dominant} at {spec.components[dominant]:.2f} V")
    return EXIT_OK


def cmd_regulate(args) -> int:
    config = InverterConfig(args.sources, args.vdc)
    rect = RectifierConfig(args.vs)
    e, alpha = regulate(args.vo_pu, config, rect)
    if args.json:
        print(json.dumps({"vo_pu": args.vo_pu, "dc_link_volts": e, "firing_angle_deg": alpha,
                          "v_s": args.vs, "v_dc": args.vdc}))
    else:
        print(f"dc_link_volts     {e:.2f}")
        print(f"firing_angle_deg  {alpha:.2f}")
    return EXIT_OK


def format_comparison(lut) -> str:
    conv = {e.vo_pu: e for e in with_mode(lut, "conventional")}
    prop = {e.vo_pu: e for e in with_mode(lut, "proposed")}
    lines = [f"{'V_o,pu':>7}  {'Conventional':>12}  {'Proposed':>9}"]
    for d in sorted(set(conv) | set(prop), reverse=True):
        c = f"{conv[d].thd_percent:.2f}" if d in conv else "-"
        p = f"{prop[d].thd_percent:.2f}" if d in prop else "-"
        lines.append(f"{d:>7g}  {c:>12}  {p:>9}")
    return "\n".join(lines) + "\n"


def cmd_compare(args) -> int:
    config = InverterConfig(args.sources, args.vdc)
    lut = build_lut(TABLE_DEMANDS, config, _rect(args, config), _params(args),
                    args.max_order, workers=args.workers)
    sys.stdout.write(f"THD (%) at max order {args.max_order}\n")
    sys.stdout.write(format_comparison(lut))
    if args.out:
        _write(args.out, serialize_lut(lut))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    try:
        return args.func(args)
    except InfeasibleDemandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SheError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
