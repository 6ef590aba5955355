"""Operating look-up table: conventional vs. adjustable-dc-link entries.

CSV layout (header is fixed)::

    vo_pu,mode,theta1_deg,theta2_deg,dc_link_volts,firing_angle_deg,thd_percent

Floats are written with ``repr`` so a table survives a round trip
unchanged. An empty ``firing_angle_deg`` marks a demand the rectifier
cannot reach.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Optional, Sequence

from .core import (
    CONVENTIONAL,
    MODES,
    PROPOSED,
    InfeasibleDemandError,
    InverterConfig,
    LutEntry,
    RectifierConfig,
    SheError,
    validate_angles,
)
from .dclink import firing_angle, required_dc_link
from .harmonics import DEFAULT_MAX_ORDER, thd
from .solver import PsoParams, SolveResult, solve, solve_sweep

LUT_COLUMNS = (
    "vo_pu",
    "mode",
    "theta1_deg",
    "theta2_deg",
    "dc_link_volts",
    "firing_angle_deg",
    "thd_percent",
)


class LutParseError(SheError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[str] = None):
        self.line = line
        self.column = column
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class EmptyTableError(SheError):
    pass


def _firing_or_none(e: float, rect: RectifierConfig) -> Optional[float]:
    try:
        return firing_angle(e, rect)
    except InfeasibleDemandError:
        return None


def _sort_key(entry: LutEntry):
    return (entry.vo_pu, entry.mode)


def build_lut(
    demands: Sequence[float],
    config: InverterConfig,
    rect: RectifierConfig,
    params: Optional[PsoParams] = None,
    max_order: int = DEFAULT_MAX_ORDER,
    modes: Iterable[str] = MODES,
    workers: int = 1,
) -> list[LutEntry]:
    """Two rows per demand (one per mode), sorted by demand then mode.

    Proposed rows share a single M = 1 solve (seed ``params.seed``); a
    conventional row at demand 1.0 reuses it too, since it is the same
    problem. Other conventional rows are solved with ``seed + index``.
    """
    params = params or PsoParams()
    modes = tuple(modes)
    demands = [float(d) for d in demands]
    if not demands:
        raise SheError("at least one demand is required")
    for d in demands:
        if not (0.0 < d <= 1.0):
            raise SheError(f"demand {d:g} outside (0, 1]")
    if not set(modes) <= set(MODES) or not modes:
        raise SheError(f"modes must be drawn from {MODES}")

    unity: Optional[SolveResult] = None
    if PROPOSED in modes or 1.0 in demands:
        unity = solve(1.0, config, params)

    entries: list[LutEntry] = []
    if PROPOSED in modes:
        unity_thd = 100.0 * thd(unity.angles, max_order)
        for d in demands:
            e = required_dc_link(d, config)
            entries.append(
                LutEntry(d, PROPOSED, unity.angles, e, _firing_or_none(e, rect), unity_thd)
            )

    if CONVENTIONAL in modes:
        results = solve_sweep(demands, config, params, workers=workers)
        alpha = _firing_or_none(config.v_dc, rect)
        for d, res in zip(demands, results):
            if d == 1.0:
                res = unity
            if isinstance(res, Exception):
                raise res
            entries.append(
                LutEntry(
                    d, CONVENTIONAL, res.angles, config.v_dc, alpha,
                    100.0 * thd(res.angles, max_order),
                )
            )

    entries.sort(key=_sort_key)
    return entries


def lookup(lut: Sequence[LutEntry], vo_pu: float, mode: str) -> LutEntry:
    """Nearest-demand entry of the given mode; ties go to the lower demand."""
    candidates = [e for e in lut if e.mode == mode]
    if not candidates:
        raise EmptyTableError(f"no {mode} entries in table" if lut else "table is empty")
    best = None
    for e in sorted(candidates, key=lambda e: e.vo_pu):
        dist = abs(e.vo_pu - vo_pu)
        # strict improvement beyond rounding noise, so ties stay with the lower demand
        if best is None or dist < best[0] - 1e-12:
            best = (dist, e)
    return best[1]


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def serialize_lut(lut: Sequence[LutEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LUT_COLUMNS)
    for e in sorted(lut, key=_sort_key):
        if len(e.angles) != 2:
            raise SheError("CSV layout holds exactly two angles per row")
        w.writerow([
            _fmt(e.vo_pu), e.mode, _fmt(e.angles[0]), _fmt(e.angles[1]),
            _fmt(e.dc_link_e), _fmt(e.firing_angle_deg), _fmt(e.thd_percent),
        ])
    return buf.getvalue()


def _parse_float(row: dict, col: str, line: int, optional: bool = False) -> Optional[float]:
    raw = row[col]
    if raw is None:
        raise LutParseError(f"missing value for column {col!r}", line, col)
    raw = raw.strip()
    if raw == "" and optional:
        return None
    try:
        return float(raw)
    except ValueError:
        raise LutParseError(f"bad number {raw!r} in column {col!r}", line, col) from None


def load_lut(text) -> list[LutEntry]:
    """Parse the CSV produced by :func:`serialize_lut` (str or bytes)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if not text.strip():
        raise EmptyTableError("LUT file is empty")
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for col in LUT_COLUMNS:
        if col not in header:
            raise LutParseError(f"missing column {col!r}", 1, col)

    entries = []
    for row in reader:
        line = reader.line_num
        if None in row:
            raise LutParseError("too many fields", line)
        try:
            angles = validate_angles([
                _parse_float(row, "theta1_deg", line),
                _parse_float(row, "theta2_deg", line),
            ])
            entries.append(LutEntry(
                vo_pu=_parse_float(row, "vo_pu", line),
                mode=(row["mode"] or "").strip(),
                angles=angles,
                dc_link_e=_parse_float(row, "dc_link_volts", line),
                firing_angle_deg=_parse_float(row, "firing_angle_deg", line, optional=True),
                thd_percent=_parse_float(row, "thd_percent", line),
            ))
        except LutParseError:
            raise
        except SheError as exc:
            raise LutParseError(str(exc), line) from exc
    if not entries:
        raise EmptyTableError("LUT has a header but no rows")
    return entries


def with_mode(lut: Sequence[LutEntry], mode: str) -> list[LutEntry]:
    return [e for e in lut if e.mode == mode]
