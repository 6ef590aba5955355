"""Shared domain types and validation.

Angles are carried in degrees everywhere; conversion to radians happens
only at the point of trigonometric evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

#: Fundamental per-unit output when every angle sits at 0 degrees.
M_MAX = 4.0 / math.pi


class SheError(ValueError):
    """Base class for all domain errors raised by this package."""


class AngleDomainError(SheError):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"angle {value:g} at index {index} out of [0, 90]")


class AngleOrderError(SheError):
    pass


class HarmonicOrderError(SheError):
    pass


class UndefinedTHDError(SheError):
    pass


class SamplingError(SheError):
    pass


class SolverFailure(SheError):
    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InfeasibleDemandError(SheError):
    """Requested dc-link voltage exceeds what the rectifier can produce."""

    def __init__(self, e_target: float, e_max: float, min_v_s: float):
        self.e_target = e_target
        self.e_max = e_max
        self.min_v_s = min_v_s
        super().__init__(
            f"dc-link demand {e_target:.2f} V exceeds rectifier ceiling "
            f"{e_max:.2f} V; need v_s >= {min_v_s:.2f} V"
        )


@dataclass(frozen=True)
class AngleSet:
    """Ascending switching angles of one quarter period, in degrees."""

    angles: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        _check_angles(self.angles)

    def __len__(self) -> int:
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    def __getitem__(self, i):
        return self.angles[i]

    @property
    def radians(self) -> np.ndarray:
        return np.radians(np.asarray(self.angles, dtype=float))

    @property
    def active(self) -> int:
        """Number of angles strictly below 90, i.e. steps that actually switch."""
        return sum(1 for a in self.angles if a < 90.0)


def _check_angles(angles: Sequence[float]) -> None:
    if len(angles) == 0:
        raise SheError("at least one switching angle is required")
    for i, a in enumerate(angles):
        if not (0.0 <= a <= 90.0) or math.isnan(a):
            raise AngleDomainError(i, a)
    for i in range(1, len(angles)):
        prev, cur = angles[i - 1], angles[i]
        if cur < prev:
            raise AngleOrderError(f"angles not ascending at index {i}: {prev:g} > {cur:g}")
        # coincident steps are only meaningful when both are parked at 90
        if cur == prev and cur != 90.0:
            raise AngleOrderError(f"duplicate angle {cur:g} at indices {i - 1} and {i}")


def validate_angles(raw: Iterable[float]) -> AngleSet:
    """Sort and validate raw angles (degrees) into an :class:`AngleSet`.

    Range is checked before sorting so that errors name the index the
    caller actually passed.
    """
    values = [float(a) for a in raw]
    if not values:
        raise SheError("at least one switching angle is required")
    for i, a in enumerate(values):
        if math.isnan(a) or not (0.0 <= a <= 90.0):
            raise AngleDomainError(i, a)
    return AngleSet(tuple(sorted(values)))


@dataclass(frozen=True)
class InverterConfig:
    n_sources: int = 2
    v_dc: float = 200.0

    def __post_init__(self):
        if int(self.n_sources) != self.n_sources or self.n_sources < 1:
            raise SheError(f"n_sources must be a positive integer, got {self.n_sources}")
        if not self.v_dc > 0:
            raise SheError(f"v_dc must be > 0, got {self.v_dc}")

    @property
    def levels(self) -> int:
        return 2 * self.n_sources + 1

    def check_pairing(self, angles: AngleSet) -> None:
        if len(angles) != self.n_sources:
            raise SheError(
                f"{len(angles)} angles supplied for {self.n_sources} dc sources"
            )


@dataclass(frozen=True)
class ModulationIndex:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (0.0 < v <= M_MAX + 1e-12):
            if v > M_MAX:
                raise SheError(f"m = {v:g} exceeds 4/π ≈ {M_MAX:.5f}")
            raise SheError(f"m must be > 0, got {v:g}")
        object.__setattr__(self, "value", v)

    def __float__(self) -> float:
        return self.value


def as_modulation_index(m) -> ModulationIndex:
    return m if isinstance(m, ModulationIndex) else ModulationIndex(float(m))


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Peak magnitudes of the odd harmonics, in volts."""

    fundamental_peak: float
    components: dict[int, float]
    max_order: int
    thd: float

    def percent_of_fundamental(self, n: int) -> float:
        return 100.0 * self.components[n] / self.fundamental_peak


@dataclass(frozen=True)
class SolveResult:
    angles: AngleSet
    target_m: float
    achieved_pu: float
    # normalized |V_h| / (N v_dc), keyed by harmonic order
    residuals: dict[int, float]
    cost: float
    iterations: int
    seed: int
    objective: float = 0.0
    history: tuple[float, ...] = ()

    @property
    def residual_sum(self) -> float:
        return float(sum(self.residuals.values()))


@dataclass(frozen=True)
class RectifierConfig:
    v_s: float
    gain: float = 3.0 / math.pi

    def __post_init__(self):
        if not self.v_s > 0:
            raise SheError(f"v_s must be > 0, got {self.v_s}")

    @property
    def e_max(self) -> float:
        return self.gain * self.v_s


CONVENTIONAL = "conventional"
PROPOSED = "proposed"
MODES = (CONVENTIONAL, PROPOSED)


@dataclass(frozen=True)
class LutEntry:
    """One row of the operating table.

    ``firing_angle_deg`` is ``None`` when the rectifier cannot reach
    ``dc_link_e``. THD is held in percent so that the CSV form is exact.
    """

    vo_pu: float
    mode: str
    angles: AngleSet
    dc_link_e: float
    firing_angle_deg: Optional[float]
    thd_percent: float

    def __post_init__(self):
        if self.mode not in MODES:
            raise SheError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def thd(self) -> float:
        return self.thd_percent / 100.0
