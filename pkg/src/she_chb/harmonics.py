"""Fourier model of the quarter-wave symmetric staircase and its THD.

Two independent routes to the spectrum are provided: the closed-form
odd-harmonic coefficients, and a sampled waveform pushed through an FFT.
The second exists to check the first.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    AngleSet,
    HarmonicOrderError,
    HarmonicSpectrum,
    InverterConfig,
    SamplingError,
    UndefinedTHDError,
)

DEFAULT_MAX_ORDER = 999
DEFAULT_SAMPLES = 4096


def _odd_orders(max_order: int) -> np.ndarray:
    return np.arange(1, max_order + 1, 2)


def _check_max_order(max_order: int) -> None:
    if max_order < 3 or max_order % 2 == 0:
        raise HarmonicOrderError(f"max_order must be odd and >= 3, got {max_order}")


def unit_coefficients(angles: AngleSet, orders) -> np.ndarray:
    """Sum_k cos(n theta_k) / n for each order n (signed, dimensionless).

    Multiply by ``4 v_dc / pi`` to get volts.
    """
    n = np.asarray(orders, dtype=float)
    return np.cos(np.outer(n, angles.radians)).sum(axis=1) / n


def harmonic_magnitude(angles: AngleSet, n: int, config: InverterConfig) -> float:
    """Signed peak of the n-th harmonic of the output, in volts."""
    if n < 1 or n % 2 == 0:
        raise HarmonicOrderError(f"harmonic order must be odd and positive, got {n}")
    return 4.0 * config.v_dc / math.pi * float(unit_coefficients(angles, [n])[0])


def harmonic_magnitude_any(angles: AngleSet, n: int, config: InverterConfig) -> float:
    """Relaxed entry point accepting even orders, which are identically zero."""
    if n < 1:
        raise HarmonicOrderError(f"harmonic order must be positive, got {n}")
    if n % 2 == 0:
        return 0.0
    return harmonic_magnitude(angles, n, config)


def fundamental_pu(angles: AngleSet, config: InverterConfig) -> float:
    """Fundamental normalized by the total dc voltage ``N * v_dc``."""
    return 4.0 / math.pi * float(unit_coefficients(angles, [1])[0]) / config.n_sources


def _thd_from_coefficients(c: np.ndarray) -> float:
    if c[0] == 0.0 or abs(c[0]) < 1e-15:
        raise UndefinedTHDError("fundamental is zero; THD undefined")
    return float(np.sqrt(np.sum(c[1:] ** 2)) / abs(c[0]))


def thd(angles: AngleSet, max_order: int = DEFAULT_MAX_ORDER) -> float:
    """THD ratio over odd orders 3..max_order. Independent of v_dc."""
    _check_max_order(max_order)
    return _thd_from_coefficients(unit_coefficients(angles, _odd_orders(max_order)))


def spectrum(
    angles: AngleSet, config: InverterConfig, max_order: int = DEFAULT_MAX_ORDER
) -> HarmonicSpectrum:
    _check_max_order(max_order)
    orders = _odd_orders(max_order)
    c = unit_coefficients(angles, orders)
    ratio = _thd_from_coefficients(c)
    volts = np.abs(c) * (4.0 * config.v_dc / math.pi)
    return HarmonicSpectrum(
        fundamental_peak=float(volts[0]),
        components={int(n): float(v) for n, v in zip(orders, volts)},
        max_order=max_order,
        thd=ratio,
    )


def spectrum_csv(spec: HarmonicSpectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["order", "magnitude_volts", "percent_of_fundamental"])
    for n in sorted(spec.components):
        w.writerow([n, repr(spec.components[n]), repr(spec.percent_of_fundamental(n))])
    return buf.getvalue()


# -- waveform synthesis -------------------------------------------------------


@dataclass(eq=False)
class Waveform:
    """One fundamental period of the staircase output.

    ``t`` holds the cell midpoints as fractions of the period. Each ``v``
    is the mean voltage over its cell, so cells that straddle a switching
    instant carry an intermediate value and every other cell sits exactly
    on a level.
    """

    t: np.ndarray
    v: np.ndarray
    levels: int
    averaged: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.v.tolist()))

    def __len__(self) -> int:
        return len(self.v)


def _quarter_index(wt_deg: np.ndarray) -> np.ndarray:
    """Fold an electrical angle in [0, 360) onto its quarter-wave image in [0, 90]."""
    half = np.mod(wt_deg, 180.0)
    return np.minimum(half, 180.0 - half)


def staircase_voltage(angles: AngleSet, config: InverterConfig, wt_deg) -> np.ndarray:
    """Instantaneous output at electrical angle(s) ``wt_deg`` (degrees)."""
    x = np.mod(np.asarray(wt_deg, dtype=float), 360.0)
    q = _quarter_index(x)
    a = np.asarray(angles.angles)
    steps = (a[None, :] < q.reshape(-1, 1)).sum(axis=1).reshape(q.shape)
    sign = np.where(x < 180.0, 1.0, -1.0)
    return sign * steps * config.v_dc


def _staircase_integral(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Integral over [0, x] of the unit staircase; x in degrees within [0, 360]."""

    def quarter(u):
        return np.clip(u[:, None] - a[None, :], 0.0, None).sum(axis=1)

    q90 = quarter(np.array([90.0]))[0]

    def half(u):
        # integral over [0, u] for u in [0, 180]
        lo = quarter(np.minimum(u, 90.0))
        hi = 2.0 * q90 - quarter(np.clip(180.0 - u, 0.0, 90.0))
        return np.where(u <= 90.0, lo, hi)

    first = half(np.minimum(x, 180.0))
    second = 2.0 * q90 - half(np.clip(x - 180.0, 0.0, 180.0))
    return np.where(x <= 180.0, first, second)


def synthesize_waveform(
    angles: AngleSet, config: InverterConfig, samples_per_period: int = DEFAULT_SAMPLES
) -> Waveform:
    if samples_per_period < 4 * len(angles):
        raise SamplingError(
            f"samples_per_period must be >= {4 * len(angles)}, got {samples_per_period}"
        )
    n = int(samples_per_period)
    a = np.asarray(angles.angles)
    width = 360.0 / n
    edges = np.arange(n + 1) * width
    v = np.diff(_staircase_integral(a, edges)) / width
    # snap cells that lie entirely on a level
    snapped = np.round(v)
    v = np.where(np.abs(v - snapped) < 1e-9, snapped, v) * config.v_dc
    t = (np.arange(n) + 0.5) / n
    return Waveform(
        t=t,
        v=v,
        levels=2 * angles.active + 1,
        meta={"angles": angles.angles, "v_dc": config.v_dc},
    )


def dft_peaks(waveform: Waveform, max_order: int) -> np.ndarray:
    """Peak amplitude of every order 1..max_order (even ones included).

    Zero-order-hold droop is divided out for interval-averaged waveforms.
    """
    n = len(waveform)
    if n < 4 * max_order:
        raise SamplingError(
            f"{n} samples per period cannot resolve order {max_order}; need >= {4 * max_order}"
        )
    spectrum_ = np.fft.rfft(waveform.v)
    orders = np.arange(1, max_order + 1)
    peaks = 2.0 * np.abs(spectrum_[orders]) / n
    if waveform.averaged:
        peaks = peaks / np.sinc(orders / n)
    return peaks


def fft_thd(waveform: Waveform, max_order: int = 199) -> float:
    _check_max_order(max_order)
    peaks = dft_peaks(waveform, max_order)
    odd = peaks[0::2]
    if odd[0] < 1e-12 * max(1.0, float(np.max(np.abs(waveform.v)))):
        raise UndefinedTHDError("fundamental is zero; THD undefined")
    return float(np.sqrt(np.sum(odd[1:] ** 2)) / odd[0])
