"""Adjustable dc-link: pick the rectifier firing angle that lets the
inverter run at unity modulation index for a reduced output demand.

Each bridge's dc-link is fed by one six-pulse thyristor unit; both units
receive the same firing angle so the two links stay equal.
"""

from __future__ import annotations

import math

from .core import InfeasibleDemandError, InverterConfig, RectifierConfig, SheError


def required_dc_link(vo_pu: float, config: InverterConfig) -> float:
    """dc-link voltage that yields ``vo_pu`` of nominal output at M = 1."""
    if not (0.0 < vo_pu <= 1.0):
        raise SheError(f"vo_pu must lie in (0, 1], got {vo_pu:g}")
    return vo_pu * config.v_dc


def rectifier_voltage(rect: RectifierConfig, alpha_deg: float) -> float:
    """Ideal average output ``gain * v_s * cos(alpha)``."""
    if not (0.0 <= alpha_deg <= 90.0):
        raise SheError(f"firing angle {alpha_deg:g} outside [0, 90] degrees")
    return rect.gain * rect.v_s * math.cos(math.radians(alpha_deg))


def firing_angle(e_target: float, rect: RectifierConfig) -> float:
    """Firing angle in degrees that produces an average of ``e_target`` volts."""
    if e_target < 0:
        raise SheError(f"dc-link target must be >= 0, got {e_target:g}")
    ratio = e_target / rect.e_max
    if ratio > 1.0:
        # tolerate round-off when the target is the ceiling itself
        if ratio - 1.0 > 1e-12:
            raise InfeasibleDemandError(e_target, rect.e_max, e_target / rect.gain)
        ratio = 1.0
    return math.degrees(math.acos(ratio))


def regulate(vo_pu: float, config: InverterConfig, rect: RectifierConfig) -> tuple[float, float]:
    """Return ``(E, alpha_deg)`` for a demanded per-unit output."""
    e = required_dc_link(vo_pu, config)
    return e, firing_angle(e, rect)


def full_output_v_s(config: InverterConfig, gain: float = 3.0 / math.pi) -> float:
    """Secondary voltage whose zero-delay output equals the nominal ``v_dc``."""
    return config.v_dc / gain
