"""Selective harmonic elimination for cascaded H-bridge inverters with an
adjustable, thyristor-regulated dc-link."""

__version__ = "0.1.0"

from .core import (
    AngleSet,
    HarmonicSpectrum,
    InverterConfig,
    LutEntry,
    ModulationIndex,
    RectifierConfig,
    SolveResult,
    validate_angles,
)
from .dclink import firing_angle, rectifier_voltage, regulate, required_dc_link
from .harmonics import (
    fft_thd,
    fundamental_pu,
    harmonic_magnitude,
    spectrum,
    synthesize_waveform,
    thd,
)
from .lut import build_lut, load_lut, lookup, serialize_lut
from .solver import PsoParams, cost, grid_oracle, solve, solve_sweep
