import math

import pytest
from hypothesis import given, strategies as st

from she_chb.core import (
    AngleDomainError,
    AngleOrderError,
    AngleSet,
    InverterConfig,
    LutEntry,
    M_MAX,
    ModulationIndex,
    RectifierConfig,
    SheError,
    validate_angles,
)


def test_validate_in_range_pair():
    assert validate_angles([5.0, 55.0]) == AngleSet((5.0, 55.0))


def test_validate_boundary_ninety():
    a = validate_angles([61.97, 90.0])
    assert a.angles == (61.97, 90.0)
    assert a.active == 1


def test_validate_out_of_range_names_index():
    with pytest.raises(AngleDomainError) as exc:
        validate_angles([95.0, 10.0])
    assert exc.value.index == 0
    assert "95" in str(exc.value)


@pytest.mark.parametrize("raw", [[-0.1, 10.0], [10.0, 90.0001], [float("nan"), 1.0]])
def test_validate_rejects_bad_values(raw):
    with pytest.raises(AngleDomainError):
        validate_angles(raw)


def test_duplicate_below_ninety_rejected():
    with pytest.raises(AngleOrderError):
        validate_angles([30.0, 30.0])


def test_duplicate_at_ninety_allowed():
    assert validate_angles([90.0, 90.0]).active == 0


def test_zero_is_admitted():
    assert validate_angles([0.0, 45.0]).angles == (0.0, 45.0)


def test_empty_rejected():
    with pytest.raises(SheError):
        validate_angles([])


def test_angleset_constructor_rejects_unsorted():
    with pytest.raises(AngleOrderError):
        AngleSet((50.0, 10.0))


@given(st.lists(st.floats(0, 90, allow_nan=False), min_size=1, max_size=6, unique=True))
def test_validate_idempotent_and_permutation_invariant(raw):
    once = validate_angles(raw)
    assert validate_angles(once.angles) == once
    assert validate_angles(list(reversed(raw))) == once


def test_inverter_config_validation():
    with pytest.raises(SheError):
        InverterConfig(0, 200.0)
    with pytest.raises(SheError):
        InverterConfig(2, 0.0)
    assert InverterConfig(2, 200.0).levels == 5


def test_pairing_check():
    with pytest.raises(SheError):
        InverterConfig(3, 200.0).check_pairing(AngleSet((10.0, 20.0)))


def test_modulation_index_bounds():
    assert ModulationIndex(M_MAX).value == pytest.approx(4 / math.pi)
    with pytest.raises(SheError, match="exceeds 4/π"):
        ModulationIndex(1.5)
    with pytest.raises(SheError):
        ModulationIndex(0.0)


def test_rectifier_config():
    assert RectifierConfig(200.0).e_max == pytest.approx(600 / math.pi)
    with pytest.raises(SheError):
        RectifierConfig(-1.0)


def test_lut_entry_mode_checked():
    with pytest.raises(SheError):
        LutEntry(0.3, "other", AngleSet((1.0, 2.0)), 60.0, None, 20.0)
