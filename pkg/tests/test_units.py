import math

import pytest
from hypothesis import given, strategies as st

from wstate import units


def test_known_values():
    assert units.mhz_to_rad_per_ns(1000.0) == pytest.approx(2 * math.pi, rel=1e-15)
    assert units.mhz_to_rad_per_ns(100.0 / 2) == pytest.approx(2 * math.pi * 0.05, rel=1e-15)
    assert units.mhz_to_rad_per_ns(190.0, "no_2pi") == pytest.approx(0.19, rel=1e-15)


@pytest.mark.parametrize("convention", units.CONVENTIONS)
@given(f=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-9))
def test_round_trip(convention, f):
    back = units.rad_per_ns_to_mhz(units.mhz_to_rad_per_ns(f, convention), convention)
    assert abs(back - f) <= 1e-15 * abs(f)


def test_ghz_helpers():
    assert units.ghz_to_rad_per_ns(0.2) == pytest.approx(units.mhz_to_rad_per_ns(200.0))
    assert units.rad_per_ns_to_ghz(units.ghz_to_rad_per_ns(0.3)) == pytest.approx(0.3)


def test_unknown_convention():
    with pytest.raises(ValueError, match="convention"):
        units.mhz_to_rad_per_ns(1.0, "hertz")
