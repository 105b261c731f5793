import json

import pytest

from wstate.config import ConfigError, config_to_dict, parse_config, parse_config_dict
from wstate.model import Gaussian, LinearRamp, PiecewiseLinear

from conftest import TWO_PI

CUSTOM = {
    "scenario": "custom",
    "mode": "closed",
    "t_span_ns": [0, 1000],
    "system": {"g_over_2pi_MHz": [22.5, 22.5, 22.5]},
    "pulse": {"shape": "gaussian", "omega0_over_2pi_MHz": 700,
              "center_ns": 1000, "width_ns": 360},
}


def _with(**changes):
    data = json.loads(json.dumps(CUSTOM))
    data.update(changes)
    return data


def test_mhz_form_converts_with_2pi():
    cfg = parse_config_dict(_with())
    p = cfg.scenario.params
    assert p.couplings == pytest.approx((TWO_PI * 0.0225,) * 3, rel=1e-15)
    assert isinstance(cfg.scenario.pulse, Gaussian)
    assert cfg.scenario.pulse.omega0 == pytest.approx(TWO_PI * 0.7, rel=1e-15)


def test_two_g_form():
    cfg = parse_config_dict(_with(system={"two_g_over_2pi_MHz": [100.0]}))
    assert cfg.scenario.params.couplings[0] == pytest.approx(TWO_PI * 0.05, rel=1e-15)


def test_rad_per_ns_form_untouched():
    cfg = parse_config_dict(_with(system={"g": [0.1, 0.2], "kappa": 0.5}))
    assert cfg.scenario.params.couplings == (0.1, 0.2)
    assert cfg.scenario.params.kappas == (0.5, 0.5)


def test_no_2pi_convention():
    cfg = parse_config_dict(_with(convention="no_2pi"))
    assert cfg.scenario.params.couplings[0] == pytest.approx(0.0225, rel=1e-15)


@pytest.mark.parametrize("system", [
    {"g": [0.1], "g_over_2pi_MHz": [10.0]},
    {"g": [0.1], "two_g_over_2pi_MHz": [10.0]},
    {"g": [0.1], "kappa": 1.0, "kappa_over_2pi_MHz": 100.0},
])
def test_ambiguous_units(system):
    with pytest.raises(ConfigError, match="ambiguous units"):
        parse_config_dict(_with(system=system))


def test_empty_couplings():
    with pytest.raises(ConfigError, match="couplings"):
        parse_config_dict(_with(system={"g_over_2pi_MHz": []}))


def test_n_modes_mismatch():
    with pytest.raises(ConfigError, match="couplings"):
        parse_config_dict(_with(system={"g": [0.1, 0.1], "n_modes": 3}))


@pytest.mark.parametrize("data, field", [
    ({"scenario": "fig2a", "bogus": 1}, "bogus"),
    ({"scenario": "fig2a", "integrator": {"foo": 1}}, "foo"),
    ({"scenario": "fig2a", "integrator": {"rtol": -1}}, "integrator"),
    ({"scenario": "fig2a", "integrator": {"method": "euler"}}, "integrator.method"),
    ({"scenario": "fig2a", "output": {"formats": ["xml"]}}, "output.formats"),
    ({"scenario": "fig2a", "workers": 0}, "workers"),
    ({"scenario": "fig2a", "modes": 3}, "modes"),
    ({"scenario": "fig2a", "convention": "hz"}, "convention"),
    ({"scenario": "fig2a", "pulse": {}}, "pulse"),
    ({"scenario": "nosuch"}, "nosuch"),
    ({}, "scenario"),
])
def test_strict_errors_name_the_field(data, field):
    with pytest.raises(ConfigError, match=field):
        parse_config_dict(data)


def test_custom_errors():
    with pytest.raises(ConfigError, match="pulse.shape"):
        parse_config_dict(_with(pulse={"shape": "square"}))
    with pytest.raises(ConfigError, match="t_span_ns"):
        parse_config_dict(_with(t_span_ns=[5, 1]))
    with pytest.raises(ConfigError, match="mode"):
        parse_config_dict(_with(mode="half-open"))
    with pytest.raises(ConfigError, match="system"):
        parse_config_dict(_with(system={"g": [0.1], "gamma": -1.0}))


def test_syntax_error_reports_position():
    text = '{\n  "scenario": "fig2a",\n  "workers": \n}'
    with pytest.raises(ConfigError, match=r"line 4"):
        parse_config(text)


def test_pulse_shapes():
    ramp = parse_config_dict(_with(pulse={"shape": "linear_ramp",
                                          "omega_max_over_2pi_MHz": 190, "t_f_ns": 45}))
    assert isinstance(ramp.scenario.pulse, LinearRamp)
    assert ramp.scenario.pulse.omega_max == pytest.approx(TWO_PI * 0.19)
    pw = parse_config_dict(_with(pulse={"shape": "piecewise_linear",
                                        "knots_over_2pi_MHz": [[0, 0], [10, 100]]}))
    assert isinstance(pw.scenario.pulse, PiecewiseLinear)
    assert pw.scenario.pulse(10.0) == pytest.approx(TWO_PI * 0.1)


def test_catalog_reference_and_fig6_modes():
    cfg = parse_config_dict({"scenario": "fig6a_fidelity", "modes": 5})
    p = cfg.scenario.params
    assert p.n_modes == 5
    assert p.coupling_norm == pytest.approx(TWO_PI * 0.028, rel=1e-14)


@pytest.mark.parametrize("data", [
    CUSTOM,
    {"scenario": "fig5_k200", "integrator": {"rtol": 1e-9}, "output": {"formats": ["json"]}},
    {"scenario": "fig6b_emission", "modes": 3, "convention": "no_2pi", "workers": 2},
])
def test_round_trip(data):
    cfg = parse_config_dict(json.loads(json.dumps(data)))
    again = parse_config_dict(json.loads(json.dumps(config_to_dict(cfg))))
    assert again == cfg
    a, b = cfg.scenario.params, again.scenario.params
    assert a.couplings == b.couplings
