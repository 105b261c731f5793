"""Strict JSON run configuration.

A config either references a catalog scenario::

    {"scenario": "fig2a", "convention": "angular"}

or defines one inline::

    {"scenario": "custom",
     "mode": "open",
     "t_span_ns": [0, 50],
     "system": {"two_g_over_2pi_MHz": [100, 100, 100],
                "kappa_over_2pi_MHz": 200,
                "gamma_over_2pi_MHz": 0.04, "gamma_phi_over_2pi_MHz": 0.04},
     "pulse": {"shape": "linear_ramp", "omega_max_over_2pi_MHz": 190, "t_f_ns": 45}}

Every frequency-like quantity is accepted either as an internal rate in
rad/ns (bare key, e.g. ``"g"``, ``"kappa"``, ``"omega0"``) or as an ordinary
frequency in MHz (``"<name>_over_2pi_MHz"``; couplings additionally accept
``"two_g_over_2pi_MHz"``). Giving more than one form of the same quantity is
an error. Unknown keys are rejected at every level.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from . import units
from .dynamics import DEFAULT_SAMPLES, METHODS, IntegratorSettings
from .experiments import SCENARIO_IDS, Scenario, default_workers, get_scenario
from .model import (
    DECAY_MODELS,
    Constant,
    Gaussian,
    LinearRamp,
    ModelError,
    PiecewiseLinear,
    SystemParams,
    WStateWeights,
)

FORMATS = ("csv", "json")

_TOP_KEYS = {"scenario", "convention", "modes", "n_samples", "mode", "t_span_ns",
             "system", "pulse", "target_weights", "integrator", "output", "workers"}
_CUSTOM_ONLY = {"mode", "t_span_ns", "system", "pulse", "target_weights"}
_INTEGRATOR_KEYS = {"rtol", "atol", "max_step_ns", "method"}
_OUTPUT_KEYS = {"dir", "formats"}


class ConfigError(ValueError):
    """A configuration that cannot be resolved; the message names the field."""


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    scenario_ref: str                 # catalog id or "custom"
    convention: str = "angular"
    modes: int | None = None
    settings: IntegratorSettings = field(default_factory=IntegratorSettings)
    out_dir: str | None = None
    formats: tuple[str, ...] = ("csv",)
    workers: int = 1


# ---------------------------------------------------------------------------
# parsing helpers


def _strict(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    return value


def _number_list(value, where):
    if not isinstance(value, list):
        raise ConfigError(f"{where}: expected a list of numbers")
    return [_number(v, f"{where}[{k}]") for k, v in enumerate(value)]


def _rate(obj, name, convention, where, default=None, extra=(), as_list=False):
    """Read one quantity given in one of its accepted unit forms."""
    forms = {name: 1.0, f"{name}_over_2pi_MHz": None}
    for key in extra:
        forms[key] = None
    present = [k for k in forms if k in obj]
    if len(present) > 1:
        raise ConfigError(
            f"{where}: ambiguous units, {' and '.join(present)} both given")
    if not present:
        if default is None:
            raise ConfigError(f"{where}: missing {name} (or {name}_over_2pi_MHz)")
        return default
    key = present[0]
    raw = obj[key]
    if as_list and isinstance(raw, list):
        values = _number_list(raw, f"{where}.{key}")
    else:
        values = _number(raw, f"{where}.{key}")

    def conv(v):
        if key == name:
            return v
        if key.startswith("two_"):
            return units.mhz_to_rad_per_ns(v / 2.0, convention)
        return units.mhz_to_rad_per_ns(v, convention)

    if isinstance(values, list):
        return [conv(v) for v in values]
    return conv(values)


_SYSTEM_KEYS = {"n_modes", "decay_model",
                "g", "g_over_2pi_MHz", "two_g_over_2pi_MHz"}
for _q in ("delta1", "delta2", "gamma", "gamma_phi", "kappa"):
    _SYSTEM_KEYS |= {_q, f"{_q}_over_2pi_MHz"}


def _parse_system(obj, convention):
    where = "system"
    _strict(obj, _SYSTEM_KEYS, where)
    couplings = _rate(obj, "g", convention, where, extra=("two_g_over_2pi_MHz",),
                      as_list=True)
    if not isinstance(couplings, list):
        raise ConfigError("couplings: expected a list (system.g / g_over_2pi_MHz / "
                          "two_g_over_2pi_MHz)")
    if len(couplings) == 0:
        raise ConfigError("couplings: list must not be empty")
    if "n_modes" in obj:
        n = obj["n_modes"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ConfigError("system.n_modes: expected a positive integer")
        if n != len(couplings):
            raise ConfigError(
                f"couplings: n_modes is {n} but {len(couplings)} couplings given")
    kappa = _rate(obj, "kappa", convention, where, default=0.0, as_list=True)
    decay_model = obj.get("decay_model", "split")
    if decay_model not in DECAY_MODELS:
        raise ConfigError(f"system.decay_model: expected one of {DECAY_MODELS}")
    try:
        return SystemParams(
            couplings=tuple(couplings),
            delta1=_rate(obj, "delta1", convention, where, default=0.0),
            delta2=_rate(obj, "delta2", convention, where, default=0.0),
            gamma=_rate(obj, "gamma", convention, where, default=0.0),
            gamma_phi=_rate(obj, "gamma_phi", convention, where, default=0.0),
            kappas=tuple(kappa) if isinstance(kappa, list) else kappa,
            decay_model=decay_model,
        )
    except ModelError as exc:
        raise ConfigError(f"system: {exc}") from None


def _parse_pulse(obj, convention):
    where = "pulse"
    if not isinstance(obj, dict) or "shape" not in obj:
        raise ConfigError("pulse: expected an object with a 'shape'")
    shape = obj["shape"]
    try:
        if shape == "gaussian":
            _strict(obj, {"shape", "omega0", "omega0_over_2pi_MHz", "center_ns", "width_ns"}, where)
            return Gaussian(_rate(obj, "omega0", convention, where),
                            _number(obj.get("center_ns"), "pulse.center_ns"),
                            _number(obj.get("width_ns"), "pulse.width_ns"))
        if shape == "linear_ramp":
            _strict(obj, {"shape", "omega_max", "omega_max_over_2pi_MHz", "t_f_ns"}, where)
            return LinearRamp(_rate(obj, "omega_max", convention, where),
                              _number(obj.get("t_f_ns"), "pulse.t_f_ns"))
        if shape == "constant":
            _strict(obj, {"shape", "omega", "omega_over_2pi_MHz"}, where)
            return Constant(_rate(obj, "omega", convention, where))
        if shape == "piecewise_linear":
            _strict(obj, {"shape", "knots", "knots_over_2pi_MHz"}, where)
            both = [k for k in ("knots", "knots_over_2pi_MHz") if k in obj]
            if len(both) != 1:
                raise ConfigError("pulse: give exactly one of knots, knots_over_2pi_MHz")
            key = both[0]
            raw = obj[key]
            if not isinstance(raw, list):
                raise ConfigError(f"pulse.{key}: expected a list of [t_ns, value] pairs")
            knots = []
            for k, pair in enumerate(raw):
                vals = _number_list(pair, f"pulse.{key}[{k}]")
                if len(vals) != 2:
                    raise ConfigError(f"pulse.{key}[{k}]: expected [t_ns, value]")
                t, w = vals
                if key != "knots":
                    w = units.mhz_to_rad_per_ns(w, convention)
                knots.append((t, w))
            return PiecewiseLinear(tuple(knots))
    except ModelError as exc:
        raise ConfigError(f"pulse: {exc}") from None
    raise ConfigError(f"pulse.shape: unknown shape {shape!r}")


def _parse_integrator(obj):
    if obj is None:
        return IntegratorSettings()
    _strict(obj, _INTEGRATOR_KEYS, "integrator")
    kwargs = {}
    for key in ("rtol", "atol"):
        if key in obj:
            kwargs[key] = _number(obj[key], f"integrator.{key}")
    if obj.get("max_step_ns") is not None:
        kwargs["max_step"] = _number(obj["max_step_ns"], "integrator.max_step_ns")
    if "method" in obj:
        if obj["method"] not in METHODS:
            raise ConfigError(f"integrator.method: expected one of {METHODS}")
        kwargs["method"] = obj["method"]
    try:
        return IntegratorSettings(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"integrator: {exc}") from None


def parse_config_dict(data: dict) -> RunConfig:
    _strict(data, _TOP_KEYS, "config")
    if "scenario" not in data:
        raise ConfigError("scenario: missing (catalog id or 'custom')")
    ref = data["scenario"]
    convention = data.get("convention", "angular")
    if convention not in units.CONVENTIONS:
        raise ConfigError(f"convention: expected one of {units.CONVENTIONS}")

    modes = data.get("modes")
    if modes is not None and (not isinstance(modes, int) or isinstance(modes, bool)
                              or modes < 1):
        raise ConfigError("modes: expected a positive integer")
    n_samples = data.get("n_samples", DEFAULT_SAMPLES)
    if not isinstance(n_samples, int) or isinstance(n_samples, bool) or n_samples < 2:
        raise ConfigError("n_samples: expected an integer >= 2")

    if ref == "custom":
        for key in ("mode", "t_span_ns", "system", "pulse"):
            if key not in data:
                raise ConfigError(f"{key}: required for a custom scenario")
        if modes is not None:
            raise ConfigError("modes: only valid for the fig6 catalog families")
        mode = data["mode"]
        if mode not in ("closed", "open"):
            raise ConfigError("mode: expected 'closed' or 'open'")
        span = _number_list(data["t_span_ns"], "t_span_ns")
        if len(span) != 2 or not span[1] > span[0]:
            raise ConfigError("t_span_ns: expected [t0, t1] with t1 > t0")
        params = _parse_system(data["system"], convention)
        pulse = _parse_pulse(data["pulse"], convention)
        weights = data.get("target_weights")
        try:
            target = WStateWeights(tuple(_number_list(weights, "target_weights"))
                                   if weights is not None else params.couplings)
            scenario = Scenario("custom", params, pulse, (span[0], span[1]), mode,
                                target, convention, n_samples)
        except ModelError as exc:
            raise ConfigError(f"scenario: {exc}") from None
    else:
        if not isinstance(ref, str) or ref not in SCENARIO_IDS:
            raise ConfigError(f"scenario: unknown scenario {ref!r}; "
                              f"known: {', '.join(SCENARIO_IDS)}, custom")
        extra = sorted(_CUSTOM_ONLY & set(data))
        if extra:
            raise ConfigError(f"{extra[0]}: only valid with scenario 'custom'")
        if modes is not None and not ref.startswith("fig6"):
            raise ConfigError("modes: only valid for the fig6 catalog families")
        scenario = replace(get_scenario(ref, convention, modes), n_samples=n_samples)

    settings = _parse_integrator(data.get("integrator"))
    output = data.get("output", {})
    _strict(output, _OUTPUT_KEYS, "output")
    out_dir = output.get("dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError("output.dir: expected a string")
    formats = output.get("formats", ["csv"])
    if not isinstance(formats, list) or not formats or any(f not in FORMATS for f in formats):
        raise ConfigError(f"output.formats: expected a non-empty list from {FORMATS}")
    workers = data.get("workers", default_workers())
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise ConfigError("workers: expected a positive integer")

    return RunConfig(scenario=scenario, scenario_ref=ref, convention=convention,
                     modes=modes, settings=settings, out_dir=out_dir,
                     formats=tuple(formats), workers=workers)


def parse_config(text: str) -> RunConfig:
    """Parse and resolve a JSON config. Syntax errors carry line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config_dict(data)


# ---------------------------------------------------------------------------
# serialization


def pulse_to_dict(pulse) -> dict:
    if isinstance(pulse, Gaussian):
        return {"shape": "gaussian", "omega0": pulse.omega0,
                "center_ns": pulse.center, "width_ns": pulse.width}
    if isinstance(pulse, LinearRamp):
        return {"shape": "linear_ramp", "omega_max": pulse.omega_max, "t_f_ns": pulse.t_f}
    if isinstance(pulse, Constant):
        return {"shape": "constant", "omega": pulse.omega}
    if isinstance(pulse, PiecewiseLinear):
        return {"shape": "piecewise_linear", "knots": [list(k) for k in pulse.knots]}
    raise TypeError(f"unknown pulse type {type(pulse).__name__}")


def system_to_dict(params: SystemParams) -> dict:
    return {
        "n_modes": params.n_modes,
        "g": list(params.couplings),
        "delta1": params.delta1,
        "delta2": params.delta2,
        "gamma": params.gamma,
        "gamma_phi": params.gamma_phi,
        "kappa": list(params.kappas),
        "decay_model": params.decay_model,
    }


def config_to_dict(cfg: RunConfig) -> dict:
    s = cfg.settings
    out = {"scenario": cfg.scenario_ref, "convention": cfg.convention}
    if cfg.modes is not None:
        out["modes"] = cfg.modes
    out["n_samples"] = cfg.scenario.n_samples
    if cfg.scenario_ref == "custom":
        sc = cfg.scenario
        out["mode"] = sc.mode
        out["t_span_ns"] = list(sc.t_span)
        out["system"] = system_to_dict(sc.params)
        out["pulse"] = pulse_to_dict(sc.pulse)
        out["target_weights"] = list(sc.target.weights)
    out["integrator"] = {
        "rtol": s.rtol, "atol": s.atol,
        "max_step_ns": s.max_step if math.isfinite(s.max_step) else None,
        "method": s.method,
    }
    output = {"formats": list(cfg.formats)}
    if cfg.out_dir is not None:
        output["dir"] = cfg.out_dir
    out["output"] = output
    out["workers"] = cfg.workers
    return out


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2)


def resolved_scenario_dict(s: Scenario) -> dict:
    """Echo of a scenario with every quantity in internal units."""
    return {
        "id": s.id,
        "description": s.description,
        "mode": s.mode,
        "convention": s.convention,
        "t_span_ns": list(s.t_span),
        "n_samples": s.n_samples,
        "system": system_to_dict(s.params),
        "pulse": pulse_to_dict(s.pulse),
        "target_weights": list(s.target.weights),
        "metadata": s.metadata,
    }
