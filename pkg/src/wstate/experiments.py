"""Scenario catalog, 2-D parameter sweeps and ramp-pulse calibration.

Catalog scenarios are built from the published parameter values, quoted as
ordinary frequencies. ``convention`` selects how those numbers become
internal rad/ns rates (see :mod:`wstate.units`).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import units
from .analysis import (
    EmissionReport,
    InvarianceReport,
    check_lindblad_scaling,
    check_schrodinger_scaling,
    emission_report,
    fidelity,
    fidelity_series,
    target_in_full_basis,
)
from .dynamics import (
    DEFAULT_SAMPLES,
    DensityTrajectory,
    IntegrationError,
    IntegratorSettings,
    Trajectory,
    evolve_lindblad,
    evolve_schrodinger,
)
from .model import (
    Gaussian,
    LinearRamp,
    ModelError,
    PulseSpec,
    SystemParams,
    U,
    WStateWeights,
    as_density,
    basis_state,
)

SCENARIO_IDS = (
    "fig2a", "fig2b", "fig2c", "fig2d",
    "fig4_proto", "fig4_weighted",
    "fig5_k200", "fig5_k400", "fig5_k500",
    "fig5e_sweep", "fig5f_sweep",
    "fig6a_fidelity", "fig6b_emission",
)

FIG6_MODES = (1, 2, 3, 5, 10, 20)
FIG6_MODES_FULL = tuple(range(1, 21))
SWEEP_POINTS = 31

# Ramp pulses found by calibrate_pulse(budget=CALIBRATION_BUDGET) with the
# default bounds; (omega_max/2pi [MHz], t_f [ns]) per convention.
CALIBRATION_BUDGET = 75
CALIBRATED_RAMPS = {
    "angular": {
        "fig4_proto": (118.75, 75.0),
        "fig4_weighted": (118.75, 75.0),
        "fig5_k400": (221.875, 45.0),
        "fig5_k500": (290.625, 30.0),
    },
    "no_2pi": {
        "fig4_proto": (187.5, 90.0),
        "fig4_weighted": (187.5, 90.0),
        "fig5_k400": (325.0, 31.5),
        "fig5_k500": (565.625, 13.5),
    },
}


def default_workers() -> int:
    value = os.environ.get("WSTATE_WORKERS")
    if value is None:
        return 1
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"WSTATE_WORKERS must be an integer, got {value!r}") from None
    return max(1, n)


@dataclass(frozen=True)
class Scenario:
    id: str
    params: SystemParams
    pulse: PulseSpec
    t_span: tuple[float, float]
    mode: str                      # "closed" or "open"
    target: WStateWeights
    convention: str = "angular"
    n_samples: int = DEFAULT_SAMPLES
    description: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.mode not in ("closed", "open"):
            raise ModelError(f"mode must be 'closed' or 'open', got {self.mode!r}")
        t0, t1 = self.t_span
        if not t1 > t0:
            raise ModelError(f"t_span must be increasing, got {self.t_span}")
        if self.target.n_modes != self.params.n_modes:
            raise ModelError("target weights and couplings differ in length")
        if self.n_samples < 2:
            raise ModelError("n_samples must be >= 2")

    @property
    def sample_times(self) -> np.ndarray:
        return np.linspace(self.t_span[0], self.t_span[1], self.n_samples)

    def with_params(self, **changes) -> "Scenario":
        return replace(self, params=replace(self.params, **changes))


# ---------------------------------------------------------------------------
# catalog


def _fig2(panel, convention):
    f = lambda mhz: units.mhz_to_rad_per_ns(mhz, convention)
    two_g1 = {"a": 45.0, "b": 38.0, "c": 31.0, "d": 54.0}[panel]
    ratios = {
        "a": (1.0, 1.0, 1.0),
        "b": (1.0, 1.0, math.sqrt(2.0)),
        "c": (1.0, math.sqrt(2.0), math.sqrt(3.0)),
        "d": (1.0, 1.0),
    }[panel]
    g1 = f(two_g1 / 2.0)
    params = SystemParams(couplings=tuple(g1 * r for r in ratios))
    return Scenario(
        id=f"fig2{panel}", params=params,
        pulse=Gaussian(omega0=f(700.0), center=1000.0, width=360.0),
        t_span=(0.0, 1000.0), mode="closed", target=WStateWeights(ratios),
        convention=convention,
        description=f"adiabatic generation, 2g1/2pi = {two_g1:g} MHz, "
                    f"coupling ratios {tuple(round(r, 6) for r in ratios)}",
    )


def _emission_params(two_g_mhz, ratios, kappa_mhz, delta_mhz, convention):
    f = lambda mhz: units.mhz_to_rad_per_ns(mhz, convention)
    g = f(two_g_mhz / 2.0)
    return SystemParams(
        couplings=tuple(g * r for r in ratios),
        delta1=f(delta_mhz), delta2=f(delta_mhz),
        gamma=f(0.04), gamma_phi=f(0.04),
        kappas=f(kappa_mhz),
    )


def calibrated_ramp(scenario_id, convention):
    omega_mhz, t_f = CALIBRATED_RAMPS[convention][scenario_id]
    if omega_mhz is None:
        raise ModelError(f"no calibrated pulse stored for {scenario_id} ({convention})")
    return LinearRamp(units.mhz_to_rad_per_ns(omega_mhz, convention), t_f)


# Couplings of the weighted emission panel keep A equal to the prototype's.
_WEIGHTED = tuple(math.sqrt(k / 2.0) for k in (1.0, 2.0, 3.0))


_EMISSION_SPECS = {
    # id: (2g/2pi MHz, ratios, kappa/2pi MHz, delta/2pi MHz, horizon ns, target)
    "fig4_proto": (100.0, (1.0, 1.0, 1.0), 200.0, 20.0, 100.0, (1.0, 1.0, 1.0)),
    "fig4_weighted": (100.0, _WEIGHTED, 200.0, 20.0, 100.0,
                      (1.0, math.sqrt(2.0), math.sqrt(3.0))),
    "fig5_k200": (100.0, (1.0, 1.0, 1.0), 200.0, 0.0, 50.0, (1.0, 1.0, 1.0)),
    "fig5_k400": (200.0, (1.0, 1.0, 1.0), 400.0, 0.0, 30.0, (1.0, 1.0, 1.0)),
    "fig5_k500": (420.0 / math.sqrt(3.0), (1.0, 1.0, 1.0), 500.0, 0.0, 20.0,
                  (1.0, 1.0, 1.0)),
}


def _emission(scenario_id, convention, pulse=None):
    two_g, ratios, kappa, delta, horizon, target = _EMISSION_SPECS[scenario_id]
    params = _emission_params(two_g, ratios, kappa, delta, convention)
    if pulse is None:
        if scenario_id == "fig5_k200":
            pulse = LinearRamp(units.mhz_to_rad_per_ns(190.0, convention), 45.0)
        else:
            pulse = calibrated_ramp(scenario_id, convention)
    return Scenario(
        id=scenario_id, params=params, pulse=pulse, t_span=(0.0, horizon),
        mode="open", target=WStateWeights(target), convention=convention,
        description=f"emission, kappa/2pi = {kappa:g} MHz, horizon {horizon:g} ns",
    )


def fig6a_scenario(n_modes, convention="angular"):
    f = lambda mhz: units.mhz_to_rad_per_ns(mhz, convention)
    g = f(56.0 / 2.0) / math.sqrt(n_modes)
    return Scenario(
        id="fig6a_fidelity", params=SystemParams(couplings=(g,) * n_modes),
        pulse=Gaussian(omega0=f(700.0), center=1000.0, width=360.0),
        t_span=(0.0, 1000.0), mode="closed",
        target=WStateWeights((1.0,) * n_modes), convention=convention,
        description=f"generation with M = {n_modes}, g_M = g_1/sqrt(M), 2g_1/2pi = 56 MHz",
        metadata={"modes": n_modes},
    )


def fig6b_scenario(n_modes, convention="angular", pulse=None):
    f = lambda mhz: units.mhz_to_rad_per_ns(mhz, convention)
    g = f(420.0 / 2.0) / math.sqrt(n_modes)
    params = SystemParams(couplings=(g,) * n_modes, gamma=f(0.04),
                          gamma_phi=f(0.04), kappas=f(500.0))
    return Scenario(
        id="fig6b_emission", params=params,
        pulse=pulse or calibrated_ramp("fig5_k500", convention),
        t_span=(0.0, 20.0), mode="open",
        target=WStateWeights((1.0,) * n_modes), convention=convention,
        description=f"emission with M = {n_modes}, g_M = g_1/sqrt(M), 2g_1/2pi = 420 MHz",
        metadata={"modes": n_modes},
    )


def sweep_axes(sweep_id, points=SWEEP_POINTS):
    if sweep_id == "fig5e_sweep":
        return (Axis("two_g_over_2pi_GHz", np.linspace(0.02, 0.2, points)),
                Axis("omega_max_over_2pi_GHz", np.linspace(0.05, 0.3, points)))
    if sweep_id == "fig5f_sweep":
        return (Axis("delta1_over_2pi_MHz", np.linspace(-100.0, 100.0, points)),
                Axis("delta2_over_2pi_MHz", np.linspace(-100.0, 100.0, points)))
    raise ModelError(f"{sweep_id!r} is not a sweep scenario")


def get_scenario(scenario_id: str, convention: str = "angular",
                 modes: int | None = None) -> Scenario:
    """Resolve a catalog id to a fully specified scenario.

    Sweep ids resolve to their template scenario with the axes in
    ``metadata``; the fig6 families take ``modes`` (default 3).
    """
    units._check(convention)
    if scenario_id.startswith("fig2") and len(scenario_id) == 5:
        panel = scenario_id[-1]
        if panel in "abcd":
            return _fig2(panel, convention)
    if scenario_id in _EMISSION_SPECS:
        return _emission(scenario_id, convention)
    if scenario_id in ("fig5e_sweep", "fig5f_sweep"):
        base = _emission("fig5_k200", convention)
        axes = sweep_axes(scenario_id)
        return replace(base, id=scenario_id,
                       description=f"sweep over {axes[0].name} x {axes[1].name}",
                       metadata={"template": "fig5_k200",
                                 "axes": [a.name for a in axes],
                                 "points": SWEEP_POINTS})
    if scenario_id == "fig6a_fidelity":
        return fig6a_scenario(modes or 3, convention)
    if scenario_id == "fig6b_emission":
        return fig6b_scenario(modes or 3, convention)
    raise KeyError(f"unknown scenario {scenario_id!r}")


def catalog(convention: str = "angular") -> dict[str, Scenario]:
    return {sid: get_scenario(sid, convention) for sid in SCENARIO_IDS}


# ---------------------------------------------------------------------------
# running


@dataclass
class ScenarioResult:
    scenario: Scenario
    trajectory: Trajectory | DensityTrajectory
    final_fidelity: float | None = None
    fidelity_series: np.ndarray | None = None
    emission: EmissionReport | None = None

    @property
    def objective(self) -> float:
        if self.emission is not None:
            return self.emission.total_probability
        return self.final_fidelity

    def summary(self) -> dict:
        s = self.scenario
        out = {
            "scenario": s.id,
            "mode": s.mode,
            "convention": s.convention,
            "n_modes": s.params.n_modes,
            "t_span_ns": list(s.t_span),
        }
        if self.final_fidelity is not None:
            out["final_fidelity"] = self.final_fidelity
            out["max_norm_drift"] = self.trajectory.max_norm_drift
        if self.emission is not None:
            em = self.emission
            out["total_emission_probability"] = em.total_probability
            out["per_mode_emission_probability"] = em.final_per_mode.tolist()
            out["qutrit_loss"] = em.qutrit_loss
            out["qutrit_loss_approximate"] = em.qutrit_loss_approximate
            out["max_trace_drift"] = self.trajectory.max_trace_drift
            out["max_hermiticity_residual"] = self.trajectory.max_hermiticity_residual
            out["min_eigenvalue"] = self.trajectory.min_eigenvalue
        return out


def run_scenario(s: Scenario, settings: IntegratorSettings | None = None) -> ScenarioResult:
    """Simulate a scenario from |u,0...0>."""
    n = s.params.n_modes
    psi0 = basis_state(U, n)
    try:
        if s.mode == "closed":
            traj = evolve_schrodinger(s.params, s.pulse, psi0, s.t_span,
                                      s.sample_times, settings)
            target = target_in_full_basis(n, s.target)
            series = fidelity_series(traj, target)
            return ScenarioResult(s, traj, fidelity(traj.final, target), series)
        dtraj = evolve_lindblad(s.params, s.pulse, as_density(psi0), s.t_span,
                                s.sample_times, settings)
    except IntegrationError as exc:
        raise IntegrationError(f"scenario {s.id}: {exc}", exc.time) from exc
    return ScenarioResult(s, dtraj, emission=emission_report(dtraj, s.params))


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class Axis:
    name: str
    values: Sequence[float]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) == 0:
            raise ModelError(f"axis {self.name!r} is empty")
        if self.name not in AXIS_UNITS:
            raise ModelError(f"unknown sweep axis {self.name!r}; "
                             f"expected one of {sorted(AXIS_UNITS)}")
        object.__setattr__(self, "values", values)

    @property
    def unit(self) -> str:
        return AXIS_UNITS[self.name]


AXIS_UNITS = {
    "two_g_over_2pi_GHz": "GHz",
    "two_g_over_2pi_MHz": "MHz",
    "omega_max_over_2pi_GHz": "GHz",
    "omega_max_over_2pi_MHz": "MHz",
    "delta1_over_2pi_MHz": "MHz",
    "delta2_over_2pi_MHz": "MHz",
    "kappa_over_2pi_MHz": "MHz",
    "t_f_ns": "ns",
}


def apply_axis(s: Scenario, name: str, value: float) -> Scenario:
    """Return ``s`` with one swept quantity set (in its display unit)."""
    conv = s.convention
    if name.endswith("_GHz"):
        rate = units.ghz_to_rad_per_ns(value, conv)
    elif name.endswith("_MHz"):
        rate = units.mhz_to_rad_per_ns(value, conv)
    else:
        rate = value

    if name.startswith("two_g"):
        # sets 2 g_1 / 2pi, keeping the coupling ratios
        g1 = s.params.couplings[0]
        scale = 0.5 * rate / g1
        return s.with_params(couplings=tuple(g * scale for g in s.params.couplings))
    if name.startswith("omega_max"):
        pulse = s.pulse
        if isinstance(pulse, LinearRamp):
            return replace(s, pulse=replace(pulse, omega_max=rate))
        if isinstance(pulse, Gaussian):
            return replace(s, pulse=replace(pulse, omega0=rate))
        raise ModelError(f"cannot sweep the amplitude of {type(pulse).__name__}")
    if name.startswith("delta1"):
        return s.with_params(delta1=rate)
    if name.startswith("delta2"):
        return s.with_params(delta2=rate)
    if name.startswith("kappa"):
        return s.with_params(kappas=rate)
    if name == "t_f_ns":
        if not isinstance(s.pulse, LinearRamp):
            raise ModelError("t_f_ns applies to LinearRamp pulses only")
        return replace(s, pulse=replace(s.pulse, t_f=rate))
    raise ModelError(f"unknown sweep axis {name!r}")


@dataclass
class SweepGrid:
    axis1: Axis
    axis2: Axis
    objective_name: str
    objective: np.ndarray            # (len(axis1), len(axis2)); NaN = failed cell
    argmax: tuple[int, int, float]
    failures: dict = field(default_factory=dict)

    def long_rows(self):
        for i, a in enumerate(self.axis1.values):
            for j, b in enumerate(self.axis2.values):
                yield a, b, float(self.objective[i, j])

    @property
    def argmax_values(self) -> tuple[float, float]:
        i, j, _ = self.argmax
        return self.axis1.values[i], self.axis2.values[j]


def grid_argmax(objective: np.ndarray, axis1: Sequence[float],
                axis2: Sequence[float]) -> tuple[int, int, float]:
    """Largest finite cell; exact ties go to the smaller axis1, then axis2 value."""
    obj = np.asarray(objective, dtype=float)
    if not np.any(np.isfinite(obj)):
        raise ModelError("every sweep cell failed")
    best = np.nanmax(obj)
    cells = np.argwhere(obj == best)
    i, j = min(cells, key=lambda c: (axis1[c[0]], axis2[c[1]]))
    return int(i), int(j), float(best)


def _scenario_objective(s: Scenario, objective: str, settings):
    result = run_scenario(s, settings)
    if objective == "emission_probability":
        if result.emission is None:
            raise ModelError("emission_probability needs an open-system scenario")
        return result.emission.total_probability
    if objective == "final_fidelity":
        if result.final_fidelity is None:
            raise ModelError("final_fidelity needs a closed-system scenario")
        return result.final_fidelity
    raise ModelError(f"unknown objective {objective!r}")


def _evaluate_cell(job):
    s, objective, settings = job
    try:
        return _scenario_objective(s, objective, settings), None
    except (IntegrationError, ModelError, ValueError) as exc:
        return math.nan, str(exc)


def _map(jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [_evaluate_cell(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_cell, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def sweep2d(template: Scenario, axis1: Axis, axis2: Axis,
            objective: str = "emission_probability",
            settings: IntegratorSettings | None = None,
            workers: int | None = None) -> SweepGrid:
    """Evaluate ``objective`` on every (axis1, axis2) cell.

    Cells that fail are stored as NaN with the error message in
    ``failures[(i, j)]``; they never abort the sweep.
    """
    settings = settings or IntegratorSettings()
    workers = default_workers() if workers is None else workers
    jobs, index = [], []
    for i, a in enumerate(axis1.values):
        for j, b in enumerate(axis2.values):
            try:
                s = apply_axis(apply_axis(template, axis1.name, a), axis2.name, b)
            except ModelError as exc:
                jobs.append(None)
                index.append((i, j, str(exc)))
                continue
            jobs.append((s, objective, settings))
            index.append((i, j, None))
    runnable = [j for j in jobs if j is not None]
    results = iter(_map(runnable, workers))

    grid = np.full((len(axis1.values), len(axis2.values)), math.nan)
    failures = {}
    for job, (i, j, err) in zip(jobs, index):
        if job is None:
            failures[(i, j)] = err
            continue
        value, err = next(results)
        grid[i, j] = value
        if err is not None:
            failures[(i, j)] = err
    return SweepGrid(axis1, axis2, objective, grid,
                     grid_argmax(grid, axis1.values, axis2.values), failures)


# ---------------------------------------------------------------------------
# calibration


DEFAULT_OMEGA_BOUNDS_MHZ = (50.0, 600.0)


def default_t_f_bounds(horizon):
    return (0.3 * horizon, 1.5 * horizon)


@dataclass
class CalibrationResult:
    pulse: LinearRamp
    objective: float
    omega_max_over_2pi_MHz: float
    t_f_ns: float
    evaluations: int
    history: list = field(default_factory=list)


def _level_points(lo, hi, k):
    if hi == lo or k == 1:
        return [0.5 * (lo + hi)] if hi != lo else [lo]
    return list(np.linspace(lo, hi, k))


def calibrate_pulse(template: Scenario,
                    omega_bounds_mhz: tuple[float, float] = DEFAULT_OMEGA_BOUNDS_MHZ,
                    t_f_bounds: tuple[float, float] | None = None,
                    budget: int = CALIBRATION_BUDGET,
                    points_per_axis: int = 5,
                    settings: IntegratorSettings | None = None,
                    workers: int | None = None) -> CalibrationResult:
    """Coarse-to-fine grid search of a linear ramp maximizing emission.

    Each level evaluates a ``points_per_axis`` square grid inside the current
    box, then shrinks the box to one grid step around the best cell (clipped
    to the original bounds). Stops when the next level would exceed
    ``budget`` evaluations. Ties favour smaller omega_max, then smaller t_f.
    """
    if template.mode != "open":
        raise ModelError("calibration needs an open-system template")
    if budget < 1:
        raise ModelError("budget must be >= 1")
    t_f_bounds = t_f_bounds or default_t_f_bounds(template.t_span[1])
    (w_lo, w_hi), (t_lo, t_hi) = omega_bounds_mhz, t_f_bounds
    if not (0 <= w_lo <= w_hi and 0 < t_lo <= t_hi):
        raise ModelError(f"bad calibration bounds {omega_bounds_mhz}, {t_f_bounds}")
    settings = settings or IntegratorSettings()
    workers = default_workers() if workers is None else workers

    def make(w_mhz, t_f):
        pulse = LinearRamp(units.mhz_to_rad_per_ns(w_mhz, template.convention), t_f)
        return replace(template, pulse=pulse)

    best = None
    used = 0
    history = []
    box = (w_lo, w_hi, t_lo, t_hi)
    while True:
        k = points_per_axis
        while k > 1 and used + k * k > budget:
            k -= 1
        if used + k * k > budget or (best is not None and k == 1):
            break
        ws = _level_points(box[0], box[1], k)
        ts = _level_points(box[2], box[3], k)
        jobs = [(make(w, t), "emission_probability", settings) for w in ws for t in ts]
        values = [v for v, _ in _map(jobs, workers)]
        used += len(jobs)
        obj = np.array(values).reshape(len(ws), len(ts))
        history.append({"omega_max_over_2pi_MHz": ws, "t_f_ns": ts,
                        "objective": obj.tolist()})
        if not np.any(np.isfinite(obj)):
            if best is None:
                raise ModelError("calibration: no feasible pulse in the bounds")
            break
        i, j, value = grid_argmax(obj, ws, ts)
        if best is None or value > best[0]:
            best = (value, ws[i], ts[j])
        if len(ws) == 1 and len(ts) == 1:
            break
        dw = (box[1] - box[0]) / (len(ws) - 1) if len(ws) > 1 else 0.0
        dt = (box[3] - box[2]) / (len(ts) - 1) if len(ts) > 1 else 0.0
        box = (max(w_lo, ws[i] - dw), min(w_hi, ws[i] + dw),
               max(t_lo, ts[j] - dt), min(t_hi, ts[j] + dt))
        if dw == 0.0 and dt == 0.0:
            break

    value, w_best, t_best = best
    return CalibrationResult(
        pulse=make(w_best, t_best).pulse, objective=float(value),
        omega_max_over_2pi_MHz=float(w_best), t_f_ns=float(t_best),
        evaluations=used, history=history)


def calibration_template(scenario_id, convention="angular"):
    """Emission scenario with a placeholder pulse, ready for calibration."""
    if scenario_id == "fig6b_emission":
        scenario_id = "fig5_k500"
    if scenario_id not in _EMISSION_SPECS:
        raise ModelError(f"{scenario_id!r} has no calibratable ramp pulse")
    return _emission(scenario_id, convention, pulse=LinearRamp(1.0, 1.0))


# ---------------------------------------------------------------------------
# mode-number families


@dataclass
class ModeFamilyResult:
    modes: tuple[int, ...]
    values: dict                 # M -> final fidelity or total emission probability
    per_mode: dict               # M -> per-mode emission probabilities (open only)
    scaling: dict                # M -> InvarianceReport against the first M

    @property
    def spread(self) -> float:
        v = list(self.values.values())
        return max(v) - min(v)


def run_mode_family(family: str, modes: Sequence[int] = FIG6_MODES,
                    convention: str = "angular",
                    settings: IntegratorSettings | None = None,
                    with_scaling: bool = False) -> ModeFamilyResult:
    """Run the fig6a or fig6b family over ``modes``."""
    build: Callable[[int, str], Scenario]
    if family == "fig6a_fidelity":
        build = fig6a_scenario
    elif family == "fig6b_emission":
        build = fig6b_scenario
    else:
        raise ModelError(f"unknown mode family {family!r}")
    modes = tuple(int(m) for m in modes)
    values, per_mode, scaling = {}, {}, {}
    ref = build(modes[0], convention)
    for m in modes:
        s = build(m, convention)
        r = run_scenario(s, settings)
        values[m] = r.objective
        if r.emission is not None:
            per_mode[m] = r.emission.final_per_mode
        if with_scaling:
            check = check_schrodinger_scaling if s.mode == "closed" else check_lindblad_scaling
            scaling[m] = check(ref.params, s.params, s.pulse, s.t_span, settings,
                               s.sample_times)
    return ModeFamilyResult(modes, values, per_mode, scaling)
