"""Closed-form quantities, observables and the mode-number scaling checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .model import (
    E,
    U,
    ModelError,
    SystemParams,
    WStateWeights,
    as_density,
    basis_state,
    embed_modes,
    target_w_state,
)
from .dynamics import (
    DensityTrajectory,
    IntegratorSettings,
    Trajectory,
    _sample_grid,
    evolve_lindblad_many,
    evolve_schrodinger_many,
)

RESONANCE_TOL = 1e-12
RATIO_FLOOR = 1e-8


def _require_resonance(params):
    if abs(params.delta1 - params.delta2) > RESONANCE_TOL:
        raise ModelError(
            "two-photon resonance required (delta1 == delta2), got "
            f"delta1={params.delta1!r}, delta2={params.delta2!r}")


def dark_state(params: SystemParams, omega: float) -> np.ndarray:
    """Zero-energy eigenstate reached from |u,0...0>.

    ``(2A|u> - Omega|g,W_N>) / sqrt(4A^2 + Omega^2)`` with W_N weighted by the
    couplings.
    """
    _require_resonance(params)
    a = params.coupling_norm
    w = embed_modes(target_w_state(params.couplings))
    psi = 2.0 * a * basis_state(U, params.n_modes) - omega * w
    return psi / math.sqrt(4.0 * a * a + omega * omega)


def dark_state_family(params: SystemParams, omega: float,
                      weights: WStateWeights) -> np.ndarray:
    """General zero-energy solution for arbitrary (non-negative) weights."""
    _require_resonance(params)
    if not isinstance(weights, WStateWeights):
        weights = WStateWeights(tuple(weights))
    if weights.n_modes != params.n_modes:
        raise ModelError("weights and couplings differ in length")
    overlap = math.fsum(a * g for a, g in zip(weights.weights, params.couplings))
    norm_a = weights.norm
    w = embed_modes(target_w_state(weights))
    psi = 2.0 * overlap * basis_state(U, params.n_modes) - omega * norm_a * w
    nrm = math.sqrt(4.0 * overlap ** 2 + (omega * norm_a) ** 2)
    if nrm == 0.0:
        raise ModelError("weights are orthogonal to the couplings at omega = 0")
    return psi / nrm


def adiabatic_gap(params: SystemParams, omega: float) -> float:
    a2 = params.coupling_norm ** 2
    d1 = params.delta1
    return 0.5 * (d1 - math.sqrt(4.0 * a2 + omega * omega + d1 * d1))


def ideal_final_fidelity(params: SystemParams, omega0: float) -> float:
    a2 = params.coupling_norm ** 2
    return omega0 * omega0 / (4.0 * a2 + omega0 * omega0)


def fidelity(state, target) -> float:
    state = np.asarray(state)
    target = np.asarray(target)
    if state.shape != target.shape:
        raise ValueError(f"dimension mismatch: {state.shape} vs {target.shape}")
    return float(abs(np.vdot(target, state)) ** 2)


def target_in_full_basis(params_or_n, weights=None) -> np.ndarray:
    """|g, W> in the closed-system basis. Defaults to coupling weights."""
    if weights is None:
        weights = params_or_n.couplings
    return embed_modes(target_w_state(weights))


def fidelity_series(traj: Trajectory, target) -> np.ndarray:
    return np.abs(traj.states @ np.conj(target)) ** 2


def adiabatic_fidelity_series(traj: Trajectory, params: SystemParams,
                              pulse=None) -> np.ndarray:
    """|<psi(t)|Psi_0(Omega(t))>|^2 along a trajectory.

    The dark state is evaluated at the instantaneous pump value. When
    ``pulse`` is omitted the values recorded in the trajectory are used.
    """
    _require_resonance(params)
    if pulse is None:
        omegas = traj.pulse_values
    else:
        omegas = [pulse(t) for t in traj.times]
    out = np.empty(len(traj.times))
    for k, (psi, om) in enumerate(zip(traj.states, omegas)):
        out[k] = fidelity(psi, dark_state(params, om))
    return np.clip(out, 0.0, 1.0)


# ---------------------------------------------------------------------------
# emission


@dataclass
class EmissionReport:
    """Per-mode output-field statistics of an open-system run.

    ``per_mode_rates[t, i] = kappa_i * rho_ii(t)`` and
    ``per_mode_probabilities`` is its running trapezoid integral.
    ``qutrit_loss`` is the final sink population minus the emitted
    probability; it is only approximate for the ``combined`` decay model,
    where one operator mixes both decay channels coherently.
    """

    times: np.ndarray
    per_mode_rates: np.ndarray
    per_mode_probabilities: np.ndarray
    total_probability: float
    qutrit_loss: float
    qutrit_loss_approximate: bool

    @property
    def cumulative_total(self) -> np.ndarray:
        return self.per_mode_probabilities.sum(axis=1)

    @property
    def final_per_mode(self) -> np.ndarray:
        return self.per_mode_probabilities[-1]


def emission_report(dtraj: DensityTrajectory, params: SystemParams) -> EmissionReport:
    n = params.n_modes
    pops = dtraj.populations
    kappas = np.array(params.kappas)
    rates = pops[:, 2:2 + n] * kappas
    if len(dtraj.times) > 1:
        probs = cumulative_trapezoid(rates, dtraj.times, axis=0, initial=0.0)
    else:
        probs = np.zeros_like(rates)
    total = float(probs[-1].sum())
    sink = float(pops[-1, n + 2] - pops[0, n + 2])
    return EmissionReport(
        times=dtraj.times,
        per_mode_rates=rates,
        per_mode_probabilities=probs,
        total_probability=total,
        qutrit_loss=sink - total,
        qutrit_loss_approximate=params.decay_model == "combined",
    )


# ---------------------------------------------------------------------------
# mode-number scaling


@dataclass
class InvarianceReport:
    """Suprema over sample times of the deviations from the scaling solution.

    Closed system: ``max_cu_deviation`` / ``max_ce_deviation`` compare
    amplitudes of |u> and |e>; ``max_ratio_deviation`` is the worst of
    ``|c_i/c_j - g_i/g_j|`` within each system; ``max_cross_ratio_deviation``
    is the worst ``|c'_k/c_i - g'_k/g_i|`` across systems;
    ``max_total_rate_deviation`` compares total one-photon populations.

    Open system: the same fields hold populations of |u> and |e>, the worst
    deviation of the per-mode share ``rho_ii / sum_j rho_jj`` from
    ``g_i^2 / A^2``, and the total emission rate ``kappa sum_i rho_ii``.
    """

    max_cu_deviation: float
    max_ce_deviation: float
    max_ratio_deviation: float
    max_total_rate_deviation: float
    max_cross_ratio_deviation: float = 0.0

    @property
    def worst(self) -> float:
        return max(self.max_cu_deviation, self.max_ce_deviation,
                   self.max_ratio_deviation, self.max_total_rate_deviation,
                   self.max_cross_ratio_deviation)


def _check_scaling_pair(p, q, open_system):
    sa = math.fsum(g * g for g in p.couplings)
    sb = math.fsum(g * g for g in q.couplings)
    if abs(sa - sb) > 1e-12 * max(sa, sb):
        raise ModelError(
            f"sum of squared couplings differs: {sa!r} vs {sb!r}")
    for name in ("delta1", "delta2", "gamma", "gamma_phi", "decay_model"):
        if getattr(p, name) != getattr(q, name):
            raise ModelError(f"{name} differs between the two systems")
    if open_system:
        kappas = set(p.kappas) | set(q.kappas)
        if len(kappas) != 1:
            raise ModelError("all kappas must be equal in both systems")


def _ratio_deviation(amps, couplings):
    worst = 0.0
    n = len(couplings)
    for j in range(n):
        cj = amps[:, j]
        mask = np.abs(cj) > RATIO_FLOOR
        if not np.any(mask):
            continue
        for i in range(n):
            if i == j:
                continue
            want = couplings[i] / couplings[j]
            dev = np.abs(amps[mask, i] / cj[mask] - want)
            worst = max(worst, float(dev.max()))
    return worst


def _cross_ratio_deviation(amps_p, g_p, amps_q, g_q):
    worst = 0.0
    for i in range(len(g_p)):
        ci = amps_p[:, i]
        mask = np.abs(ci) > RATIO_FLOOR
        if not np.any(mask):
            continue
        for k in range(len(g_q)):
            want = g_q[k] / g_p[i]
            dev = np.abs(amps_q[mask, k] / ci[mask] - want)
            worst = max(worst, float(dev.max()))
    return worst


def check_schrodinger_scaling(params_a: SystemParams, params_b: SystemParams,
                              pulse, t_span, settings: IntegratorSettings | None = None,
                              sample_times=None) -> InvarianceReport:
    """Verify that two closed systems with equal sum g^2 evolve identically."""
    _check_scaling_pair(params_a, params_b, open_system=False)
    times = _sample_grid(t_span, sample_times)
    # one stacked integration, so both systems see the same step sequence
    ta, tb = evolve_schrodinger_many(
        [params_a, params_b], pulse,
        [basis_state(U, params_a.n_modes), basis_state(U, params_b.n_modes)],
        t_span, times, settings)
    sa, sb = ta.states, tb.states
    modes_a, modes_b = sa[:, 2:], sb[:, 2:]
    return InvarianceReport(
        max_cu_deviation=float(np.max(np.abs(sa[:, U] - sb[:, U]))),
        max_ce_deviation=float(np.max(np.abs(sa[:, E] - sb[:, E]))),
        max_ratio_deviation=max(_ratio_deviation(modes_a, params_a.couplings),
                                _ratio_deviation(modes_b, params_b.couplings)),
        max_total_rate_deviation=float(np.max(np.abs(
            np.sum(np.abs(modes_a) ** 2, axis=1)
            - np.sum(np.abs(modes_b) ** 2, axis=1)))),
        max_cross_ratio_deviation=_cross_ratio_deviation(
            modes_a, params_a.couplings, modes_b, params_b.couplings),
    )


def _share_deviation(pops, couplings):
    g2 = np.square(couplings)
    share = g2 / g2.sum()
    total = pops.sum(axis=1)
    mask = total > RATIO_FLOOR
    if not np.any(mask):
        return 0.0
    dev = np.abs(pops[mask] / total[mask, None] - share)
    return float(dev.max())


def check_lindblad_scaling(params_a: SystemParams, params_b: SystemParams,
                           pulse, t_span, settings: IntegratorSettings | None = None,
                           sample_times=None) -> InvarianceReport:
    """Verify that total emission is unchanged under the coupling substitution."""
    _check_scaling_pair(params_a, params_b, open_system=True)
    times = _sample_grid(t_span, sample_times)
    initials = [as_density(basis_state(U, p.n_modes)) for p in (params_a, params_b)]
    reports = evolve_lindblad_many([params_a, params_b], pulse, initials, t_span,
                                   times, settings)
    pa, pb = reports[0].populations, reports[1].populations
    na, nb = params_a.n_modes, params_b.n_modes
    kappa = params_a.kappas[0]
    rate_a = kappa * pa[:, 2:2 + na].sum(axis=1)
    rate_b = kappa * pb[:, 2:2 + nb].sum(axis=1)
    return InvarianceReport(
        max_cu_deviation=float(np.max(np.abs(pa[:, U] - pb[:, U]))),
        max_ce_deviation=float(np.max(np.abs(pa[:, E] - pb[:, E]))),
        max_ratio_deviation=max(_share_deviation(pa[:, 2:2 + na], params_a.couplings),
                                _share_deviation(pb[:, 2:2 + nb], params_b.couplings)),
        max_total_rate_deviation=float(np.max(np.abs(rate_a - rate_b))),
    )
