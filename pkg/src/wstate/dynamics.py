"""Time evolution: Schrodinger equation, Lindblad master equation, and an
exact piecewise-constant propagator used as a verification oracle.

The main integrators work on the state itself (vector or full density
matrix). The oracle is deliberately built differently: it freezes the pump on
short slices and applies the matrix exponential of the frozen generator, the
Hamiltonian for pure states and the vectorized Liouvillian for density
matrices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .model import (
    SystemParams,
    PulseSpec,
    build_hamiltonian,
    build_jump_operators,
    dimension,
)

METHODS = ("adaptive_embedded_rk", "fixed_rk4")
DEFAULT_SAMPLES = 2001

NORM_TOL = 1e-6
HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = 1e-8
INITIAL_POSITIVITY_TOL = 1e-10


class IntegrationError(RuntimeError):
    """The integrator failed; ``time`` is where it stopped."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


@dataclass(frozen=True)
class IntegratorSettings:
    """Tolerances and method choice.

    For ``fixed_rk4`` the step is ``max_step`` (each interval between
    consecutive sample times is split into equal sub-steps no longer than
    that), so ``max_step`` must be finite.
    """

    rtol: float = 1e-8
    atol: float = 1e-10
    max_step: float = math.inf
    method: str = "adaptive_embedded_rk"

    def __post_init__(self):
        if not self.rtol > 0:
            raise ValueError("rtol must be > 0")
        if not self.atol > 0:
            raise ValueError("atol must be > 0")
        if not self.max_step > 0:
            raise ValueError("max_step must be > 0")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.method == "fixed_rk4" and not math.isfinite(self.max_step):
            raise ValueError("fixed_rk4 needs a finite max_step")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray          # (n_times, N+2)
    pulse_values: np.ndarray

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.states, axis=1) - 1.0)))

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


@dataclass
class DensityTrajectory:
    times: np.ndarray
    rhos: np.ndarray            # (n_times, N+3, N+3)
    pulse_values: np.ndarray

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diagonal(self.rhos, axis1=1, axis2=2))

    @property
    def max_trace_drift(self) -> float:
        tr = np.real(np.trace(self.rhos, axis1=1, axis2=2))
        return float(np.max(np.abs(tr - 1.0)))

    @property
    def max_hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.rhos - np.conj(np.swapaxes(self.rhos, 1, 2)))))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(self.rhos)))

    @property
    def final(self) -> np.ndarray:
        return self.rhos[-1]


def default_sample_times(t_span, n=DEFAULT_SAMPLES):
    return np.linspace(t_span[0], t_span[1], n)


def _sample_grid(t_span, sample_times):
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError(f"t_span must be increasing, got {t_span}")
    if sample_times is None:
        return default_sample_times((t0, t1))
    ts = np.asarray(sample_times, dtype=float)
    if ts.ndim != 1 or len(ts) == 0:
        raise ValueError("sample_times must be a non-empty 1-D sequence")
    if np.any(np.diff(ts) <= 0):
        raise ValueError("sample_times must be strictly increasing")
    if ts[0] < t0 or ts[-1] > t1:
        raise ValueError("sample_times must lie inside t_span")
    return ts


def _pulse_series(pulse, times):
    return np.array([pulse(t) for t in times])


def _integrate(rhs, y0, t_span, times, settings):
    """Integrate dy/dt = rhs(t, y) and return y at ``times`` (rows)."""
    if settings.method == "fixed_rk4":
        return _integrate_rk4(rhs, y0, float(t_span[0]), times, settings.max_step)
    sol = solve_ivp(
        rhs, (float(t_span[0]), float(t_span[1])), y0,
        method="RK45", t_eval=times, rtol=settings.rtol, atol=settings.atol,
        max_step=settings.max_step)
    if sol.status != 0:
        t_fail = float(sol.t[-1]) if len(sol.t) else float(t_span[0])
        raise IntegrationError(
            f"integration failed at t = {t_fail:.6g} ns: {sol.message}", t_fail)
    return sol.y.T


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _integrate_rk4(rhs, y0, t0, times, max_step):
    out = np.empty((len(times), len(y0)), dtype=complex)
    y = np.array(y0, dtype=complex)
    t = t0
    for k, t_next in enumerate(times):
        span = t_next - t
        if span > 0:
            n = max(1, math.ceil(span / max_step - 1e-12))
            h = span / n
            for j in range(n):
                y = _rk4_step(rhs, t + j * h, y, h)
            t = t_next
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"fixed_rk4 diverged at t = {t:.6g} ns", t)
        out[k] = y
    return out


# ---------------------------------------------------------------------------
# closed system


def _closed_parts(params, initial):
    d = dimension(params.n_modes, False)
    psi0 = np.asarray(initial, dtype=complex)
    if psi0.shape != (d,):
        raise ValueError(f"initial state must have shape ({d},), got {psi0.shape}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    h_static = build_hamiltonian(params, 0.0)
    h_pump = build_hamiltonian(params, 1.0) - h_static
    return psi0, h_static, h_pump


def evolve_schrodinger(params: SystemParams, pulse: PulseSpec, initial,
                       t_span, sample_times=None,
                       settings: IntegratorSettings | None = None) -> Trajectory:
    """Integrate d psi/dt = -i H(Omega(t)) psi over ``t_span``."""
    return evolve_schrodinger_many([params], pulse, [initial], t_span,
                                   sample_times, settings)[0]


def evolve_schrodinger_many(params_list, pulse: PulseSpec, initials, t_span,
                            sample_times=None,
                            settings: IntegratorSettings | None = None) -> list[Trajectory]:
    """Integrate several closed systems as one stacked ODE.

    All systems share the pump and, more importantly, the integrator's step
    sequence, so differences between their solutions reflect the dynamics
    rather than step-size choices that depend on the state dimension.
    """
    settings = settings or IntegratorSettings()
    parts = [_closed_parts(p, psi) for p, psi in zip(params_list, initials, strict=True)]
    times = _sample_grid(t_span, sample_times)
    sizes = [len(psi0) for psi0, _, _ in parts]
    cuts = np.cumsum(sizes)[:-1]

    def rhs(t, y):
        om = pulse(t)
        return np.concatenate([-1j * ((hs + om * hp) @ blk)
                               for (_, hs, hp), blk in zip(parts, np.split(y, cuts))])

    y0 = np.concatenate([psi0 for psi0, _, _ in parts])
    flat = _integrate(rhs, y0, t_span, times, settings)
    omegas = _pulse_series(pulse, times)
    out = []
    for block in np.split(flat, cuts, axis=1):
        traj = Trajectory(times, block, omegas)
        drift = traj.max_norm_drift
        if drift > NORM_TOL:
            warnings.warn(f"norm drift {drift:.2e} exceeds {NORM_TOL:g}", RuntimeWarning)
        out.append(traj)
    return out


# ---------------------------------------------------------------------------
# open system


def check_density_matrix(rho, d):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise ValueError(f"initial density matrix must have shape ({d}, {d}), got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise ValueError("initial density matrix is not hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValueError("initial density matrix must have unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -INITIAL_POSITIVITY_TOL:
        raise ValueError("initial density matrix is not positive semidefinite")
    return rho


def _open_parts(params, initial):
    d = dimension(params.n_modes, True)
    rho0 = check_density_matrix(initial, d)
    h_static = build_hamiltonian(params, 0.0, include_sink=True)
    h_pump = build_hamiltonian(params, 1.0, include_sink=True) - h_static
    jumps = np.array([L for L in build_jump_operators(params) if np.any(L)])
    if len(jumps) == 0:
        jumps = np.zeros((1, d, d), dtype=complex)
    jumps_dag = np.conj(np.swapaxes(jumps, 1, 2))
    decay = 0.5 * np.sum(jumps_dag @ jumps, axis=0)
    return d, rho0, h_static - 1j * decay, h_pump, jumps, jumps_dag


def evolve_lindblad(params: SystemParams, pulse: PulseSpec, initial,
                    t_span, sample_times=None,
                    settings: IntegratorSettings | None = None) -> DensityTrajectory:
    """Integrate the Lindblad master equation on the N+3 dimensional basis.

    Uses the non-hermitian effective Hamiltonian
    ``H_eff = H - (i/2) sum L^dag L`` so that the right-hand side is
    ``-i (H_eff rho - rho H_eff^dag) + sum L rho L^dag``.
    """
    return evolve_lindblad_many([params], pulse, [initial], t_span,
                                sample_times, settings)[0]


def evolve_lindblad_many(params_list, pulse: PulseSpec, initials, t_span,
                         sample_times=None,
                         settings: IntegratorSettings | None = None) -> list[DensityTrajectory]:
    """Open-system counterpart of :func:`evolve_schrodinger_many`."""
    settings = settings or IntegratorSettings()
    parts = [_open_parts(p, r) for p, r in zip(params_list, initials, strict=True)]
    times = _sample_grid(t_span, sample_times)
    sizes = [d * d for d, *_ in parts]
    cuts = np.cumsum(sizes)[:-1]

    def rhs(t, y):
        om = pulse(t)
        out = []
        for (d, _, heff_s, hp, jumps, jumps_dag), blk in zip(parts, np.split(y, cuts)):
            rho = blk.reshape(d, d)
            heff = heff_s + om * hp
            drho = -1j * (heff @ rho - rho @ heff.conj().T)
            drho += np.sum(jumps @ rho @ jumps_dag, axis=0)
            out.append(drho.ravel())
        return np.concatenate(out)

    y0 = np.concatenate([rho0.ravel() for _, rho0, *_ in parts])
    flat = _integrate(rhs, y0, t_span, times, settings)
    omegas = _pulse_series(pulse, times)
    out = []
    for (d, *_), block in zip(parts, np.split(flat, cuts, axis=1)):
        rhos = block.reshape(len(times), d, d)
        rhos = 0.5 * (rhos + np.conj(np.swapaxes(rhos, 1, 2)))
        traj = DensityTrajectory(times, rhos, omegas)
        drift = traj.max_trace_drift
        if drift > NORM_TOL:
            warnings.warn(f"trace drift {drift:.2e} exceeds {NORM_TOL:g}", RuntimeWarning)
        out.append(traj)
    return out


# ---------------------------------------------------------------------------
# oracle


def liouvillian(params: SystemParams, omega: float) -> np.ndarray:
    """Superoperator acting on row-major flattened density matrices.

    With ``vec(rho) = rho.ravel()`` one has ``vec(A rho B) = (A kron B^T) vec(rho)``.
    """
    d = dimension(params.n_modes, True)
    eye = np.eye(d)
    h = build_hamiltonian(params, omega, include_sink=True)
    sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for L in build_jump_operators(params):
        ldl = L.conj().T @ L
        sup += np.kron(L, L.conj())
        sup -= 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
    return sup


def propagate_oracle(params: SystemParams, pulse: PulseSpec, initial, t_span,
                     n_slices: int, record_every: int | None = None):
    """Piecewise-constant exact propagation.

    The pump is frozen at the midpoint of each of ``n_slices`` equal slices
    and the matrix exponential of the frozen generator is applied. A state
    vector of length N+2 gives a :class:`Trajectory`; an (N+3)x(N+3) density
    matrix gives a :class:`DensityTrajectory`. States are recorded at every
    ``record_every``-th slice boundary (default: only the two endpoints).
    """
    n_slices = int(n_slices)
    if n_slices < 1:
        raise ValueError("n_slices must be >= 1")
    if record_every is None:
        record_every = n_slices
    if record_every < 1 or n_slices % record_every:
        raise ValueError("record_every must divide n_slices")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError(f"t_span must be increasing, got {t_span}")
    edges = np.linspace(t0, t1, n_slices + 1)
    initial = np.asarray(initial, dtype=complex)
    n = params.n_modes

    if initial.ndim == 1:
        d = dimension(n, False)
        if initial.shape != (d,):
            raise ValueError(f"state vector must have shape ({d},), got {initial.shape}")

        def step(slice_start, slice_end):
            omega = pulse(0.5 * (slice_start + slice_end))
            return expm(-1j * (slice_end - slice_start) * build_hamiltonian(params, omega))

        y = initial.copy()
    else:
        d = dimension(n, True)
        if initial.shape != (d, d):
            raise ValueError(f"density matrix must have shape ({d}, {d}), got {initial.shape}")
        check_density_matrix(initial, d)

        def step(slice_start, slice_end):
            omega = pulse(0.5 * (slice_start + slice_end))
            return expm((slice_end - slice_start) * liouvillian(params, omega))

        y = initial.ravel().copy()

    recorded = [y.copy()]
    cache = {}
    for k in range(n_slices):
        a, b = edges[k], edges[k + 1]
        key = (pulse(0.5 * (a + b)), round((b - a) * 1e12))
        prop = cache.get(key)
        if prop is None:
            prop = step(a, b)
            if len(cache) < 64:
                cache[key] = prop
        y = prop @ y
        if (k + 1) % record_every == 0:
            recorded.append(y.copy())

    times = edges[::record_every]
    omegas = _pulse_series(pulse, times)
    if initial.ndim == 1:
        return Trajectory(times, np.array(recorded), omegas)
    rhos = np.array(recorded).reshape(len(times), d, d)
    rhos = 0.5 * (rhos + np.conj(np.swapaxes(rhos, 1, 2)))
    return DensityTrajectory(times, rhos, omegas)
