"""Physical model of a driven qutrit coupled to N resonators.

The dynamics is restricted to the single-excitation manifold. Basis order is
fixed everywhere (simulation, serialization, CSV columns)::

    0        |u,0...0>      (U)
    1        |e,0...0>      (E)
    2..N+1   |g,0..1_i..0>  (Mode(i), i = 1..N)
    N+2      |g,0...0>      (Sink, open system only)

All frequencies are angular, in rad/ns; times are in ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

DECAY_MODELS = ("split", "combined")


class ModelError(ValueError):
    """Invalid physical parameters or pulse specification."""


# ---------------------------------------------------------------------------
# basis

U = 0
E = 1


def mode_index(i: int) -> int:
    """Basis index of the one-photon state of mode ``i`` (1-based)."""
    if i < 1:
        raise ModelError(f"mode numbers start at 1, got {i}")
    return 1 + i


def sink_index(n_modes: int) -> int:
    return n_modes + 2


def dimension(n_modes: int, include_sink: bool) -> int:
    return n_modes + 3 if include_sink else n_modes + 2


def basis_labels(n_modes: int, include_sink: bool) -> list[str]:
    labels = ["u", "e"] + [f"mode_{i}" for i in range(1, n_modes + 1)]
    if include_sink:
        labels.append("sink")
    return labels


def basis_state(index: int, n_modes: int, include_sink: bool = False) -> np.ndarray:
    psi = np.zeros(dimension(n_modes, include_sink), dtype=complex)
    psi[index] = 1.0
    return psi


# ---------------------------------------------------------------------------
# parameters


def _as_float_tuple(values, name):
    try:
        out = tuple(float(v) for v in values)
    except TypeError:
        raise ModelError(f"{name} must be a list of numbers") from None
    if not all(math.isfinite(v) for v in out):
        raise ModelError(f"{name} must be finite")
    return out


@dataclass(frozen=True)
class SystemParams:
    """Qutrit/resonator configuration. All rates in rad/ns.

    ``kappas`` may be given as a scalar, which is broadcast to every mode.
    """

    couplings: tuple[float, ...]
    delta1: float = 0.0
    delta2: float = 0.0
    gamma: float = 0.0
    gamma_phi: float = 0.0
    kappas: tuple[float, ...] | float = 0.0
    decay_model: str = "split"

    def __post_init__(self):
        couplings = _as_float_tuple(self.couplings, "couplings")
        if len(couplings) == 0:
            raise ModelError("couplings must contain at least one mode")
        object.__setattr__(self, "couplings", couplings)

        kappas = self.kappas
        if np.ndim(kappas) == 0:
            kappas = (float(kappas),) * len(couplings)
        kappas = _as_float_tuple(kappas, "kappas")
        if len(kappas) != len(couplings):
            raise ModelError(
                f"kappas has length {len(kappas)} but there are "
                f"{len(couplings)} couplings")
        object.__setattr__(self, "kappas", kappas)

        for name in ("delta1", "delta2", "gamma", "gamma_phi"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ModelError(f"{name} must be finite")
            object.__setattr__(self, name, value)

        if any(g < 0 for g in couplings):
            raise ModelError("couplings must be non-negative")
        if not any(g > 0 for g in couplings):
            raise ModelError("couplings: at least one coupling must be positive")
        if any(k < 0 for k in kappas):
            raise ModelError("kappas must be non-negative")
        if self.gamma < 0:
            raise ModelError("gamma must be non-negative")
        if self.gamma_phi < 0:
            raise ModelError("gamma_phi must be non-negative")
        if self.decay_model not in DECAY_MODELS:
            raise ModelError(
                f"decay_model must be one of {DECAY_MODELS}, "
                f"got {self.decay_model!r}")

    @property
    def n_modes(self) -> int:
        return len(self.couplings)

    @property
    def coupling_norm(self) -> float:
        """A = sqrt(sum g_i^2)."""
        return math.sqrt(math.fsum(g * g for g in self.couplings))

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)


# ---------------------------------------------------------------------------
# pulses


@dataclass(frozen=True)
class Gaussian:
    """Omega(t) = omega0 * exp(-(t - center)^2 / width^2)."""

    omega0: float
    center: float
    width: float

    def __post_init__(self):
        if not self.omega0 >= 0:
            raise ModelError("Gaussian omega0 must be >= 0")
        if not self.width > 0:
            raise ModelError("Gaussian width must be > 0")

    def __call__(self, t):
        return self.omega0 * math.exp(-((t - self.center) / self.width) ** 2)


@dataclass(frozen=True)
class LinearRamp:
    """Omega(t) = omega_max * (1 - t / t_f) on [0, t_f], zero afterwards."""

    omega_max: float
    t_f: float

    def __post_init__(self):
        if not self.omega_max >= 0:
            raise ModelError("LinearRamp omega_max must be >= 0")
        if not self.t_f > 0:
            raise ModelError("LinearRamp t_f must be > 0")

    def __call__(self, t):
        if t > self.t_f:
            return 0.0
        return max(self.omega_max * (1.0 - t / self.t_f), 0.0)


@dataclass(frozen=True)
class Constant:
    omega: float

    def __post_init__(self):
        if not self.omega >= 0:
            raise ModelError("Constant omega must be >= 0")

    def __call__(self, t):
        return self.omega


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation between ``(t, omega)`` knots, held flat outside."""

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        knots = tuple((float(t), float(w)) for t, w in self.knots)
        if len(knots) == 0:
            raise ModelError("PiecewiseLinear needs at least one knot")
        ts = [t for t, _ in knots]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ModelError("PiecewiseLinear knot times must be strictly increasing")
        if any(w < 0 for _, w in knots):
            raise ModelError("PiecewiseLinear knot values must be >= 0")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "_ts", np.array(ts))
        object.__setattr__(self, "_ws", np.array([w for _, w in knots]))

    def __call__(self, t):
        return float(np.interp(t, self._ts, self._ws))


PulseSpec = Union[Gaussian, LinearRamp, Constant, PiecewiseLinear]


def pulse_value(pulse: PulseSpec, t: float) -> float:
    """Pump Rabi frequency Omega(t) in rad/ns."""
    return pulse(t)


# ---------------------------------------------------------------------------
# operators


def build_hamiltonian(params: SystemParams, omega: float,
                      include_sink: bool = False) -> np.ndarray:
    """Interaction-picture Hamiltonian on the single-excitation manifold.

    The pump matrix element <u|H|e> is ``omega / 2``; the printed matrix
    carries an overall factor 1/2 that multiplies every entry, and this
    matches the ``Omega/2`` drive term of the lab-frame Hamiltonian.
    Diagonal: ``Delta1`` on |e>, ``Delta1 - Delta2`` on every one-photon
    state, zero on |u> and on the sink.
    """
    n = params.n_modes
    d = dimension(n, include_sink)
    h = np.zeros((d, d), dtype=complex)
    h[U, E] = h[E, U] = 0.5 * omega
    h[E, E] = params.delta1
    detuning = params.delta1 - params.delta2
    for i, g in enumerate(params.couplings, start=1):
        k = mode_index(i)
        h[E, k] = h[k, E] = g
        h[k, k] = detuning
    return h


def build_jump_operators(params: SystemParams) -> list[np.ndarray]:
    """Lindblad operators over the open-system basis (dimension N+3).

    Order: N resonator leakage operators, then qutrit decay (one operator for
    ``combined``, two for ``split``), then dephasing.
    """
    n = params.n_modes
    d = dimension(n, True)
    s = sink_index(n)
    ops = []
    for i, kappa in enumerate(params.kappas, start=1):
        L = np.zeros((d, d), dtype=complex)
        L[s, mode_index(i)] = math.sqrt(kappa)
        ops.append(L)

    root_gamma = math.sqrt(params.gamma)
    if params.decay_model == "combined":
        L = np.zeros((d, d), dtype=complex)
        L[U, E] = root_gamma
        L[s, E] = root_gamma
        ops.append(L)
    else:
        L = np.zeros((d, d), dtype=complex)
        L[U, E] = root_gamma
        ops.append(L)
        L = np.zeros((d, d), dtype=complex)
        L[s, E] = root_gamma
        ops.append(L)

    L = np.zeros((d, d), dtype=complex)
    L[E, E] = math.sqrt(params.gamma_phi)
    ops.append(L)
    return ops


# ---------------------------------------------------------------------------
# target states


@dataclass(frozen=True)
class WStateWeights:
    weights: tuple[float, ...]

    def __post_init__(self):
        w = _as_float_tuple(self.weights, "weights")
        if len(w) == 0:
            raise ModelError("weights must not be empty")
        if any(x < 0 for x in w):
            raise ModelError("weights must be non-negative")
        if not any(x > 0 for x in w):
            raise ModelError("weights must not all be zero")
        object.__setattr__(self, "weights", w)

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(x * x for x in self.weights))

    @property
    def n_modes(self) -> int:
        return len(self.weights)


def target_w_state(weights: WStateWeights | Sequence[float]) -> np.ndarray:
    """Normalized W-state amplitudes over the one-photon mode basis."""
    if not isinstance(weights, WStateWeights):
        weights = WStateWeights(tuple(weights))
    w = np.array(weights.weights)
    return (w / weights.norm).astype(complex)


def embed_modes(amplitudes: np.ndarray, include_sink: bool = False) -> np.ndarray:
    """Place mode-basis amplitudes into the full basis as |g, W>."""
    n = len(amplitudes)
    psi = np.zeros(dimension(n, include_sink), dtype=complex)
    psi[2:2 + n] = amplitudes
    return psi


def as_density(psi: np.ndarray, include_sink: bool = True) -> np.ndarray:
    """|psi><psi|, padded with an empty sink row/column when needed."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.outer(psi, psi.conj())
    if include_sink:
        d = len(psi) + 1
        out = np.zeros((d, d), dtype=complex)
        out[:-1, :-1] = rho
        return out
    return rho
