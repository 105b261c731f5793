import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wstate.analysis import dark_state
from wstate.model import (
    E,
    U,
    Constant,
    Gaussian,
    LinearRamp,
    ModelError,
    PiecewiseLinear,
    SystemParams,
    WStateWeights,
    build_hamiltonian,
    build_jump_operators,
    mode_index,
    pulse_value,
    sink_index,
    target_w_state,
)

from conftest import ghz


# -- pulses -----------------------------------------------------------------

def test_gaussian_peak():
    p = Gaussian(omega0=ghz(0.7), center=1000.0, width=360.0)
    assert pulse_value(p, 1000.0) == ghz(0.7)


def test_gaussian_not_truncated_at_zero():
    om0 = ghz(0.7)
    p = Gaussian(omega0=om0, center=1000.0, width=360.0)
    expected = om0 * math.exp(-(1000.0 / 360.0) ** 2)
    assert pulse_value(p, 0.0) == pytest.approx(expected, rel=1e-14)
    assert pulse_value(p, 0.0) / om0 == pytest.approx(4.46e-4, rel=2e-3)
    assert pulse_value(p, -50.0) > 0


def test_linear_ramp():
    p = LinearRamp(omega_max=ghz(0.19), t_f=45.0)
    assert pulse_value(p, 0.0) == ghz(0.19)
    assert pulse_value(p, 45.0) == 0.0
    assert pulse_value(p, 22.5) == pytest.approx(ghz(0.19) / 2)
    assert pulse_value(p, 47.0) == 0.0


def test_constant_and_piecewise():
    assert pulse_value(Constant(1.5), 123.0) == 1.5
    p = PiecewiseLinear(((0.0, 0.0), (10.0, 2.0), (20.0, 1.0)))
    assert pulse_value(p, 5.0) == pytest.approx(1.0)
    assert pulse_value(p, 15.0) == pytest.approx(1.5)
    assert pulse_value(p, 30.0) == 1.0


@pytest.mark.parametrize("bad", [
    lambda: Gaussian(-1.0, 0.0, 1.0),
    lambda: Gaussian(1.0, 0.0, 0.0),
    lambda: LinearRamp(1.0, 0.0),
    lambda: LinearRamp(-1.0, 5.0),
    lambda: Constant(-0.1),
    lambda: PiecewiseLinear(((0.0, 1.0), (0.0, 2.0))),
    lambda: PiecewiseLinear(((0.0, -1.0),)),
])
def test_invalid_pulses(bad):
    with pytest.raises(ModelError):
        bad()


# -- parameters --------------------------------------------------------------

@pytest.mark.parametrize("kwargs, match", [
    (dict(couplings=()), "couplings"),
    (dict(couplings=(0.0, 0.0)), "couplings"),
    (dict(couplings=(1.0, -1.0)), "couplings"),
    (dict(couplings=(1.0,), kappas=(1.0, 1.0)), "kappas"),
    (dict(couplings=(1.0,), kappas=-1.0), "kappas"),
    (dict(couplings=(1.0,), gamma=-1.0), "gamma"),
    (dict(couplings=(1.0,), gamma_phi=-1.0), "gamma_phi"),
    (dict(couplings=(1.0,), decay_model="other"), "decay_model"),
])
def test_invalid_params(kwargs, match):
    with pytest.raises(ModelError, match=match):
        SystemParams(**kwargs)


def test_scalar_kappa_broadcast():
    p = SystemParams(couplings=(1.0, 2.0, 3.0), kappas=0.5)
    assert p.kappas == (0.5, 0.5, 0.5)
    assert p.coupling_norm == pytest.approx(math.sqrt(14.0))


# -- Hamiltonian -------------------------------------------------------------

def test_hamiltonian_entries():
    p = SystemParams(couplings=(0.1, 0.2), delta1=0.3, delta2=0.05)
    h = build_hamiltonian(p, 0.8, include_sink=True)
    assert h.shape == (5, 5)
    assert h[U, E] == h[E, U] == 0.4
    assert h[E, E] == 0.3
    assert h[E, mode_index(1)] == 0.1 and h[E, mode_index(2)] == 0.2
    assert h[mode_index(1), mode_index(1)] == pytest.approx(0.25)
    assert not np.any(h[sink_index(2)]) and not np.any(h[:, sink_index(2)])
    assert h[U, U] == 0 and h[mode_index(1), mode_index(2)] == 0


def test_hamiltonian_spectrum_three_equal_modes():
    g = ghz(0.0225)
    p = SystemParams(couplings=(g, g, g))
    for omega in (0.0, 0.3, ghz(0.7)):
        ev = np.sort(np.linalg.eigvalsh(build_hamiltonian(p, omega)))
        bright = math.sqrt(3 * g * g + omega * omega / 4)
        np.testing.assert_allclose(ev, [-bright, 0, 0, 0, bright], atol=1e-12)


def test_zero_hamiltonian():
    # a zero coupling list is rejected, so check the only remaining off-diagonal
    p = SystemParams(couplings=(1e-300,))
    h = build_hamiltonian(p, 0.0)
    assert np.max(np.abs(h)) <= 1e-300


def test_dark_state_annihilated_three_modes():
    p = SystemParams(couplings=(ghz(0.0225),) * 3, delta1=0.2, delta2=0.2)
    for omega in (0.0, 0.1, ghz(0.7), 50.0):
        h = build_hamiltonian(p, omega)
        assert np.linalg.norm(h @ dark_state(p, omega)) <= 1e-12 * max(1.0, np.linalg.norm(h))


@settings(max_examples=60, deadline=None)
@given(
    g=st.lists(st.floats(min_value=0.0, max_value=2.0), min_size=1, max_size=20)
      .filter(lambda v: max(v) > 1e-3),
    omega=st.floats(min_value=0.0, max_value=10.0),
    delta=st.floats(min_value=-1.0, max_value=1.0),
    d2=st.floats(min_value=-1.0, max_value=1.0),
)
def test_hamiltonian_hermitian_and_dark(g, omega, delta, d2):
    p = SystemParams(couplings=tuple(g), delta1=delta, delta2=d2)
    h = build_hamiltonian(p, omega, include_sink=True)
    assert np.array_equal(h, h.conj().T)
    pr = SystemParams(couplings=tuple(g), delta1=delta, delta2=delta)
    hr = build_hamiltonian(pr, omega)
    assert np.linalg.norm(hr @ dark_state(pr, omega)) <= 1e-12 * np.linalg.norm(hr)


# -- jump operators ----------------------------------------------------------

def _nonzero(ops):
    return [L for L in ops if np.any(L)]


def test_jumps_cavity_only():
    k = ghz(0.2)
    p = SystemParams(couplings=(1.0,) * 3, kappas=k)
    ops = _nonzero(build_jump_operators(p))
    assert len(ops) == 3
    for i, L in enumerate(ops, start=1):
        assert L.shape == (6, 6)
        assert np.count_nonzero(L) == 1
        assert L[sink_index(3), mode_index(i)] == pytest.approx(math.sqrt(k))


@pytest.mark.parametrize("model", ["combined", "split"])
def test_excited_state_total_decay(model):
    gamma, gphi = 0.3, 0.07
    p = SystemParams(couplings=(1.0, 1.0), gamma=gamma, gamma_phi=gphi,
                     kappas=0.5, decay_model=model)
    total = sum(L.conj().T @ L for L in build_jump_operators(p))
    assert total[E, E] == pytest.approx(2 * gamma + gphi, rel=1e-14)


def test_split_and_combined_same_decay_operator():
    kw = dict(couplings=(1.0, 2.0, 0.5), gamma=0.3, gamma_phi=0.1, kappas=(0.2, 0.4, 0.6))
    a = sum(L.conj().T @ L for L in build_jump_operators(SystemParams(**kw, decay_model="split")))
    b = sum(L.conj().T @ L for L in build_jump_operators(SystemParams(**kw, decay_model="combined")))
    np.testing.assert_allclose(a, b, atol=1e-15)


def test_jump_counts():
    p = SystemParams(couplings=(1.0,) * 4, gamma=0.1, gamma_phi=0.1, kappas=0.1)
    assert len(build_jump_operators(p)) == 4 + 2 + 1
    assert len(build_jump_operators(p.replace(decay_model="combined"))) == 4 + 1 + 1


# -- target states -----------------------------------------------------------

@pytest.mark.parametrize("weights, expected", [
    ((1, 1, 1), np.ones(3) / math.sqrt(3)),
    ((1, 1, math.sqrt(2)), np.array([1, 1, math.sqrt(2)]) / 2),
    ((1, 1), np.ones(2) / math.sqrt(2)),
    ((1, math.sqrt(2), math.sqrt(3)), np.array([1, math.sqrt(2), math.sqrt(3)]) / math.sqrt(6)),
])
def test_target_w_state(weights, expected):
    psi = target_w_state(WStateWeights(weights))
    np.testing.assert_allclose(psi, expected, atol=1e-15)
    assert abs(np.sum(np.abs(psi) ** 2) - 1) <= 1e-12


def test_target_rejects_zero():
    with pytest.raises(ModelError):
        target_w_state((0.0, 0.0))


@given(w=st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=1, max_size=12)
          .filter(lambda v: max(v) > 1e-6),
       c=st.floats(min_value=1e-3, max_value=1e3))
def test_target_scale_invariant(w, c):
    a = target_w_state(w)
    b = target_w_state([c * x for x in w])
    assert np.max(np.abs(a - b)) <= 1e-15 * 4
    assert abs(np.linalg.norm(a) - 1) <= 1e-12
