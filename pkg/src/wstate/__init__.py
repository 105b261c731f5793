"""Pumped qutrit coupled to N resonators: W-state preparation by adiabatic
passage and photon emission through lossy resonators."""

__version__ = "0.1.0"

from .model import (
    Constant,
    Gaussian,
    LinearRamp,
    ModelError,
    PiecewiseLinear,
    SystemParams,
    WStateWeights,
    build_hamiltonian,
    build_jump_operators,
    pulse_value,
    target_w_state,
)
from .dynamics import (
    IntegrationError,
    IntegratorSettings,
    evolve_lindblad,
    evolve_schrodinger,
    propagate_oracle,
)
from .analysis import (
    adiabatic_fidelity_series,
    adiabatic_gap,
    check_lindblad_scaling,
    check_schrodinger_scaling,
    dark_state,
    dark_state_family,
    emission_report,
    fidelity,
    ideal_final_fidelity,
)
from .experiments import (
    Scenario,
    calibrate_pulse,
    catalog,
    get_scenario,
    run_scenario,
    sweep2d,
)
