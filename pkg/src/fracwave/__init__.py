"""Pseudospectral toolkit for fractional KdV-BBM type wave equations."""

from .core import EquationParams, SpectralGrid, dispersion_symbol, frac_multiplier, make_grid
from .diagnostics import (DiagnosticsRecord, invariant_I0, invariant_I1,
                          invariant_I2, sobolev_norm, tail_indicator)
from .dynamics import (RunOutcome, RunVerdict, StopCondition, evolve,
                       linear_exact, rhs, rk4_step, stable_dt)
from .errors import (CapacityError, NumericalOverflowError,
                     SingularKernelPointError, SpectralConsistencyError)
from .experiments import (PhaseResult, RunResult, Scenario, SweepResult,
                          lifespan_sweep, phase_diagram, preset_scenario,
                          run_scenario, scenario_from_toml)
from .initial_data import (InitialCondition, profile_from_file, sech2_profile,
                           soliton_alpha1, soliton_alpha2, traveling_residual)
from .normal_form import (EnergyBreakdown, bound_envelope_check,
                          cancellation_residual, kernel_m, modified_energy,
                          partial_energy, pseudo_product)
from .transforms import FieldState, dealias_mask, to_field, to_spectrum

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DiagnosticsRecord", "EnergyBreakdown", "EquationParams",
    "FieldState", "InitialCondition", "NumericalOverflowError", "PhaseResult",
    "RunOutcome", "RunResult", "RunVerdict", "Scenario",
    "SingularKernelPointError", "SpectralConsistencyError", "SpectralGrid",
    "StopCondition", "SweepResult", "bound_envelope_check",
    "cancellation_residual", "dealias_mask", "dispersion_symbol", "evolve",
    "frac_multiplier", "invariant_I0", "invariant_I1", "invariant_I2",
    "kernel_m", "lifespan_sweep", "linear_exact", "make_grid",
    "modified_energy", "partial_energy", "phase_diagram", "preset_scenario",
    "profile_from_file", "pseudo_product", "rhs", "rk4_step", "run_scenario",
    "scenario_from_toml", "sech2_profile", "sobolev_norm", "soliton_alpha1",
    "soliton_alpha2", "stable_dt", "tail_indicator", "to_field", "to_spectrum",
    "traveling_residual",
]
