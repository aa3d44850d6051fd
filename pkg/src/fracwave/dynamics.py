"""Semidiscrete right-hand side, RK4 stepper, and the evolution loop.

The equation is advanced in spectral space.  Solving the model for
uhat_t gives

    uhat_t = [ -i k (kappa - mu|k|^a) uhat - i k (lam/2) F(u^2) ] / (1 + nu|k|^a)

with F(u^2) evaluated pseudospectrally (inverse transform, pointwise
square, forward transform).  The (1 + nu|k|^a)^-1 prefactor is folded
into the right-hand side; no integrating factor is used.

nu = 0 is rejected here: without the regularizing prefactor the symbol
grows like k^(1+alpha) and an explicit scheme is the wrong tool.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .core import EquationParams, SpectralGrid, dispersion_symbol, frac_multiplier
from .diagnostics import DiagnosticsRecord, invariant_I2, make_record
from .errors import NumericalOverflowError
from .transforms import FieldState, _mirrored_rfft, dealias_mask

# RK4 covers roughly [-2.83i, 2.83i] of the imaginary axis.
_RK4_IMAG_LIMIT = 2.8


@dataclass(frozen=True)
class StopCondition:
    """When to stop a run.

    drift_threshold is the relative I2 drift that flags blow-up; the
    amplitude ceiling exists only as an overflow guard.
    """

    max_time: float
    drift_threshold: float = 5e-3
    linf_ceiling: float = 1e6

    def __post_init__(self):
        for name in ("max_time", "drift_threshold", "linf_ceiling"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


class RunOutcome(Enum):
    COMPLETED = "completed"
    BLOW_UP = "blow-up"
    ABORTED = "aborted"


@dataclass(frozen=True)
class RunVerdict:
    outcome: RunOutcome
    end_time: float
    reason: str


# Sink invoked at every record point, on the caller's thread.
DiagnosticsSink = Callable[[DiagnosticsRecord, FieldState], None]


def _require_regularized(params: EquationParams):
    if params.nu == 0:
        raise ValueError(
            "nu = 0 selects the unregularized dispersive regime; the explicit "
            "RK4 path only supports nu > 0")


def _rhs_parts(params: EquationParams, grid: SpectralGrid, dealias: bool):
    """Cached (linear multiplier, nonlinear multiplier, dealias mask)."""
    key = ("rhs", params, bool(dealias))

    def build():
        ka = frac_multiplier(grid, params.alpha)
        bbm = 1.0 + params.nu * ka
        ik = 1j * grid.k
        ik[grid._nyquist_index] = 0.0  # no conjugate partner
        lin = -ik * (params.kappa - params.mu * ka) / bbm
        nl = -(params.lam / 2.0) * ik / bbm
        mask = dealias_mask(grid) if dealias else None
        lin.flags.writeable = False
        nl.flags.writeable = False
        return lin, nl, mask

    return grid.cached(key, build)


def rhs(params: EquationParams, grid: SpectralGrid, spectrum: np.ndarray,
        dealias: bool = True, time: float = math.nan) -> np.ndarray:
    """Spectral time derivative of a Hermitian-symmetric spectrum."""
    _require_regularized(params)
    lin, nl, mask = _rhs_parts(params, grid, dealias)
    half = grid.N // 2 + 1
    # overflow is detected explicitly below, not via numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        u = np.fft.irfft((spectrum * grid._signs)[:half], n=grid.N) / grid.dx
        sq_hat = grid.dx * grid._signs * _mirrored_rfft(u * u, grid.N)
        if mask is not None:
            sq_hat = np.where(mask, sq_hat, 0.0)
        out = lin * spectrum + nl * sq_hat
    if not np.all(np.isfinite(out.view(np.float64))):
        raise NumericalOverflowError(
            f"NaN/Inf in the right-hand side at t={time:g}", time)
    return out


def _rk4(params: EquationParams, grid: SpectralGrid, spectrum: np.ndarray,
         dt: float, dealias: bool, time: float) -> np.ndarray:
    f = lambda y, t: rhs(params, grid, y, dealias, time=t)
    k1 = f(spectrum, time)
    k2 = f(spectrum + 0.5 * dt * k1, time + 0.5 * dt)
    k3 = f(spectrum + 0.5 * dt * k2, time + 0.5 * dt)
    k4 = f(spectrum + dt * k3, time + dt)
    return spectrum + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def rk4_step(params: EquationParams, grid: SpectralGrid, state: FieldState,
             dt: float, dealias: bool = True) -> FieldState:
    """One classical four-stage step applied in spectral space."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    new_spec = _rk4(params, grid, state.spectrum, dt, dealias, state.time)
    return FieldState.from_spectrum(new_spec, grid, time=state.time + dt)


def stable_dt(params: EquationParams, grid: SpectralGrid,
              safety: float = 0.5) -> float:
    """Step size bound from the linear symbol against the RK4 stability arc."""
    if not 0 < safety <= 1:
        raise ValueError(f"safety must be in (0, 1], got {safety}")
    peak = float(np.max(np.abs(dispersion_symbol(params, grid))))
    if peak == 0.0:
        return 1e-2
    return safety * _RK4_IMAG_LIMIT / peak


def linear_exact(params: EquationParams, grid: SpectralGrid,
                 initial_spectrum: np.ndarray, t: float) -> np.ndarray:
    """Exact lam=0 solution: each mode rotated by exp(-i omega(k) t).

    The Nyquist row is frozen, matching the evolution operator, so this
    serves as an oracle for the stepper.
    """
    omega = dispersion_symbol(params, grid).copy()
    omega[grid._nyquist_index] = 0.0
    return np.exp(-1j * omega * t) * np.asarray(initial_spectrum)


def evolve(params: EquationParams, grid: SpectralGrid, initial: FieldState,
           dt: float, stop: StopCondition, record_every: int = 100,
           sink: Optional[DiagnosticsSink] = None,
           dealias: bool = True,
           sobolev_index: Optional[float] = None) -> RunVerdict:
    """March the state until max_time, drift breach, or amplitude ceiling.

    The diagnostics sink is called every `record_every` steps (including
    step 0) and at the final step.  Blow-up is reported at the first
    *recorded* time the relative I2 drift crosses the threshold, which
    ties the verdict to the recording granularity.  Overflow in the
    right-hand side yields an Aborted verdict rather than an exception.
    """
    _require_regularized(params)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    limit = stable_dt(params, grid, safety=1.0)
    if dt > limit:
        warnings.warn(
            f"dt={dt:g} exceeds the linear stability estimate {limit:g}; "
            "proceeding anyway", RuntimeWarning, stacklevel=2)

    if sobolev_index is None:
        sobolev_index = 2.0 + params.alpha / 2.0

    t0 = initial.time
    span = stop.max_time - t0
    if span <= 0:
        raise ValueError(f"max_time {stop.max_time} must exceed start time {t0}")
    n_steps = max(1, math.ceil(span / dt - 1e-12))

    I2_ref = invariant_I2(initial, grid, params)
    spectrum = np.asarray(initial.spectrum, dtype=np.complex128)

    def inspect(step: int) -> Optional[RunVerdict]:
        state = FieldState.from_spectrum(spectrum, grid, time=t0 + step * dt)
        record = make_record(state, grid, params, I2_ref, sobolev_index)
        if sink is not None:
            sink(record, state)
        if record.drift_I2 >= stop.drift_threshold:
            return RunVerdict(
                RunOutcome.BLOW_UP, record.time,
                f"relative I2 drift {record.drift_I2:.3e} reached "
                f"{stop.drift_threshold:g} at t={record.time:g}")
        if record.linf >= stop.linf_ceiling:
            return RunVerdict(
                RunOutcome.ABORTED, record.time,
                f"amplitude {record.linf:.3e} reached ceiling "
                f"{stop.linf_ceiling:g} at t={record.time:g}")
        return None

    verdict = inspect(0)
    if verdict is not None:
        return verdict

    for step in range(1, n_steps + 1):
        t_prev = t0 + (step - 1) * dt
        try:
            spectrum = _rk4(params, grid, spectrum, dt, dealias, t_prev)
        except NumericalOverflowError as err:
            return RunVerdict(
                RunOutcome.ABORTED, err.time,
                f"numerical overflow: {err}")
        if step % record_every == 0 or step == n_steps:
            verdict = inspect(step)
            if verdict is not None:
                return verdict

    return RunVerdict(RunOutcome.COMPLETED, t0 + n_steps * dt,
                      f"reached max_time {stop.max_time:g}")
