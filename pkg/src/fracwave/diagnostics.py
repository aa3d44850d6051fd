"""Conserved integrals, norms, and resolution indicators along a run.

The flow conserves

    I0 = integral u dx
    I1 = integral (u + nu*D^alpha u) dx
    I2 = integral (u^2 + nu*|D^(alpha/2) u|^2) dx

and the relative drift of I2 is the quantity the blow-up stopping rule
watches.  All integrals are evaluated spectrally via Parseval; the
half-order operator D^(alpha/2) has no pointwise real-space form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EquationParams, SpectralGrid, frac_multiplier
from .transforms import FieldState

CSV_HEADER = "t,I0,I1,I2,drift_I2,linf,sobolev,tail"


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    I0: float
    I1: float
    I2: float
    linf: float
    sobolev_index_used: float
    sobolev_norm: float
    drift_I2: float
    tail_indicator: float

    def csv_row(self) -> str:
        """Serialize in the fixed column order at 17 significant digits."""
        cols = (self.time, self.I0, self.I1, self.I2, self.drift_I2,
                self.linf, self.sobolev_norm, self.tail_indicator)
        return ",".join(f"{c:.17g}" for c in cols)


def invariant_I0(state: FieldState, grid: SpectralGrid) -> float:
    """Mass integral: dx-weighted sum of the samples."""
    return grid.dx * float(np.sum(state.values))


def invariant_I1(state: FieldState, grid: SpectralGrid,
                 params: EquationParams) -> float:
    """Mass plus nu * integral of D^alpha u.

    |k|^alpha annihilates the zero mode, so for alpha > 0 this equals I0
    identically on the discrete grid.
    """
    ka = frac_multiplier(grid, params.alpha)
    return float((state.spectrum[0] * (1.0 + params.nu * ka[0])).real)


def invariant_I2(state: FieldState, grid: SpectralGrid,
                 params: EquationParams) -> float:
    """Energy integral in Parseval form: (dk/2pi) sum (1+nu|k|^a)|uhat|^2."""
    ka = frac_multiplier(grid, params.alpha)
    power = np.abs(state.spectrum) ** 2
    return grid.dk / (2.0 * np.pi) * float(np.sum((1.0 + params.nu * ka) * power))


def sobolev_norm(state: FieldState, grid: SpectralGrid, s: float) -> float:
    """Discrete H^s norm: sqrt((dk/2pi) sum (1+k^2)^s |uhat|^2)."""
    if s < 0:
        raise ValueError(f"Sobolev index must be nonnegative, got {s}")
    power = np.abs(state.spectrum) ** 2
    weights = (1.0 + grid.k ** 2) ** s
    return float(np.sqrt(grid.dk / (2.0 * np.pi) * np.sum(weights * power)))


def tail_indicator(state: FieldState, grid: SpectralGrid) -> float:
    """Top-decile-to-peak spectral modulus ratio.

    Small values mean the solution is resolved: the highest 10% of
    wavenumbers carry a vanishing fraction of the peak modulus.  A run
    is conventionally called resolved below 1e-6.
    """
    mod = np.abs(state.spectrum)
    peak = float(np.max(mod))
    if peak == 0.0:
        return 0.0
    kmax = np.max(np.abs(grid.k))
    tail = mod[np.abs(grid.k) >= 0.9 * kmax]
    return float(np.max(tail)) / peak


def make_record(state: FieldState, grid: SpectralGrid, params: EquationParams,
                I2_reference: float, sobolev_index: float) -> DiagnosticsRecord:
    """Assemble the full per-instant record used by the evolution loop."""
    I2 = invariant_I2(state, grid, params)
    if I2_reference != 0.0:
        drift = abs(I2 - I2_reference) / abs(I2_reference)
    else:
        drift = abs(I2 - I2_reference)
    return DiagnosticsRecord(
        time=state.time,
        I0=invariant_I0(state, grid),
        I1=invariant_I1(state, grid, params),
        I2=I2,
        linf=float(np.max(np.abs(state.values))),
        sobolev_index_used=sobolev_index,
        sobolev_norm=sobolev_norm(state, grid, sobolev_index),
        drift_I2=drift,
        tail_indicator=tail_indicator(state, grid),
    )
