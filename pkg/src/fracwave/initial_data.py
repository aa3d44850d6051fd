"""Initial conditions: the sech^2 family and exact solitary waves.

Two closed-form traveling waves are available for validation:

* alpha = 2 (classical regime):
      u = 3(c-kappa)/lam * sech^2( 0.5*sqrt((c-kappa)/(nu*c+mu)) * (x-ct) )
* alpha = 1 with kappa=lam=mu=nu=1 (algebraic decay):
      u = 4(c-1) / (1 + ((c-1)/(c+1))^2 (x-ct)^2 )

The algebraic tails of the alpha=1 wave decay like x^-2, so periodic
truncation error dominates at any practical domain size; validation
tolerances for it are percent-level, not spectral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .core import EquationParams, SpectralGrid, frac_multiplier
from .transforms import FieldState, to_spectrum


@dataclass(frozen=True)
class InitialCondition:
    """Declarative description of initial data for scenario configs."""

    kind: str  # "sech2" | "soliton_alpha2" | "soliton_alpha1" | "from_file"
    delta: float = 0.0
    c: float = 0.0
    path: Optional[str] = None

    _KINDS = ("sech2", "soliton_alpha2", "soliton_alpha1", "from_file")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown initial condition kind {self.kind!r}")
        if self.kind == "from_file" and not self.path:
            raise ValueError("from_file initial condition requires a path")

    def build(self, grid: SpectralGrid, params: EquationParams) -> FieldState:
        if self.kind == "sech2":
            return sech2_profile(grid, self.delta)
        if self.kind == "soliton_alpha2":
            return soliton_alpha2(grid, params, self.c)
        if self.kind == "soliton_alpha1":
            return soliton_alpha1(grid, self.c)
        return profile_from_file(self.path, grid)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "sech2":
            out["delta"] = self.delta
        elif self.kind in ("soliton_alpha2", "soliton_alpha1"):
            out["c"] = self.c
        else:
            out["path"] = self.path
        return out


def sech2_profile(grid: SpectralGrid, delta: float) -> FieldState:
    """u0(x) = delta * sech^2(x), centered hump of amplitude delta."""
    values = delta / np.cosh(grid.x) ** 2
    return FieldState.from_values(values, grid, time=0.0)


def soliton_alpha2(grid: SpectralGrid, params: EquationParams,
                   c: float) -> FieldState:
    """Exact sech^2 solitary wave of the alpha=2 equation, sampled at t=0."""
    if params.alpha != 2:
        raise ValueError(
            f"the sech^2 soliton requires alpha=2, got alpha={params.alpha}")
    if not c > params.kappa:
        raise ValueError(f"wave speed must exceed kappa={params.kappa}, got c={c}")
    radicand = (c - params.kappa) / (params.nu * c + params.mu)
    if not radicand > 0:
        raise ValueError(
            f"width radicand (c-kappa)/(nu*c+mu) = {radicand:g} must be positive")
    amplitude = 3.0 * (c - params.kappa) / params.lam
    width = 0.5 * math.sqrt(radicand)
    values = amplitude / np.cosh(width * grid.x) ** 2
    return FieldState.from_values(values, grid, time=0.0)


def soliton_alpha1(grid: SpectralGrid, c: float) -> FieldState:
    """Algebraic solitary wave of the alpha=1 case (unit coefficients)."""
    if not c > 1:
        raise ValueError(f"wave speed must exceed 1, got c={c}")
    slope = (c - 1.0) / (c + 1.0)
    values = 4.0 * (c - 1.0) / (1.0 + (slope * grid.x) ** 2)
    return FieldState.from_values(values, grid, time=0.0)


def traveling_residual(params: EquationParams, grid: SpectralGrid,
                       profile: FieldState, c: float) -> float:
    """L2 norm of the traveling-wave equation applied to a profile.

    A wave u = Q(x - ct) solves the model iff

        (kappa - c) Q' + lam Q Q' - (mu + nu c) D^alpha Q' = 0,

    evaluated here spectrally; near zero for exact solitary waves.
    """
    ka = frac_multiplier(grid, params.alpha)
    ik = 1j * grid.k
    ik[grid._nyquist_index] = 0.0
    q_hat = profile.spectrum
    sq_hat = to_spectrum(profile.values ** 2, grid)
    r_hat = ik * ((params.kappa - c - (params.mu + params.nu * c) * ka) * q_hat
                  + 0.5 * params.lam * sq_hat)
    return float(np.sqrt(grid.dk / (2.0 * np.pi) * np.sum(np.abs(r_hat) ** 2)))


def profile_from_file(path: str, grid: SpectralGrid) -> FieldState:
    """Load a two-column CSV (x, u) whose nodes match the grid exactly."""
    path = Path(path)
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=_header_rows(path))
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (x, u)")
    if data.shape[0] != grid.N:
        raise ValueError(
            f"{path}: {data.shape[0]} rows but the grid has {grid.N} nodes")
    x_file = data[:, 0]
    tol = 1e-9 * max(1.0, grid.L)
    mismatch = np.abs(x_file - grid.x) > tol
    if np.any(mismatch):
        j = int(np.argmax(mismatch))
        raise ValueError(
            f"{path}: node {j} has x={x_file[j]!r}, grid expects {grid.x[j]!r}")
    return FieldState.from_values(data[:, 1], grid, time=0.0)


def _header_rows(path: Path) -> int:
    with open(path) as fh:
        first = fh.readline()
    try:
        float(first.split(",")[0])
        return 0
    except ValueError:
        return 1
