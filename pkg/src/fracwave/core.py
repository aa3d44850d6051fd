"""Equation coefficients and the periodic Fourier discretization.

The evolved model is

    u_t + kappa*u_x + lam*u*u_x - mu*D^alpha(u_x) + nu*D^alpha(u_t) = 0

on [-L, L) with period 2L, where D^alpha is the Fourier multiplier
|k|^alpha.  Everything downstream (transforms, stepper, diagnostics,
energies) works on the wavenumber lattice built here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EquationParams:
    """Coefficient tuple selecting one member of the equation family.

    kappa : linear advection coefficient (any real)
    lam   : nonlinearity strength, >= 0
    mu    : dispersion coefficient of the u_x term (any real)
    nu    : regularization coefficient of the u_t term, >= 0
    alpha : fractional order, > 0 (1 and 2 select the classical cases)

    The model proper has lam > 0 and nu > 0.  lam = 0 is accepted so
    the stepper can be validated against the exact linear propagator,
    and nu = 0 so the conserved integrals can be evaluated in the
    unregularized limit; the interaction kernel refuses lam = 0 and the
    explicit time stepper refuses nu = 0.
    """

    kappa: float
    lam: float
    mu: float
    nu: float
    alpha: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def kernel_prefactor(self) -> float:
        """kappa*nu + mu; must not vanish for the interaction kernel."""
        return self.kappa * self.nu + self.mu


class SpectralGrid:
    """Uniform periodic grid on [-L, L) with the FFT wavenumber lattice.

    Nodes are x_j = -L + 2L*j/N; wavenumbers k_m = pi*m/L for integer
    modes m in the standard FFT ordering {0, 1, ..., N/2-1, -N/2, ...,
    -1}.  All multiplier arrays produced from a grid are stored in that
    ordering, so element-wise products never need reordering.

    Instances are immutable after construction and safe to share across
    concurrent runs; multipliers are memoized per (kind, parameters).
    """

    __slots__ = ("L", "N", "x", "k", "modes", "dx", "dk", "_signs",
                 "_nyquist_index", "_cache")

    def __init__(self, L: float, N: int):
        if not (isinstance(N, (int, np.integer)) and N >= 8 and (N & (N - 1)) == 0):
            raise ValueError(f"N must be a power of two >= 8, got {N!r}")
        if not (isinstance(L, (int, float, np.floating)) and math.isfinite(L) and L > 0):
            raise ValueError(f"L must be a positive finite real, got {L!r}")
        self.L = float(L)
        self.N = int(N)
        self.dx = 2.0 * self.L / self.N
        self.dk = math.pi / self.L
        self.x = -self.L + self.dx * np.arange(self.N)
        self.modes = np.fft.fftfreq(self.N, d=1.0 / self.N).astype(np.int64)
        self.k = self.dk * self.modes
        # Phase factor exp(-i k x_0) relating the node-indexed FFT sum to
        # the x = -L origin; reduces to alternating signs for even N.
        self._signs = np.where(np.arange(self.N) % 2 == 0, 1.0, -1.0)
        self._nyquist_index = self.N // 2
        self._cache: dict = {}

    def __repr__(self):
        return f"SpectralGrid(L={self.L!r}, N={self.N})"

    def __eq__(self, other):
        return isinstance(other, SpectralGrid) and self.L == other.L and self.N == other.N

    def __hash__(self):
        return hash((self.L, self.N))

    def cached(self, key, build):
        """Memoize an immutable multiplier array under `key`."""
        try:
            return self._cache[key]
        except KeyError:
            value = build()
            self._cache[key] = value
            return value


def make_grid(L: float, N: int) -> SpectralGrid:
    """Build the periodic grid for a domain of half-length L with N nodes."""
    return SpectralGrid(L, N)


def frac_multiplier(grid: SpectralGrid, alpha: float) -> np.ndarray:
    """Spectral symbol |k|^alpha of D^alpha on the grid, FFT ordering.

    The k=0 entry is 0 for alpha > 0 and 1 for alpha = 0 (identity).
    """
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")

    def build():
        out = np.abs(grid.k) ** alpha
        out.flags.writeable = False
        return out

    return grid.cached(("frac", float(alpha)), build)


def dispersion_symbol(params: EquationParams, grid: SpectralGrid) -> np.ndarray:
    """Linear dispersion relation omega(k) = k*(kappa - mu|k|^a)/(1 + nu|k|^a).

    Plane waves of the lam=0 equation evolve as exp(i(kx - omega(k)t)),
    so the semidiscrete linear system is uhat_t = -i*omega(k)*uhat.
    """
    ka = frac_multiplier(grid, params.alpha)
    return grid.k * (params.kappa - params.mu * ka) / (1.0 + params.nu * ka)
