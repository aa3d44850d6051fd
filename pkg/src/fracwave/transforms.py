"""Forward/inverse spectral transforms, quadrature, and dealiasing.

The transform pair follows the continuum convention

    uhat(k) = integral u(x) exp(-ikx) dx,
    u(x)    = (1/2pi) integral uhat(k) exp(ikx) dk,

discretized with quadrature weights dx = 2L/N and dk = pi/L.  With
these weights the discrete Parseval identity

    dx * sum u_j^2  ==  (dk/2pi) * sum |uhat_j|^2

holds exactly, so conserved integrals and Sobolev norms read straight
off the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SpectralGrid
from .errors import SpectralConsistencyError

# Imaginary residue above this fraction of the field magnitude means the
# input spectrum was not Hermitian-symmetric.
_HERMITIAN_RTOL = 1e-12


def _mirrored_rfft(values: np.ndarray, N: int) -> np.ndarray:
    """Full-length transform of a real field, Hermitian by construction.

    Built from the half-spectrum so that uhat(-k) == conj(uhat(k))
    holds exactly, not merely to roundoff; long runs stay real.
    """
    half = np.fft.rfft(values)
    full = np.empty(N, dtype=np.complex128)
    full[: N // 2 + 1] = half
    full[N // 2] = half[N // 2].real
    full[N // 2 + 1:] = np.conj(half[N // 2 - 1:0:-1])
    return full


def to_spectrum(values: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Quadrature-weighted forward transform of a real field."""
    values = np.asarray(values)
    if values.shape != (grid.N,):
        raise ValueError(
            f"field length {values.shape} does not match grid N={grid.N}")
    return grid.dx * grid._signs * _mirrored_rfft(values, grid.N)


def to_field(spectrum: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Inverse transform back to real samples.

    The spectrum must be Hermitian-symmetric; an imaginary residue above
    1e-12 of the field magnitude raises SpectralConsistencyError.
    """
    spectrum = np.asarray(spectrum)
    if spectrum.shape != (grid.N,):
        raise ValueError(
            f"spectrum length {spectrum.shape} does not match grid N={grid.N}")
    z = np.fft.ifft(spectrum * grid._signs) / grid.dx
    scale = np.max(np.abs(z))
    if scale > 0 and np.max(np.abs(z.imag)) > _HERMITIAN_RTOL * scale:
        raise SpectralConsistencyError(
            "spectrum is not Hermitian-symmetric: imaginary residue "
            f"{np.max(np.abs(z.imag)):.3e} exceeds {_HERMITIAN_RTOL:.0e} * {scale:.3e}")
    return z.real


def dealias_mask(grid: SpectralGrid, keep_fraction: float = 2.0 / 3.0) -> np.ndarray:
    """Boolean mask keeping modes |m| <= keep_fraction * N/2."""
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")

    def build():
        mask = np.abs(grid.modes) <= keep_fraction * (grid.N // 2)
        mask.flags.writeable = False
        return mask

    return grid.cached(("dealias", float(keep_fraction)), build)


@dataclass(frozen=True)
class FieldState:
    """Real-space samples plus their spectrum at one instant."""

    values: np.ndarray
    spectrum: np.ndarray
    time: float

    @classmethod
    def from_values(cls, values: np.ndarray, grid: SpectralGrid,
                    time: float = 0.0) -> "FieldState":
        values = np.asarray(values, dtype=np.float64)
        return cls(values=values, spectrum=to_spectrum(values, grid), time=time)

    @classmethod
    def from_spectrum(cls, spectrum: np.ndarray, grid: SpectralGrid,
                      time: float = 0.0) -> "FieldState":
        spectrum = np.asarray(spectrum, dtype=np.complex128)
        return cls(values=to_field(spectrum, grid), spectrum=spectrum, time=time)
