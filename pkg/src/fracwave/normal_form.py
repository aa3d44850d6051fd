"""Quadratic-interaction kernel, pseudo-product, and modified energies.

The change of variable w = u + P(u,u) trades the quadratic nonlinearity
for a cubic remainder.  P is the bilinear pseudo-product defined in
Fourier space by

    F(P(u,u))(k) = integral m(k-l, l) uhat(k-l) uhat(l) dl

with the real symmetric kernel (writing p = k-l, q = l, k = p+q)

                     lam * k * (1+nu|p|^a)(1+nu|q|^a)
    m(p,q) = -----------------------------------------------------------
             2(kappa*nu+mu) [ k(1+nu|q|^a)(|p|^a - |k|^a)
                              + q(1+nu|k|^a)(|q|^a - |p|^a) ]

m is singular on p = 0, q = 0, p + q = 0.  The discrete pseudo-product
skips those triples (kernel treated as 0 there) and requires zero-mean
input; the analytic cancellations that tame the singular rays only act
inside combined expressions, so exclusion is the discrete surrogate.

The modified energy augments the Sobolev-type quadratic energy with the
cubic cross terms contributed by P; for small data it stays comparable
to the squared H^(n_max + alpha/2) norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EquationParams, SpectralGrid, frac_multiplier
from .errors import CapacityError, SingularKernelPointError
from .transforms import FieldState

# O(N^2) routines refuse larger grids.
_MAX_QUADRATIC_N = 4096

_ZERO_MEAN_TOL = 1e-12


def _require_kernel_prefactor(params: EquationParams):
    if params.kernel_prefactor == 0:
        raise ValueError(
            "kernel prefactor kappa*nu + mu vanishes; the interaction kernel "
            "is undefined for this coefficient combination")
    if params.lam == 0:
        raise ValueError("the interaction kernel requires lam > 0")


def kernel_m(params: EquationParams, p: float, q: float) -> float:
    """Kernel value at one point; raises on the singular set."""
    _require_kernel_prefactor(params)
    if p == 0.0 or q == 0.0 or p + q == 0.0:
        raise SingularKernelPointError(
            f"kernel is singular at (p, q) = ({p}, {q})")
    a = params.alpha
    k = p + q
    ap, aq, ak = abs(p) ** a, abs(q) ** a, abs(k) ** a
    wp, wq, wk = 1.0 + params.nu * ap, 1.0 + params.nu * aq, 1.0 + params.nu * ak
    denom_core = k * wq * (ap - ak) + q * wk * (aq - ap)
    if denom_core == 0.0:
        raise SingularKernelPointError(
            f"kernel denominator vanishes at (p, q) = ({p}, {q})")
    return params.lam * k * wp * wq / (2.0 * params.kernel_prefactor * denom_core)


def _kernel_values(params: EquationParams, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized kernel; 0 on the singular set instead of raising."""
    a = params.alpha
    k = p + q
    ap, aq, ak = np.abs(p) ** a, np.abs(q) ** a, np.abs(k) ** a
    wq = 1.0 + params.nu * aq
    wk = 1.0 + params.nu * ak
    denom_core = k * wq * (ap - ak) + q * wk * (aq - ap)
    num = params.lam * k * (1.0 + params.nu * ap) * wq
    degenerate = (p == 0.0) | (q == 0.0) | (k == 0.0) | (denom_core == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = num / (2.0 * params.kernel_prefactor * denom_core)
    return np.where(degenerate, 0.0, m)


def cancellation_residual(params: EquationParams, k: float, l: float) -> float:
    """Left-hand side of the pairing identity

        m(k-l, l) * l * (1+nu|k|^a) + m(l-k, k) * k * (1+nu|l|^a) = 0,

    which the energy bookkeeping relies on; vanishes to roundoff off the
    singular set.
    """
    if k == 0.0 or l == 0.0 or k == l:
        raise SingularKernelPointError(
            f"cancellation identity undefined at (k, l) = ({k}, {l})")
    a = params.alpha
    term1 = kernel_m(params, k - l, l) * l * (1.0 + params.nu * abs(k) ** a)
    term2 = kernel_m(params, l - k, k) * k * (1.0 + params.nu * abs(l) ** a)
    return term1 + term2


@dataclass(frozen=True)
class EnvelopeCheck:
    """Extremes of |m| against its two-sided growth envelope."""

    ratio_min: float
    ratio_max: float

    @property
    def condition(self) -> float:
        return self.ratio_max / self.ratio_min


def bound_envelope_check(params: EquationParams, region: str,
                         samples: int = 10_000, seed: int = 0) -> EnvelopeCheck:
    """Sample |m| / envelope over one of the two radial regions.

    region is "interior" (p^2+q^2 <= 1) or "exterior" (>= 1).  Sampling
    excludes a 0.05-neighborhood of the singular rays in angle.  A
    bounded, strictly positive ratio across samples is the numerical
    face of the kernel growth bounds (the constants themselves are not
    pinned by theory, only their existence).
    """
    if region not in ("interior", "exterior"):
        raise ValueError(f"region must be 'interior' or 'exterior', got {region!r}")
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    if not 0 < params.alpha < 1:
        raise ValueError("envelope bounds apply to fractional order in (0, 1)")
    _require_kernel_prefactor(params)

    rng = np.random.default_rng(seed)
    theta = np.empty(0)
    while theta.size < samples:
        cand = rng.uniform(0.0, 2.0 * np.pi, size=2 * samples)
        s, c = np.sin(cand), np.cos(cand)
        keep = (np.abs(s) >= 0.05) & (np.abs(c) >= 0.05) & (np.abs(s + c) >= 0.05)
        theta = np.concatenate([theta, cand[keep]])[:samples]
    if region == "exterior":
        r = np.exp(rng.uniform(np.log(1.0), np.log(1e3), size=samples))
    else:
        r = np.exp(rng.uniform(np.log(1e-3), np.log(1.0), size=samples))

    p, q = r * np.cos(theta), r * np.sin(theta)
    m = np.abs(_kernel_values(params, p, q))
    if np.any(m == 0.0):
        raise SingularKernelPointError("a degenerate sample slipped through")
    ap, aq = np.abs(p), np.abs(q)
    if region == "exterior":
        envelope = ap ** (1.0 + params.alpha) / aq + aq ** (1.0 + params.alpha) / ap
    else:
        envelope = ap ** (1.0 - params.alpha) / aq + aq ** (1.0 - params.alpha) / ap
    ratio = m / envelope
    return EnvelopeCheck(float(np.min(ratio)), float(np.max(ratio)))


def _check_zero_mean(spectrum: np.ndarray):
    scale = max(1.0, float(np.max(np.abs(spectrum))))
    if abs(spectrum[0]) > _ZERO_MEAN_TOL * scale:
        raise ValueError(
            f"pseudo-product requires zero-mean input; k=0 coefficient is "
            f"{spectrum[0]:.3e}")


def _pseudo_product_spectrum(params: EquationParams, grid: SpectralGrid,
                             uhat: np.ndarray, row_block: int = 256) -> np.ndarray:
    """dk-weighted double sum over grid modes, O(N^2), chunked by rows."""
    if grid.N > _MAX_QUADRATIC_N:
        raise CapacityError(
            f"pseudo-product is O(N^2) and limited to N <= {_MAX_QUADRATIC_N}; "
            f"got N = {grid.N}")
    _require_kernel_prefactor(params)
    _check_zero_mean(uhat)

    N = grid.N
    modes = grid.modes
    out = np.zeros(N, dtype=np.complex128)
    q = grid.dk * modes[None, :]
    uq = uhat[None, :]
    # The Nyquist mode has no conjugate partner; excluding it from the sum
    # keeps the interaction lattice symmetric under negation, which is what
    # makes the output spectrum exactly Hermitian.
    half = N // 2
    for start in range(0, N, row_block):
        rows = slice(start, min(start + row_block, N))
        mi = modes[rows, None]
        diff = mi - modes[None, :]
        usable = (np.abs(diff) <= half - 1) & (np.abs(modes[None, :]) <= half - 1)
        p = grid.dk * diff
        m = _kernel_values(params, p, np.broadcast_to(q, p.shape))
        m = np.where(usable, m, 0.0)
        up = uhat[diff % N]
        out[rows] = grid.dk * np.sum(m * up * uq, axis=1)
    out[grid._nyquist_index] = 0.0
    return out


def pseudo_product(params: EquationParams, grid: SpectralGrid,
                   u: FieldState) -> FieldState:
    """P(u,u) for a zero-mean real field; real output by kernel symmetry."""
    phat = _pseudo_product_spectrum(params, grid, u.spectrum)
    return FieldState.from_spectrum(phat, grid, time=u.time)


@dataclass(frozen=True)
class PartialEnergy:
    quadratic: float
    cross: float


@dataclass(frozen=True)
class EnergyBreakdown:
    """Modified energy split into its per-order constituents.

    total = l2_part + sum_n (quadratic_parts[n] + cross_parts[n]).
    """

    n_max: int
    quadratic_parts: tuple
    cross_parts: tuple
    l2_part: float
    total: float

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "quadratic_parts": list(self.quadratic_parts),
            "cross_parts": list(self.cross_parts),
            "l2_part": self.l2_part,
            "total": self.total,
        }


def _deriv_k(grid: SpectralGrid) -> np.ndarray:
    def build():
        k = grid.k.copy()
        k[grid._nyquist_index] = 0.0
        k.flags.writeable = False
        return k

    return grid.cached(("deriv_k",), build)


def _energy_terms(params: EquationParams, grid: SpectralGrid,
                  uhat: np.ndarray, phat: np.ndarray, n: int) -> PartialEnergy:
    ka = frac_multiplier(grid, params.alpha)
    w = _deriv_k(grid) ** (2 * n) * (1.0 + params.nu * ka)
    scale = grid.dk / (2.0 * np.pi)
    quadratic = scale * float(np.sum(w * np.abs(uhat) ** 2))
    cross = 2.0 * scale * float(np.sum(w * (np.conj(uhat) * phat).real))
    return PartialEnergy(quadratic=quadratic, cross=cross)


def partial_energy(params: EquationParams, grid: SpectralGrid, u: FieldState,
                   n: int) -> PartialEnergy:
    """n-th order energy: quadratic term plus the cubic cross term.

    quadratic = ||d^n (1+nu D^a)^(1/2) u||^2 and cross is twice the
    inner product of d^n (1+nu D^a)^(1/2) applied to u and to P(u,u),
    both evaluated spectrally.
    """
    if n < 1:
        raise ValueError(f"energy order must be >= 1, got {n}")
    phat = _pseudo_product_spectrum(params, grid, u.spectrum)
    return _energy_terms(params, grid, u.spectrum, phat, n)


def modified_energy(params: EquationParams, grid: SpectralGrid, u: FieldState,
                    n_max: int) -> EnergyBreakdown:
    """Sum of partial energies for n = 1..n_max plus the L2-level term."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    phat = _pseudo_product_spectrum(params, grid, u.spectrum)
    quads, crosses = [], []
    for n in range(1, n_max + 1):
        part = _energy_terms(params, grid, u.spectrum, phat, n)
        quads.append(part.quadratic)
        crosses.append(part.cross)
    ka = frac_multiplier(grid, params.alpha)
    l2_part = grid.dk / (2.0 * np.pi) * float(
        np.sum((1.0 + params.nu * ka) * np.abs(u.spectrum) ** 2))
    total = l2_part + sum(quads) + sum(crosses)
    return EnergyBreakdown(n_max=n_max, quadratic_parts=tuple(quads),
                           cross_parts=tuple(crosses), l2_part=l2_part,
                           total=total)
