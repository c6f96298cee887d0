"""Fourier representation on the torus [-pi, pi]^2.

Conventions
-----------
Fields are expanded as ``f(x) = sum_k fhat_k exp(i k.x)`` over integer
wavevectors ``k in {-n/2, ..., n/2 - 1}^2``.  The forward transform is the
scaled DFT ``fhat_k = n^-2 sum_ij f(x_ij) exp(-i k.x_ij)`` on the collocation
grid ``x_ij = (-pi + 2*pi*i/n, -pi + 2*pi*j/n)``.  Coefficient arrays are
stored in standard FFT order (non-negative frequencies first); the grid
offset at ``-pi`` is absorbed into a ``(-1)^(k1+k2)`` phase.

Sobolev norms use the full ``(2*pi)^2`` measure, evaluated exactly through
the Fourier multiplier ``mu_m(k) = sum_{|alpha| <= m} k1^(2a1) k2^(2a2)``,
so they match integrals of squared derivatives for band-limited fields.

The Nyquist row/column ``k = -n/2`` carries no sign information and is
zeroed by odd-order derivatives along the corresponding axis.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.fft

from .errors import HermitianViolation

DOMAIN_HALF_WIDTH = np.pi
MEASURE = (2.0 * np.pi) ** 2


_CPU_COUNT = os.cpu_count() or 1


def _fft_workers() -> int:
    """Worker count for scipy.fft, capped by the MHD2_THREADS env var (0 = auto)."""
    raw = os.environ.get("MHD2_THREADS", "")
    if raw.strip() in ("", "0"):
        return _CPU_COUNT
    return max(1, int(raw))


@dataclass(frozen=True)
class GridSpec:
    """Collocation grid on the fixed torus [-pi, pi]^2.

    Parameters
    ----------
    n : int
        Points per dimension; even, at least 8.
    dealias_fraction : Fraction
        Cutoff fraction for the sharp dealiasing rule, in (0, 1].
    """

    n: int
    dealias_fraction: Fraction = Fraction(2, 3)

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid size must be an even integer >= 8, got {self.n}")
        frac = Fraction(self.dealias_fraction)
        if not 0 < frac <= 1:
            raise ValueError(f"dealias_fraction must lie in (0, 1], got {frac}")
        object.__setattr__(self, "dealias_fraction", frac)

    @property
    def domain_half_width(self) -> float:
        return DOMAIN_HALF_WIDTH

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n

    @cached_property
    def x1(self) -> np.ndarray:
        """Physical x1 coordinates, shape (n, n), axis 0."""
        pts = -np.pi + 2.0 * np.pi * np.arange(self.n) / self.n
        return np.broadcast_to(pts[:, None], (self.n, self.n)).copy()

    @cached_property
    def x2(self) -> np.ndarray:
        """Physical x2 coordinates, shape (n, n), axis 1."""
        pts = -np.pi + 2.0 * np.pi * np.arange(self.n) / self.n
        return np.broadcast_to(pts[None, :], (self.n, self.n)).copy()

    @cached_property
    def k1(self) -> np.ndarray:
        """Integer wavenumbers along axis 0, FFT order, shape (n, n)."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.broadcast_to(k[:, None], (self.n, self.n)).copy()

    @cached_property
    def k2(self) -> np.ndarray:
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.broadcast_to(k[None, :], (self.n, self.n)).copy()

    @cached_property
    def ksq(self) -> np.ndarray:
        return self.k1**2 + self.k2**2

    @cached_property
    def phase(self) -> np.ndarray:
        """(-1)^(k1+k2) factor mapping the DFT to the grid anchored at -pi."""
        return np.where((self.k1 + self.k2) % 2 == 0, 1.0, -1.0)

    @cached_property
    def ik1(self) -> np.ndarray:
        """First-order d/dx1 multiplier (Nyquist zeroed)."""
        return derivative_multiplier(self, (1, 0))

    @cached_property
    def ik2(self) -> np.ndarray:
        """First-order d/dx2 multiplier (Nyquist zeroed)."""
        return derivative_multiplier(self, (0, 1))

    @cached_property
    def inv_ksq(self) -> np.ndarray:
        """1 / |k|^2 with the k = 0 entry set to zero."""
        out = np.zeros_like(self.ksq)
        np.divide(1.0, self.ksq, out=out, where=self.ksq > 0)
        return out

    @cached_property
    def ik_stack(self) -> np.ndarray:
        """First-derivative multipliers stacked as shape (2, n, n)."""
        return np.stack([self.ik1, self.ik2])

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        cutoff = float(self.dealias_fraction) * (self.n / 2)
        return np.maximum(np.abs(self.k1), np.abs(self.k2)) <= cutoff

    @property
    def dealias_cutoff(self) -> float:
        return float(self.dealias_fraction) * (self.n / 2)

    def sobolev_multiplier(self, m: int) -> np.ndarray:
        """mu_m(k) = sum over |alpha| <= m of k1^(2a1) k2^(2a2)."""
        if m < 0:
            raise ValueError(f"Sobolev order must be >= 0, got {m}")
        key = ("_mu", m)
        cache = self.__dict__.setdefault("_mu_cache", {})
        if key not in cache:
            k1sq, k2sq = self.k1**2, self.k2**2
            mu = np.zeros_like(k1sq)
            for a1 in range(m + 1):
                for a2 in range(m + 1 - a1):
                    mu += k1sq**a1 * k2sq**a2
            cache[key] = mu
        return cache[key]


@dataclass
class ScalarField:
    """Real scalar samples on the collocation grid, row-major in (i, j)."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.shape != (self.grid.n, self.grid.n):
            raise ValueError(
                f"samples shape {self.samples.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples contain non-finite values")


@dataclass
class SpectralScalar:
    """Fourier coefficients of a scalar field, FFT storage order."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (self.grid.n, self.grid.n):
            raise ValueError(
                f"coeffs shape {self.coeffs.shape} does not match grid n={self.grid.n}"
            )


@dataclass
class VectorField:
    """Two scalar components sharing one grid and one representation."""

    c1: ScalarField | SpectralScalar
    c2: ScalarField | SpectralScalar

    def __post_init__(self):
        if type(self.c1) is not type(self.c2):
            raise ValueError("vector components must share one representation")
        if self.c1.grid is not self.c2.grid and self.c1.grid != self.c2.grid:
            raise ValueError("vector components must share one grid")

    @property
    def grid(self) -> GridSpec:
        return self.c1.grid


# --- raw-array kernels (used by the stepper to avoid wrapper churn) ---------


def fft_coeffs(grid: GridSpec, samples: np.ndarray) -> np.ndarray:
    """Scaled forward DFT of physical samples; returns FFT-ordered coefficients.

    Accepts stacked inputs of shape (..., n, n); transforms the last two axes.
    """
    return grid.phase * scipy.fft.fft2(samples, workers=_fft_workers()) / grid.n**2


def ifft_samples(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Complex physical samples of a coefficient array (caller handles imag part).

    Accepts stacked inputs of shape (..., n, n); transforms the last two axes.
    """
    return scipy.fft.ifft2(coeffs * grid.phase, workers=_fft_workers()) * grid.n**2


def derivative_multiplier(grid: GridSpec, alpha: tuple[int, int]) -> np.ndarray:
    """(i k1)^a1 (i k2)^a2 with the Nyquist mode zeroed for odd axis orders."""
    a1, a2 = alpha
    if a1 < 0 or a2 < 0:
        raise ValueError(f"multi-index must be nonnegative, got {alpha}")
    nyq = -grid.n // 2
    k1 = np.where(grid.k1 == nyq, 0.0, grid.k1) if a1 % 2 else grid.k1
    k2 = np.where(grid.k2 == nyq, 0.0, grid.k2) if a2 % 2 else grid.k2
    return (1j * k1) ** a1 * (1j * k2) ** a2


def project_divergence_free(
    grid: GridSpec, v1: np.ndarray, v2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Leray projection per mode: v -> v - k (k.v) / |k|^2; k = 0 untouched."""
    factor = (grid.k1 * v1 + grid.k2 * v2) * grid.inv_ksq
    return v1 - grid.k1 * factor, v2 - grid.k2 * factor


def divergence_defect(grid: GridSpec, v1: np.ndarray, v2: np.ndarray) -> float:
    """Max-abs spectral divergence, relative to the field's gradient magnitude."""
    div = np.abs(grid.k1 * v1 + grid.k2 * v2)
    scale = np.max(np.sqrt(grid.ksq) * np.sqrt(np.abs(v1) ** 2 + np.abs(v2) ** 2))
    if scale == 0.0:
        return 0.0
    return float(np.max(div) / scale)


# --- public operations -------------------------------------------------------


def forward_transform(f: ScalarField) -> SpectralScalar:
    """Transform physical samples to Fourier coefficients."""
    return SpectralScalar(f.grid, fft_coeffs(f.grid, f.samples))


def inverse_transform(g: SpectralScalar, imag_tol: float = 1e-10) -> ScalarField:
    """Transform coefficients to real samples.

    Raises
    ------
    HermitianViolation
        If the imaginary residue exceeds ``imag_tol`` relative to the field
        magnitude (the coefficients do not represent a real field).
    """
    z = ifft_samples(g.grid, g.coeffs)
    scale = np.max(np.abs(z))
    residue = np.max(np.abs(z.imag))
    if scale > 0 and residue > imag_tol * scale:
        raise HermitianViolation(
            f"imaginary residue {residue:.3e} exceeds {imag_tol:.1e} of magnitude {scale:.3e}"
        )
    return ScalarField(g.grid, z.real)


def partial_derivative(g: SpectralScalar, alpha: tuple[int, int]) -> SpectralScalar:
    """Multi-index derivative d1^a1 d2^a2 applied in coefficient space."""
    return SpectralScalar(g.grid, g.coeffs * derivative_multiplier(g.grid, alpha))


def dealias(g: SpectralScalar) -> SpectralScalar:
    """Sharp cutoff: zero coefficients with max(|k1|, |k2|) beyond the rule."""
    return SpectralScalar(g.grid, g.coeffs * g.grid.dealias_mask)


def _coeff_arrays(v) -> tuple[GridSpec, list[np.ndarray]]:
    """Spectral coefficient arrays of a scalar or vector in any representation."""
    if isinstance(v, VectorField):
        comps = [v.c1, v.c2]
    else:
        comps = [v]
    grid = comps[0].grid
    out = []
    for c in comps:
        if isinstance(c, ScalarField):
            out.append(fft_coeffs(grid, c.samples))
        else:
            out.append(c.coeffs)
    return grid, out


def sobolev_norm(v, m: int) -> float:
    """H^m norm: sqrt((2*pi)^2 * sum_k mu_m(k) * sum_components |fhat_k|^2)."""
    grid, arrays = _coeff_arrays(v)
    mu = grid.sobolev_multiplier(m)
    total = 0.0
    for c in arrays:
        total += float(np.sum(mu * (c.real**2 + c.imag**2)))
    return float(np.sqrt(MEASURE * total))


def leray_project(v: VectorField) -> VectorField:
    """L^2-orthogonal projection onto divergence-free fields (spectral input)."""
    if not isinstance(v.c1, SpectralScalar):
        raise TypeError("leray_project expects a spectral VectorField")
    grid = v.grid
    p1, p2 = project_divergence_free(grid, v.c1.coeffs, v.c2.coeffs)
    return VectorField(SpectralScalar(grid, p1), SpectralScalar(grid, p2))


def vorticity(u: VectorField) -> ScalarField:
    """omega = d1 u2 - d2 u1 as a physical field."""
    grid, (u1, u2) = _coeff_arrays(u)
    w = derivative_multiplier(grid, (1, 0)) * u2 - derivative_multiplier(grid, (0, 1)) * u1
    return inverse_transform(SpectralScalar(grid, w))


def vorticity_spectral(u: VectorField) -> SpectralScalar:
    grid, (u1, u2) = _coeff_arrays(u)
    w = derivative_multiplier(grid, (1, 0)) * u2 - derivative_multiplier(grid, (0, 1)) * u1
    return SpectralScalar(grid, w)


def mean(f: ScalarField | SpectralScalar) -> float:
    """Integral of f over the torus, (2*pi)^2 times the zero mode."""
    if isinstance(f, ScalarField):
        return float(MEASURE * np.mean(f.samples))
    return float(MEASURE * f.coeffs[0, 0].real)


def resample(g: SpectralScalar, new_grid: GridSpec) -> SpectralScalar:
    """Spectral truncation / zero-padding onto another grid (exact for band-limited)."""
    n_old, n_new = g.grid.n, new_grid.n
    out = np.zeros((n_new, n_new), dtype=np.complex128)
    half = min(n_old, n_new) // 2
    idx_old = np.fft.fftfreq(n_old, 1.0 / n_old).astype(int)
    idx_new = np.fft.fftfreq(n_new, 1.0 / n_new).astype(int)
    sel_old = np.abs(idx_old) < half
    sel_new = np.abs(idx_new) < half
    order_old = np.argsort(idx_old[sel_old])
    order_new = np.argsort(idx_new[sel_new])
    rows_old = np.where(sel_old)[0][order_old]
    rows_new = np.where(sel_new)[0][order_new]
    out[np.ix_(rows_new, rows_new)] = g.coeffs[np.ix_(rows_old, rows_old)]
    return SpectralScalar(new_grid, out)
