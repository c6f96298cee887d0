"""Right-hand sides of the MHD system with pressure eliminated.

Perturbation form (B = b + e2):

    u_t = P(-u.grad u + b.grad b + d2 b)
    b_t = -u.grad b + b.grad u + d2 u + Lap b

with P the Leray projection.  The diffusive part Lap b is returned
separately (``db_stiff``) so the stepper can treat it with an exact
integrating factor.  Quadratic products are formed pseudo-spectrally from
dealiased inputs and dealiased again; linear terms are not dealiased.
The k = 0 mode of every tendency is forced to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamples, NonFiniteTendency
from .spectral import (
    MEASURE,
    GridSpec,
    ScalarField,
    SpectralScalar,
    VectorField,
    _coeff_arrays,
    fft_coeffs,
    ifft_samples,
    inverse_transform,
    project_divergence_free,
    sobolev_norm,
)
from .symmetry import MHDState


@dataclass
class Tendency:
    """Time derivative split into stiff diffusion and everything else."""

    du: VectorField
    db_stiff: VectorField
    db_soft: VectorField
    grid: GridSpec


def _advect(grid: GridSpec, v1p, v2p, f_hat):
    """Physical samples of (v . grad f) from dealiased spectral f."""
    d1 = ifft_samples(grid, grid.ik1 * f_hat).real
    d2 = ifft_samples(grid, grid.ik2 * f_hat).real
    return v1p * d1 + v2p * d2


def _quadratic_arrays(grid: GridSpec, v1, v2, b1, b2):
    """Dealiased spectral products (-u.grad u + b.grad b, -u.grad b + b.grad u).

    All transforms are batched into three stacked FFT calls per evaluation.
    """
    n = grid.n
    mask = grid.dealias_mask
    stacked = np.empty((12, n, n), dtype=np.complex128)
    spec = stacked[:4]
    np.multiply(np.stack([v1, v2, b1, b2]), mask, out=spec)
    # gradients of all four fields via one broadcast multiply
    np.multiply(spec[:, None], grid.ik_stack[None], out=stacked[4:].reshape(4, 2, n, n))
    phys = ifft_samples(grid, stacked).real
    U1, U2, B1, B2 = phys[:4]
    d = phys[4:]  # d[2i], d[2i+1] = d1, d2 of field i

    def adv_u(i):
        return U1 * d[2 * i] + U2 * d[2 * i + 1]

    def adv_b(i):
        return B1 * d[2 * i] + B2 * d[2 * i + 1]

    products = np.empty((4, n, n))
    np.subtract(adv_b(2), adv_u(0), out=products[0])
    np.subtract(adv_b(3), adv_u(1), out=products[1])
    np.subtract(adv_b(0), adv_u(2), out=products[2])
    np.subtract(adv_b(1), adv_u(3), out=products[3])
    return mask * fft_coeffs(grid, products)


def _rhs_arrays(grid: GridSpec, u1, u2, b1, b2, nonlinear: bool, coupling: bool):
    if nonlinear:
        du1, du2, ds1, ds2 = _quadratic_arrays(grid, u1, u2, b1, b2)
    else:
        du1 = np.zeros_like(u1)
        du2 = np.zeros_like(u2)
        ds1 = np.zeros_like(b1)
        ds2 = np.zeros_like(b2)
    if coupling:
        du1 += grid.ik2 * b1
        du2 += grid.ik2 * b2
        ds1 += grid.ik2 * u1
        ds2 += grid.ik2 * u2
    du1, du2 = project_divergence_free(grid, du1, du2)
    ds1, ds2 = project_divergence_free(grid, ds1, ds2)
    st1 = -grid.ksq * b1
    st2 = -grid.ksq * b2
    for arr in (du1, du2, ds1, ds2, st1, st2):
        arr[0, 0] = 0.0
    return du1, du2, ds1, ds2, st1, st2


def _as_tendency(grid: GridSpec, arrays) -> Tendency:
    du1, du2, ds1, ds2, st1, st2 = arrays
    if not all(np.all(np.isfinite(a)) for a in arrays):
        raise NonFiniteTendency("tendency contains non-finite coefficients")
    wrap = lambda a: SpectralScalar(grid, a)
    return Tendency(
        du=VectorField(wrap(du1), wrap(du2)),
        db_stiff=VectorField(wrap(st1), wrap(st2)),
        db_soft=VectorField(wrap(ds1), wrap(ds2)),
        grid=grid,
    )


def rhs_perturbation(st: MHDState, nonlinear: bool = True, coupling: bool = True) -> Tendency:
    """Tendency of the perturbation system at the given state.

    The ``nonlinear`` and ``coupling`` hooks disable the quadratic products
    and the d2 exchange terms respectively; both are part of the public test
    surface (the linearized limit has a closed-form per-mode solution).
    """
    grid = st.grid
    u1, u2, b1, b2 = st.coeff_arrays()
    return _as_tendency(grid, _rhs_arrays(grid, u1, u2, b1, b2, nonlinear, coupling))


def _rhs_total_arrays(grid: GridSpec, u1, u2, B1, B2):
    du1, du2, ds1, ds2 = _quadratic_arrays(grid, u1, u2, B1, B2)
    du1, du2 = project_divergence_free(grid, du1, du2)
    ds1, ds2 = project_divergence_free(grid, ds1, ds2)
    st1 = -grid.ksq * B1
    st2 = -grid.ksq * B2
    for arr in (du1, du2, ds1, ds2, st1, st2):
        arr[0, 0] = 0.0
    return du1, du2, ds1, ds2, st1, st2


def rhs_total(u: VectorField, B: VectorField) -> Tendency:
    """Tendency of the total-field system, formed directly from (u, B).

    Provided to validate that the two formulations agree: for band-limited
    states it matches ``rhs_perturbation`` applied to b = B - e2 to roundoff.
    """
    grid, (u1, u2) = _coeff_arrays(u)
    _, (B1, B2) = _coeff_arrays(B)
    return _as_tendency(grid, _rhs_total_arrays(grid, u1, u2, B1, B2))


def compute_pressure(st: MHDState) -> ScalarField:
    """Diagnostic pressure: solves -Lap p = div(u.grad u - b.grad b - d2 b).

    Mean-zero convention (p_hat at k = 0 is zero).  The gradient of the
    result equals the Leray-removed part of the u tendency.
    """
    grid = st.grid
    u1, u2, b1, b2 = st.coeff_arrays()
    mask = grid.dealias_mask
    ud1, ud2, bd1, bd2 = u1 * mask, u2 * mask, b1 * mask, b2 * mask
    U1 = ifft_samples(grid, ud1).real
    U2 = ifft_samples(grid, ud2).real
    B1 = ifft_samples(grid, bd1).real
    B2 = ifft_samples(grid, bd2).real
    g1 = mask * fft_coeffs(grid, _advect(grid, U1, U2, ud1) - _advect(grid, B1, B2, bd1))
    g2 = mask * fft_coeffs(grid, _advect(grid, U1, U2, ud2) - _advect(grid, B1, B2, bd2))
    g1 = g1 - grid.ik2 * b1
    g2 = g2 - grid.ik2 * b2
    div_g = grid.k1 * g1 + grid.k2 * g2  # i cancels against 1/i below
    with np.errstate(invalid="ignore", divide="ignore"):
        p_hat = np.where(grid.ksq > 0, 1j * div_g / np.where(grid.ksq > 0, grid.ksq, 1.0), 0.0)
    return inverse_transform(SpectralScalar(grid, p_hat))


def transport_skew_defect(u: VectorField, f: ScalarField | SpectralScalar) -> float:
    """Normalized discrete residue of the cancellation int (u.grad f) f dx = 0.

    With dealiased products the value is roundoff-level for divergence-free u.
    """
    grid, (u1, u2) = _coeff_arrays(u)
    _, (f_hat,) = _coeff_arrays(f)
    mask = grid.dealias_mask
    U1 = ifft_samples(grid, u1 * mask).real
    U2 = ifft_samples(grid, u2 * mask).real
    g_hat = mask * fft_coeffs(grid, _advect(grid, U1, U2, f_hat * mask))
    integral = MEASURE * float(np.sum(g_hat * np.conj(f_hat)).real)
    norm_u = np.sqrt(MEASURE * float(np.sum(np.abs(u1) ** 2 + np.abs(u2) ** 2)))
    norm_f_h1 = sobolev_norm(SpectralScalar(grid, f_hat), 1)
    return abs(integral) / (norm_u * norm_f_h1**2 + 1e-30)


def l2_energy(st: MHDState) -> float:
    """Half the total L2 energy of (u, b)."""
    total = sum(float(np.sum(np.abs(c) ** 2)) for c in st.coeff_arrays())
    return 0.5 * MEASURE * total


def grad_b_l2_sq(st: MHDState) -> float:
    """Squared L2 norm of grad b (the exact dissipation rate of l2_energy)."""
    _, _, b1, b2 = st.coeff_arrays()
    return MEASURE * float(np.sum(st.grid.ksq * (np.abs(b1) ** 2 + np.abs(b2) ** 2)))


def energy_balance_series(
    ts: np.ndarray, energies: np.ndarray, dissipations: np.ndarray
) -> float:
    """Max relative defect of e(t) - e(0) + int ||grad b||^2 dtau (trapezoid)."""
    ts = np.asarray(ts, dtype=float)
    energies = np.asarray(energies, dtype=float)
    dissipations = np.asarray(dissipations, dtype=float)
    if len(ts) < 2:
        raise InsufficientSamples("need at least 2 records for the energy balance")
    dt = np.diff(ts)
    increments = 0.5 * dt * (dissipations[:-1] + dissipations[1:])
    integral = np.concatenate([[0.0], np.cumsum(increments)])
    defect = np.abs(energies - energies[0] + integral)
    denom = energies[0] if energies[0] > 0 else 1.0
    return float(np.max(defect) / denom)


def energy_balance_residual(history: list[tuple[float, MHDState]]) -> float:
    """Energy-law residual over a densely sampled trajectory."""
    if len(history) < 2:
        raise InsufficientSamples("need at least 2 records for the energy balance")
    ts = np.array([t for t, _ in history])
    energies = np.array([l2_energy(s) for _, s in history])
    dissipations = np.array([grad_b_l2_sq(s) for _, s in history])
    return energy_balance_series(ts, energies, dissipations)
