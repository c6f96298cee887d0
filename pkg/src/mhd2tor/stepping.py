"""Integrating-factor RK4 time stepping for the MHD state.

The diffusion Lap b is diagonal in Fourier space, so the b equation is
integrated in the transformed variable w_k = exp(|k|^2 t) b_k: pure
diffusion is reproduced exactly (to roundoff), and classical RK4 handles
the remaining terms at fourth order.  Every step ends with a Leray
projection, zeroing of the k = 0 mode, and, when the run started inside
the symmetry class, re-symmetrization; all three are projections the exact
flow already satisfies, so they only suppress roundoff drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .dynamics import _rhs_arrays, _rhs_total_arrays
from .errors import NonFiniteState, StepTooSmall
from .spectral import ifft_samples, project_divergence_free
from .symmetry import (
    MHDState,
    _reflect_coeffs,
    PARITY,
    state_from_arrays,
    symmetry_defect,
)

_LANDING_TOL = 1e-12


@lru_cache(maxsize=64)
def _heat_factors(grid, dt: float):
    """exp(-|k|^2 dt/2) and exp(-|k|^2 dt), cached per (grid, dt)."""
    e_half = np.exp(-grid.ksq * (0.5 * dt))
    return e_half, e_half * e_half


@dataclass(frozen=True)
class StepperConfig:
    """Step-size control parameters."""

    t_end: float
    cfl: float = 0.4
    dt_max: float = 1e-2
    dt_min: float = 1e-8

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.dt_max <= 0 or self.dt_min <= 0:
            raise ValueError("dt_max and dt_min must be positive")
        if self.dt_min >= self.dt_max:
            raise ValueError(f"dt_min {self.dt_min} must be < dt_max {self.dt_max}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")


def cfl_dt(st: MHDState, cfg: StepperConfig) -> float:
    """Advective CFL step from the pointwise speed |u| + |b + e2|."""
    grid = st.grid
    phys = ifft_samples(grid, np.stack(st.coeff_arrays())).real
    U1, U2, B1, B2 = phys
    B2 = B2 + 1.0  # total field includes e2
    speed = float(np.max(np.sqrt(U1**2 + U2**2) + np.sqrt(B1**2 + B2**2)))
    dt = min(cfg.dt_max, cfg.cfl * grid.spacing / (speed + 1e-12))
    if dt < cfg.dt_min:
        raise StepTooSmall(f"CFL step {dt:.3e} below dt_min {cfg.dt_min:.3e}")
    return dt


def _soft_rhs(grid, nonlinear: bool, coupling: bool, rhs_mode: str):
    """Non-stiff tendency (du and db_soft) as a function of raw coeff arrays."""
    if rhs_mode == "perturbation":

        def rhs(u1, u2, b1, b2):
            du1, du2, ds1, ds2, _, _ = _rhs_arrays(grid, u1, u2, b1, b2, nonlinear, coupling)
            return du1, du2, ds1, ds2

    elif rhs_mode == "total":

        def rhs(u1, u2, b1, b2):
            B2 = b2.copy()
            B2[0, 0] += 1.0
            du1, du2, ds1, ds2, _, _ = _rhs_total_arrays(grid, u1, u2, b1, B2)
            return du1, du2, ds1, ds2

    else:
        raise ValueError(f"unknown rhs_mode {rhs_mode!r}")
    return rhs


def step_ifrk4(
    st: MHDState,
    dt: float,
    nonlinear: bool = True,
    coupling: bool = True,
    rhs_mode: str = "perturbation",
    enforce_class: Optional[bool] = None,
) -> MHDState:
    """Advance one step of size dt with integrating-factor RK4.

    ``enforce_class=None`` re-symmetrizes only if the input state is already
    in the class (defect below 1e-12).
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid = st.grid
    if enforce_class is None:
        enforce_class = symmetry_defect(st) < 1e-12
    rhs = _soft_rhs(grid, nonlinear, coupling, rhs_mode)
    e_half, e_full = _heat_factors(grid, dt)

    u1, u2, b1, b2 = st.coeff_arrays()
    k1u1, k1u2, k1b1, k1b2 = rhs(u1, u2, b1, b2)
    a_u1 = u1 + 0.5 * dt * k1u1
    a_u2 = u2 + 0.5 * dt * k1u2
    a_b1 = e_half * (b1 + 0.5 * dt * k1b1)
    a_b2 = e_half * (b2 + 0.5 * dt * k1b2)
    k2u1, k2u2, k2b1, k2b2 = rhs(a_u1, a_u2, a_b1, a_b2)
    c_u1 = u1 + 0.5 * dt * k2u1
    c_u2 = u2 + 0.5 * dt * k2u2
    c_b1 = e_half * b1 + 0.5 * dt * k2b1
    c_b2 = e_half * b2 + 0.5 * dt * k2b2
    k3u1, k3u2, k3b1, k3b2 = rhs(c_u1, c_u2, c_b1, c_b2)
    d_u1 = u1 + dt * k3u1
    d_u2 = u2 + dt * k3u2
    d_b1 = e_full * b1 + dt * e_half * k3b1
    d_b2 = e_full * b2 + dt * e_half * k3b2
    k4u1, k4u2, k4b1, k4b2 = rhs(d_u1, d_u2, d_b1, d_b2)

    n_u1 = u1 + (dt / 6.0) * (k1u1 + 2.0 * (k2u1 + k3u1) + k4u1)
    n_u2 = u2 + (dt / 6.0) * (k1u2 + 2.0 * (k2u2 + k3u2) + k4u2)
    n_b1 = e_full * b1 + (dt / 6.0) * (e_full * k1b1 + 2.0 * e_half * (k2b1 + k3b1) + k4b1)
    n_b2 = e_full * b2 + (dt / 6.0) * (e_full * k1b2 + 2.0 * e_half * (k2b2 + k3b2) + k4b2)

    n_u1, n_u2 = project_divergence_free(grid, n_u1, n_u2)
    n_b1, n_b2 = project_divergence_free(grid, n_b1, n_b2)
    for arr in (n_u1, n_u2, n_b1, n_b2):
        arr[0, 0] = 0.0
    if enforce_class:
        n_u1 = 0.5 * (n_u1 + _reflect_coeffs(n_u1, PARITY["u1"]))
        n_u2 = 0.5 * (n_u2 + _reflect_coeffs(n_u2, PARITY["u2"]))
        n_b1 = 0.5 * (n_b1 + _reflect_coeffs(n_b1, PARITY["b1"]))
        n_b2 = 0.5 * (n_b2 + _reflect_coeffs(n_b2, PARITY["b2"]))
    if not all(np.all(np.isfinite(a)) for a in (n_u1, n_u2, n_b1, n_b2)):
        raise NonFiniteState(f"state became non-finite during step from t={st.t:.6g}")
    return state_from_arrays(grid, st.t + dt, n_u1, n_u2, n_b1, n_b2)


def run(
    st0: MHDState,
    cfg: StepperConfig,
    sample_every: float,
    sink: Callable[[object, MHDState], None],
    energy_params=None,
    nonlinear: bool = True,
    coupling: bool = True,
    rhs_mode: str = "perturbation",
) -> MHDState:
    """Advance to t_end with CFL steps, landing exactly on sample times.

    ``sink(record, state)`` is invoked at the initial time, at every multiple
    of ``sample_every``, and at t_end.  Deterministic for fixed inputs.
    """
    from .diagnostics import EnergyParams, instantaneous

    if sample_every <= 0:
        raise ValueError(f"sample_every must be positive, got {sample_every}")
    params = energy_params if energy_params is not None else EnergyParams(s=2)
    enforce = symmetry_defect(st0) < 1e-12

    st = st0
    sink(instantaneous(st, params), st)
    if cfg.t_end <= st.t + _LANDING_TOL:
        return st
    last_emitted = st.t
    next_sample = (np.floor(st.t / sample_every + 1e-9) + 1) * sample_every
    while st.t < cfg.t_end - _LANDING_TOL:
        target = min(next_sample, cfg.t_end)
        try:
            dt = cfl_dt(st, cfg)
            if st.t + dt >= target - _LANDING_TOL:
                st = step_ifrk4(
                    st, target - st.t, nonlinear=nonlinear, coupling=coupling,
                    rhs_mode=rhs_mode, enforce_class=enforce,
                )
                st.t = target  # exact landing
            else:
                st = step_ifrk4(
                    st, dt, nonlinear=nonlinear, coupling=coupling,
                    rhs_mode=rhs_mode, enforce_class=enforce,
                )
        except (NonFiniteState, StepTooSmall) as exc:
            raise type(exc)(f"{exc} (last good t={st.t:.6g})") from exc
        if st.t >= next_sample - _LANDING_TOL:
            sink(instantaneous(st, params), st)
            last_emitted = st.t
            next_sample += sample_every
    if last_emitted < st.t - _LANDING_TOL:
        sink(instantaneous(st, params), st)
    return st
