"""MHD states in the x2-reflection symmetry class with zero-mean constraints.

The class fixes the parities under x2 -> -x2: u1 and b2 even, u2 and b1 odd.
States are kept in perturbation variables (u, b) with the total magnetic
field B = b + e2.  The collocation grid is reflection-closed (x2 = -pi maps
to itself, +pi is identified with -pi), so reflection is the exact index map
j -> (n - j) mod n; in coefficient space this is the permutation
k2 -> -k2, which is what the implementation applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSpectrum
from .spectral import (
    MEASURE,
    GridSpec,
    SpectralScalar,
    VectorField,
    derivative_multiplier,
    divergence_defect,
    ifft_samples,
    project_divergence_free,
    sobolev_norm,
)

# Parity under x2 reflection, per component.  Data only, so diagnostics can
# name which component violated which parity.
PARITY = {"u1": +1, "u2": -1, "b1": -1, "b2": +1}


@dataclass(frozen=True)
class SymmetryClass:
    """The fixed reflection-parity table of the preserved class."""

    parity: tuple[tuple[str, int], ...] = tuple(sorted(PARITY.items()))


@dataclass
class MHDState:
    """Velocity / magnetic-perturbation pair at one time, spectral storage."""

    grid: GridSpec
    t: float
    u: VectorField
    b: VectorField

    def coeff_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.u.c1.coeffs, self.u.c2.coeffs, self.b.c1.coeffs, self.b.c2.coeffs)


def state_from_arrays(grid: GridSpec, t: float, u1, u2, b1, b2) -> MHDState:
    u = VectorField(SpectralScalar(grid, u1), SpectralScalar(grid, u2))
    b = VectorField(SpectralScalar(grid, b1), SpectralScalar(grid, b2))
    return MHDState(grid, t, u, b)


@dataclass(frozen=True)
class InitialDataSpec:
    """Parameters of the seeded random small-data family.

    epsilon is the total norm budget ||u0||_{H^{2s+1}} + ||grad b0||_{H^{2s}},
    split evenly between the two terms.  alpha is the total magnetic flux of
    B; the solver always works after the normalization alpha = (2*pi)^2, so
    it is recorded for documentation only.
    """

    epsilon: float
    s: int
    seed: int
    spectrum_decay: float = 3.0
    max_wavenumber: int = 4
    alpha: float = (2.0 * np.pi) ** 2

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.s < 2:
            raise ValueError(f"s must be an integer >= 2, got {self.s}")
        if self.spectrum_decay <= 0:
            raise ValueError(f"spectrum_decay must be > 0, got {self.spectrum_decay}")


def _reflect_coeffs(coeffs: np.ndarray, parity: int) -> np.ndarray:
    """Coefficients of f(x1, -x2), times the parity sign (exact permutation)."""
    n = coeffs.shape[1]
    idx = (-np.arange(n)) % n
    return parity * coeffs[:, idx]


def reflect_state(st: MHDState) -> MHDState:
    """Apply the x2 reflection with the class parities; an exact involution."""
    u1, u2, b1, b2 = st.coeff_arrays()
    return state_from_arrays(
        st.grid,
        st.t,
        _reflect_coeffs(u1, PARITY["u1"]),
        _reflect_coeffs(u2, PARITY["u2"]),
        _reflect_coeffs(b1, PARITY["b1"]),
        _reflect_coeffs(b2, PARITY["b2"]),
    )


def symmetrize(st: MHDState) -> MHDState:
    """Project onto the symmetry class: (st + reflect(st)) / 2."""
    refl = reflect_state(st)
    arrays = [
        0.5 * (a + b) for a, b in zip(st.coeff_arrays(), refl.coeff_arrays())
    ]
    return state_from_arrays(st.grid, st.t, *arrays)


def symmetry_defect(st: MHDState) -> float:
    """Relative sup-norm of the anti-class part, max over the four components."""
    grid = st.grid
    names = ("u1", "u2", "b1", "b2")
    defect = 0.0
    scale = 0.0
    for name, c in zip(names, st.coeff_arrays()):
        phys = ifft_samples(grid, c).real
        anti = ifft_samples(grid, 0.5 * (c - _reflect_coeffs(c, PARITY[name]))).real
        defect = max(defect, float(np.max(np.abs(anti))))
        scale = max(scale, float(np.max(np.abs(phys))))
    if scale == 0.0:
        return 0.0
    return defect / scale


def _draw_class_pair(
    grid: GridSpec,
    rng: np.random.Generator,
    kmax: int,
    decay: float,
    parities: tuple[int, int] = (PARITY["u1"], PARITY["u2"]),
) -> tuple[np.ndarray, np.ndarray]:
    """Random divergence-free zero-mean pair with the given x2 parities,
    band-limited to kmax.

    Coefficient magnitudes fall off like |k|^(-decay).  Draw order over modes
    is fixed, so results are reproducible for a given generator state.
    """
    n = grid.n
    c1 = np.zeros((n, n), dtype=np.complex128)
    c2 = np.zeros((n, n), dtype=np.complex128)
    for k1 in range(-kmax, kmax + 1):
        for k2 in range(-kmax, kmax + 1):
            if (k1, k2) == (0, 0) or k1 * k1 + k2 * k2 > kmax * kmax:
                continue
            # half-plane draw; conjugate mode set below
            if k1 < 0 or (k1 == 0 and k2 < 0):
                continue
            g = rng.standard_normal(4)
            amp = (k1 * k1 + k2 * k2) ** (-decay / 2.0)
            z1 = amp * (g[0] + 1j * g[1]) / np.sqrt(2.0)
            z2 = amp * (g[2] + 1j * g[3]) / np.sqrt(2.0)
            c1[k1 % n, k2 % n] = z1
            c2[k1 % n, k2 % n] = z2
            c1[(-k1) % n, (-k2) % n] = np.conj(z1)
            c2[(-k1) % n, (-k2) % n] = np.conj(z2)
    # the vector reflection (possibly composed with a sign flip) commutes
    # with the Leray projection, so symmetrizing first is safe
    c1 = 0.5 * (c1 + _reflect_coeffs(c1, parities[0]))
    c2 = 0.5 * (c2 + _reflect_coeffs(c2, parities[1]))
    c1, c2 = project_divergence_free(grid, c1, c2)
    c1[0, 0] = 0.0
    c2[0, 0] = 0.0
    return c1, c2


def gradient_norm(v: VectorField, m: int) -> float:
    """H^m norm of the full gradient of a (spectral) vector field."""
    parts = []
    for comp in (v.c1, v.c2):
        for alpha in ((1, 0), (0, 1)):
            d = comp.coeffs * derivative_multiplier(v.grid, alpha)
            parts.append(SpectralScalar(v.grid, d))
    return float(np.sqrt(sum(sobolev_norm(p, m) ** 2 for p in parts)))


def make_initial_data(spec: InitialDataSpec, grid: GridSpec) -> MHDState:
    """Seeded random state in the class, rescaled to the smallness budget.

    The draw uses the counter-based Philox generator keyed by (seed, attempt)
    through a SeedSequence, so results are bit-reproducible across platforms.
    u and b are rescaled separately so that each contributes epsilon/2 to
    ||u0||_{H^{2s+1}} + ||grad b0||_{H^{2s}}.

    Raises
    ------
    DegenerateSpectrum
        If the drawn fields are identically zero after projection on ten
        consecutive attempts.
    """
    if spec.max_wavenumber > grid.dealias_cutoff:
        raise ValueError(
            f"max_wavenumber {spec.max_wavenumber} exceeds dealias cutoff "
            f"{grid.dealias_cutoff:.3f} of n={grid.n}"
        )
    order = 2 * spec.s + 1
    for attempt in range(10):
        seq = np.random.SeedSequence(entropy=spec.seed, spawn_key=(attempt,))
        rng = np.random.Generator(np.random.Philox(seq))
        u1, u2 = _draw_class_pair(grid, rng, spec.max_wavenumber, spec.spectrum_decay)
        b1, b2 = _draw_class_pair(
            grid, rng, spec.max_wavenumber, spec.spectrum_decay,
            parities=(PARITY["b1"], PARITY["b2"]),
        )
        st = state_from_arrays(grid, 0.0, u1, u2, b1, b2)
        norm_u = sobolev_norm(st.u, order)
        norm_gb = gradient_norm(st.b, order - 1)
        if norm_u == 0.0 or norm_gb == 0.0:
            continue
        su = 0.5 * spec.epsilon / norm_u
        sb = 0.5 * spec.epsilon / norm_gb
        return state_from_arrays(grid, 0.0, su * u1, su * u2, sb * b1, sb * b2)
    raise DegenerateSpectrum(
        f"initial data collapsed to zero after projection (seed {spec.seed})"
    )


def random_class_velocity(
    grid: GridSpec, seed: int, kmax: int = 4, decay: float = 2.0
) -> VectorField:
    """Random divergence-free zero-mean velocity in the class (test helper)."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(0,))
    rng = np.random.Generator(np.random.Philox(seq))
    u1, u2 = _draw_class_pair(grid, rng, kmax, decay)
    return VectorField(SpectralScalar(grid, u1), SpectralScalar(grid, u2))


class CheckResult(NamedTuple):
    name: str
    value: float
    passed: bool


def validate_state(st: MHDState) -> list[CheckResult]:
    """Evaluate all state invariants; failures are reported, never raised."""
    grid = st.grid
    u1, u2, b1, b2 = st.coeff_arrays()
    div_u = divergence_defect(grid, u1, u2)
    div_b = divergence_defect(grid, b1, b2)
    results = [
        CheckResult("div_defect_u", div_u, div_u < 1e-10),
        CheckResult("div_defect_b", div_b, div_b < 1e-10),
    ]
    for name, c in zip(("u1", "u2", "b1", "b2"), st.coeff_arrays()):
        m = abs(MEASURE * c[0, 0].real)
        results.append(CheckResult(f"mean_{name}", float(m), m < 1e-12))
    finite = all(np.all(np.isfinite(c)) for c in st.coeff_arrays())
    results.append(CheckResult("coeffs_finite", 0.0 if finite else float("nan"), finite))
    d = symmetry_defect(st)
    results.append(CheckResult("symmetry_defect", d, d < 1e-10))
    return results
