import numpy as np
import pytest

from mhd2tor.errors import HermitianViolation
from mhd2tor.spectral import (
    MEASURE,
    GridSpec,
    ScalarField,
    SpectralScalar,
    VectorField,
    dealias,
    derivative_multiplier,
    divergence_defect,
    forward_transform,
    inverse_transform,
    leray_project,
    mean,
    partial_derivative,
    project_divergence_free,
    resample,
    sobolev_norm,
    vorticity,
)


@pytest.fixture
def grid():
    return GridSpec(16)


def rng(seed=0):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(7)
    with pytest.raises(ValueError):
        GridSpec(6)
    with pytest.raises(ValueError):
        GridSpec(16, dealias_fraction=0)


def test_grid_coordinates(grid):
    assert grid.x1[0, 0] == -np.pi
    assert grid.x2[0, 0] == -np.pi
    assert np.isclose(grid.x1[1, 0] - grid.x1[0, 0], grid.spacing)
    assert grid.k1[8, 0] == -8  # Nyquist
    assert grid.k2[0, 1] == 1


def test_single_mode_coefficients(grid):
    f = ScalarField(grid, np.sin(2 * grid.x2))
    F = forward_transform(f)
    # sin(2 x2) = (e^{2i x2} - e^{-2i x2}) / 2i
    assert abs(F.coeffs[0, 2] - (-0.5j)) < 1e-14
    assert abs(F.coeffs[0, -2] - (0.5j)) < 1e-14
    other = np.abs(F.coeffs)
    other[0, 2] = other[0, -2] = 0.0
    assert np.max(other) < 1e-14


def test_round_trip(grid):
    f = ScalarField(grid, rng().standard_normal((16, 16)))
    g = inverse_transform(forward_transform(f))
    assert np.max(np.abs(g.samples - f.samples)) < 1e-13


def test_hermitian_violation(grid):
    c = np.zeros((16, 16), dtype=np.complex128)
    c[1, 0] = 1.0  # no conjugate partner
    with pytest.raises(HermitianViolation):
        inverse_transform(SpectralScalar(grid, c))


def test_derivative_exact_on_trig(grid):
    f = ScalarField(grid, np.sin(3 * grid.x1) * np.cos(grid.x2))
    F = forward_transform(f)
    d = inverse_transform(partial_derivative(F, (1, 0)))
    exact = 3 * np.cos(3 * grid.x1) * np.cos(grid.x2)
    assert np.max(np.abs(d.samples - exact)) < 1e-12


def test_nyquist_zeroed_for_odd_orders(grid):
    mult = derivative_multiplier(grid, (1, 0))
    assert np.all(mult[8, :] == 0.0)
    mult2 = derivative_multiplier(grid, (2, 0))
    assert np.all(mult2[8, :] == -64.0)  # even order keeps (i*-8)^2


def test_sobolev_multiplier_values(grid):
    mu = grid.sobolev_multiplier(2)
    # k = (1, 0): alpha in {(0,0),(1,0),(0,1),(2,0),(1,1),(0,2)} -> 1+1+0+1+0+0
    i, j = 1, 0
    assert mu[i, j] == 3.0
    assert mu[0, 0] == 1.0


def test_sobolev_norm_single_mode(grid):
    f = forward_transform(ScalarField(grid, np.sin(grid.x2)))
    # ||sin x2||_L2^2 = (2 pi)^2 / 2
    assert np.isclose(sobolev_norm(f, 0), np.sqrt(2) * np.pi, rtol=1e-13)
    # mu_1(0,1) = 2
    assert np.isclose(sobolev_norm(f, 1), 2 * np.pi, rtol=1e-13)


def test_dealias_mask(grid):
    # cutoff = (2/3) * 8 = 16/3; |k| = 6 must vanish, |k| = 5 survive
    c = np.ones((16, 16), dtype=np.complex128)
    d = dealias(SpectralScalar(grid, c)).coeffs
    assert d[6, 0] == 0.0
    assert d[5, 0] == 1.0
    assert d[0, 6] == 0.0


def test_leray_projection_properties(grid):
    r = rng(1)
    v1 = r.standard_normal((16, 16)) + 1j * r.standard_normal((16, 16))
    v2 = r.standard_normal((16, 16)) + 1j * r.standard_normal((16, 16))
    p1, p2 = project_divergence_free(grid, v1, v2)
    assert divergence_defect(grid, p1, p2) < 1e-14
    # idempotent
    q1, q2 = project_divergence_free(grid, p1, p2)
    assert np.max(np.abs(q1 - p1)) < 1e-14
    # k = 0 untouched
    assert p1[0, 0] == v1[0, 0]
    v = VectorField(SpectralScalar(grid, v1), SpectralScalar(grid, v2))
    p = leray_project(v)
    assert np.max(np.abs(p.c1.coeffs - p1)) == 0.0


def test_vorticity_gradient_identity(grid):
    # for div-free mean-zero u: ||grad u||_L2 = ||omega||_L2
    r = rng(2)
    v1 = r.standard_normal((16, 16)) + 1j * r.standard_normal((16, 16))
    v2 = r.standard_normal((16, 16)) + 1j * r.standard_normal((16, 16))
    # hermitianize by transforming from a real field, then band-limit
    v1 = np.fft.fft2(np.fft.ifft2(v1).real)
    v2 = np.fft.fft2(np.fft.ifft2(v2).real)
    mask = grid.ksq <= 25
    v1, v2 = v1 * mask, v2 * mask
    p1, p2 = project_divergence_free(grid, v1, v2)
    p1[0, 0] = p2[0, 0] = 0.0
    u = VectorField(SpectralScalar(grid, p1), SpectralScalar(grid, p2))
    grad_sq = 0.0
    for comp in (u.c1, u.c2):
        for alpha in ((1, 0), (0, 1)):
            grad_sq += sobolev_norm(partial_derivative(comp, alpha), 0) ** 2
    w = forward_transform(vorticity(u))
    assert np.isclose(np.sqrt(grad_sq), sobolev_norm(w, 0), rtol=1e-12)


def test_mean(grid):
    f = ScalarField(grid, 1.5 + np.sin(grid.x1))
    assert np.isclose(mean(f), 1.5 * MEASURE, rtol=1e-14)
    assert np.isclose(mean(forward_transform(f)), 1.5 * MEASURE, rtol=1e-14)


def test_resample_band_limited(grid):
    f = ScalarField(grid, np.sin(3 * grid.x1) + np.cos(2 * grid.x2))
    F = forward_transform(f)
    big = GridSpec(24)
    up = resample(F, big)
    expected = np.sin(3 * big.x1) + np.cos(2 * big.x2)
    got = inverse_transform(up).samples
    assert np.max(np.abs(got - expected)) < 1e-12
    # down again
    back = resample(up, grid)
    assert np.max(np.abs(back.coeffs - F.coeffs)) < 1e-14


def test_stacked_transforms(grid):
    r = rng(3)
    batch = r.standard_normal((3, 16, 16))
    from mhd2tor.spectral import fft_coeffs, ifft_samples

    stacked = fft_coeffs(grid, batch)
    for i in range(3):
        single = fft_coeffs(grid, batch[i])
        assert np.max(np.abs(stacked[i] - single)) == 0.0
    back = ifft_samples(grid, stacked).real
    assert np.max(np.abs(back - batch)) < 1e-13
