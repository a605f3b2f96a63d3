import math

import numpy as np
import pytest

from mockq.core import (Canonical, FullLV, Grid1D, HarmonicLV, MockPlanck, WaveFunction, as_hbar,
                        fourier_interpolate, from_madelung, mass_of, normalize, probability_current,
                        to_madelung)
from mockq.errors import DegenerateStateError, DomainError


def gaussian(grid, x0=0.0, k0=0.0, s=1.0, hbar=1.0):
    psi = np.exp(-0.5 * ((grid.x - x0) / s) ** 2 + 1j * k0 * grid.x)
    return normalize(WaveFunction(grid, psi, hbar))


def test_mock_planck_validation():
    assert as_hbar(0.5) == 0.5
    assert float(MockPlanck(2)) == 2.0
    for bad in (0, -1, math.inf, math.nan):
        with pytest.raises(DomainError):
            MockPlanck(bad)


@pytest.mark.parametrize("n", [0, 7, 12, 100])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(DomainError):
        Grid1D(0, 1, n)


def test_grid_rejects_reversed_bounds():
    with pytest.raises(DomainError):
        Grid1D(1, 0, 16)


def test_grid_geometry():
    g = Grid1D(-2.0, 2.0, 16)
    assert g.spacing == 0.25
    assert g.x[0] == -2.0 and g.x[-1] == 1.75
    assert np.isclose(g.k[1], 2 * np.pi / 4)
    assert g.refine(4).n == 64


def test_spectral_derivative_exact_on_band_limited(grid):
    L = grid.length
    f = np.sin(2 * np.pi * 3 * grid.x / L)
    df = 2 * np.pi * 3 / L * np.cos(2 * np.pi * 3 * grid.x / L)
    assert np.abs(grid.derivative(f) - df).max() < 1e-12
    d2 = grid.derivative(f, 2)
    assert np.abs(d2 + (2 * np.pi * 3 / L) ** 2 * f).max() < 1e-12
    assert np.isrealobj(grid.derivative(f))


def test_integrate_gaussian(grid):
    assert abs(grid.integrate(np.exp(-grid.x ** 2)) - math.sqrt(math.pi)) < 1e-12


def test_fourier_interpolation_reproduces_samples(grid):
    f = np.exp(-grid.x ** 2 / 2)
    fine, g = fourier_interpolate(grid, f, 4)
    assert fine.n == 4 * grid.n
    assert np.abs(g[::4] - f).max() < 1e-13
    assert np.abs(g.real - np.exp(-fine.x ** 2 / 2)).max() < 1e-12


def test_wavefunction_validation(grid):
    with pytest.raises(DomainError):
        WaveFunction(grid, np.zeros(grid.n - 1))
    with pytest.raises(DomainError):
        WaveFunction(grid, np.full(grid.n, np.nan))
    with pytest.raises(DegenerateStateError):
        normalize(WaveFunction(grid, np.zeros(grid.n)))


def test_wavefunction_is_immutable(grid):
    psi = gaussian(grid)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0


def test_wavefunction_algebra(grid):
    a, b = gaussian(grid, -1), gaussian(grid, 1)
    assert abs(a.norm() - 1) < 1e-12
    assert abs(a.inner(a) - 1) < 1e-12
    assert abs(a.inner(b) - math.exp(-1)) < 1e-12
    assert abs(gaussian(grid, 0.7).expectation_x() - 0.7) < 1e-12
    assert np.allclose((2 * a).amplitudes, (a + a).amplitudes)


def test_madelung_roundtrip(grid):
    psi = gaussian(grid, 0.5, 1.3, hbar=0.7)
    f = to_madelung(psi, mass=2.0)
    back = from_madelung(f, 0.7)
    # phases agree up to a global constant
    ok = ~f.undefined
    ratio = back.amplitudes[ok] / psi.amplitudes[ok]
    assert np.abs(ratio - ratio[0]).max() < 1e-10
    core = np.abs(grid.x - 0.5) < 4
    assert np.abs(f.v[core] - 0.7 * 1.3 / 2.0).max() < 1e-9


def test_madelung_flags_nodes(grid):
    psi = WaveFunction(grid, grid.x * np.exp(-grid.x ** 2 / 2))
    f = to_madelung(psi)
    assert f.undefined.any()
    with pytest.raises(DegenerateStateError):
        to_madelung(WaveFunction(grid, np.zeros(grid.n)))


def test_probability_current_plane_wave(grid):
    k = 2 * np.pi * 4 / grid.length
    psi = WaveFunction(grid, np.exp(1j * k * grid.x), 0.5)
    assert np.allclose(probability_current(psi, 2.0), 0.5 * k / 2.0)


def test_hamiltonian_specs(grid):
    h = HarmonicLV(2.0, 0.5)
    assert h.omega == 1.0 and h.mass == 2.0
    assert h.exact_level(0, 1.0) == 2.5 + 0.5
    assert np.allclose(h.potential(grid), 2.5 + grid.x ** 2)
    with pytest.raises(DomainError):
        HarmonicLV(-1, 1)
    c = Canonical.harmonic(2.0, 3.0)
    assert np.allclose(c.potential(grid), 9 * grid.x ** 2)
    assert np.allclose(Canonical(1.0).potential(grid), 0)
    with pytest.raises(DomainError):
        Canonical(1.0, np.zeros(3)).potential(grid)
    with pytest.raises(DomainError):
        Canonical(0.0)
    lv = FullLV(1.0, -1.0)
    assert np.allclose(lv.kinetic(np.array([0.0])), -1.0)
    assert mass_of(c) == 2.0
    with pytest.raises(DomainError):
        mass_of(lv)
