import math

import numpy as np
import pytest

from mockq.bohm import quantum_potential_canonical
from mockq.core import Grid1D
from mockq.errors import BlowUpError, DomainError, ExtrapolationError
from mockq.spectral import hermite_eigenstate
from mockq.stochastic import (DiscretePath, LangevinSpec, born_ergodicity, drift_classical,
                              drift_mock, langevin_integrate, msr_action, msr_parts, onsager_machlup,
                              osmotic_drift, ou_stationary_variance)


def linear(kappa=1.0, lam=1.0, k=1.0, seed=0):
    return LangevinSpec(lam, k, lambda x: -kappa * x, seed=seed)


def test_spec_validation():
    with pytest.raises(DomainError):
        LangevinSpec(0.0, 1.0, lambda x: 0.0)
    with pytest.raises(DomainError):
        LangevinSpec(1.0, -1.0, lambda x: 0.0)
    assert LangevinSpec(2.0, 3.0, lambda x: 0.0).k_eff == 1.5


def test_path_validation():
    with pytest.raises(DomainError):
        DiscretePath(0.0, [0.0, 1.0])
    with pytest.raises(DomainError):
        DiscretePath(0.1, [0.0, 1.0], [1.0])
    p = DiscretePath(0.5, [0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    assert p.rows().shape == (3, 3) and p.t[-1] == 1.0


def test_seeded_paths_are_reproducible():
    a = langevin_integrate(linear(seed=4), 0.3, 0.01, 500)
    b = langevin_integrate(linear(seed=4), 0.3, 0.01, 500)
    c = langevin_integrate(linear(seed=5), 0.3, 0.01, 500)
    assert np.array_equal(a.phi, b.phi) and not np.array_equal(a.phi, c.phi)


def test_zero_noise_is_explicit_euler():
    spec = linear(kappa=2.0, lam=0.5, k=0.0)
    path = langevin_integrate(spec, 1.0, 0.01, 100)
    assert np.allclose(path.phi, (1 - 0.5 * 2.0 * 0.01) ** np.arange(101), rtol=1e-13)


def test_stiffness_and_blow_up_guards():
    with pytest.raises(DomainError):
        langevin_integrate(linear(kappa=100.0), 0.0, 0.01, 10)
    spec = LangevinSpec(1.0, 0.0, lambda x: x * x)
    with pytest.raises(BlowUpError) as info:
        langevin_integrate(spec, 0.5, 0.05, 10000)
    assert info.value.step > 0


def test_ou_oracle_domain():
    assert ou_stationary_variance(1.0, 1.0, 2.0, 0.0 + 1e-12) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        ou_stationary_variance(1.0, 1.0, 1.0, 3.0)


def test_drifts():
    F = drift_classical(lambda x: 0.5 * 3.0 * x ** 2)
    assert F(0.7) == pytest.approx(-2.1, rel=1e-8)
    grid = Grid1D.centered(10, 256)
    psi = hermite_eigenstate(0, 1, 1, 1, grid)
    vq = quantum_potential_canonical(psi, 1.0)
    Fm = drift_mock(lambda x: 0.5 * x ** 2, vq)
    # V_Q = 1/2 - x^2/2 cancels the harmonic force exactly
    assert abs(Fm(0.9)) < 1e-6
    with pytest.raises(ExtrapolationError):
        Fm(50.0)
    Fp = drift_mock(lambda x: 0.0, (grid.x, grid.x ** 2))
    assert Fp(1.0) == pytest.approx(-2.0)


def test_msr_parts_scale():
    spec = linear()
    path = langevin_integrate(spec, 0.5, 0.01, 200)
    tilde = np.random.default_rng(2).standard_normal(len(path.phi))
    j1, j2 = msr_parts(DiscretePath(path.dt, path.phi, tilde), spec)
    for a in (0.5, 2.0, -1.3):
        scaled = msr_action(DiscretePath(path.dt, path.phi, a * tilde), spec)
        assert scaled == pytest.approx(a * j1 + a * a * j2, rel=1e-12)
    with pytest.raises(DomainError):
        msr_action(path, spec)
    with pytest.raises(DomainError):
        msr_parts(DiscretePath(path.dt, path.phi, tilde), spec, scheme="midpoint")


def test_onsager_machlup_is_stationary_point_of_msr():
    # the stationary value of the Ito action over phi~ is the Onsager-Machlup action
    spec = linear(kappa=0.7, lam=1.3, k=0.4)
    path = langevin_integrate(spec, 0.5, 0.01, 300)
    dt, phi = path.dt, path.phi
    eq = np.diff(phi) / (dt * spec.lam) + 0.7 * phi[:-1]
    best = np.append(eq / spec.k_eff, 0.0)
    J = msr_action(DiscretePath(dt, phi, best), spec, scheme="ito")
    assert J == pytest.approx(onsager_machlup(path, spec), rel=1e-12)


def test_osmotic_drift_ground_state():
    grid = Grid1D.centered(10, 256)
    psi = hermite_eigenstate(0, 1, 1, 1, grid)
    b, valid = osmotic_drift(psi, 1.0)
    assert np.abs(b + grid.x)[valid].max() < 1e-8


def test_born_ergodicity_small_run():
    grid = Grid1D.centered(10, 256)
    psi = hermite_eigenstate(0, 1, 1, 1, grid)
    r = born_ergodicity(psi, 1.0, 1e-3, 20000, 1000, walkers=8, seed=3)
    assert r.counts.sum() == 8 * 19000
    assert r.ks < 0.1
    again = born_ergodicity(psi, 1.0, 1e-3, 20000, 1000, walkers=8, seed=3)
    assert np.array_equal(r.counts, again.counts)
    assert r.rows().shape == (len(r.counts), 4)
    assert abs(np.sum(r.born_density * np.diff(r.edges)) - 1) < 1e-12
    with pytest.raises(DomainError):
        born_ergodicity(psi, 1.0, 1e-3, 100, 100)
