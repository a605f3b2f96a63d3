import math
import warnings

import numpy as np
import pytest

from mockq.bohm import (PeriodicCubic, stable_dt, TrajectoryEnsemble, bohm_velocity, density_cdf,
                        environment_term_eta, evolve_snapshots, harmonic_vq_closed_form, ks_distance,
                        node_mask, phase_aligned, propagate_trajectories, quantum_potential_canonical,
                        quantum_potential_general, sample_walkers, split_step_evolve)
from mockq.core import Canonical, Grid1D, HarmonicLV, WaveFunction
from mockq.errors import DomainError
from mockq.spectral import hermite_eigenstate, hermite_polynomial_superposition


@pytest.fixture
def g():
    return Grid1D.centered(8, 128)


def test_phase_aligned_detects_currents(g):
    psi = hermite_eigenstate(1, 1, 1, 1, g)
    assert phase_aligned(psi * np.exp(0.3j)) is not None
    moving = psi.replace(psi.amplitudes * np.exp(1j * g.x))
    assert phase_aligned(moving) is None


def test_node_mask_counts_nodes(g):
    for n in range(4):
        valid, nodes = node_mask(hermite_eigenstate(n, 1, 1, 1, g))
        assert len(nodes) == n
        assert not valid[0]  # far tails fall under the density threshold


def test_quantum_potential_ground_state(g):
    psi = hermite_eigenstate(0, 1, 1, 1, g)
    vq = quantum_potential_canonical(psi, 1.0)
    assert np.abs(vq.values - (0.5 - 0.5 * g.x ** 2))[vq.mask].max() < 1e-8
    assert np.isnan(vq.masked()[~vq.mask]).all()
    assert vq.rows().shape == (g.n, 4)


def test_general_matches_canonical_for_quadratic_kinetic(g):
    psi = hermite_eigenstate(2, 1, 1, 1, g)
    a = quantum_potential_canonical(psi, 1.0)
    b = quantum_potential_general(psi, Canonical(1.0))
    assert np.abs(a.values - b.values)[a.mask].max() < 1e-8


def test_closed_form_modes():
    grid = Grid1D.centered(12, 256)
    lit = harmonic_vq_closed_form(0, 1, 1, 1, 0.0, 0.0, grid, mode="literal")
    assert np.allclose(lit.values, 0.5 - 0.5 * grid.x ** 2)
    cons = harmonic_vq_closed_form(0, 1, 1, 1, 0.5, 1.0, grid)
    # a displaced coherent state keeps its Gaussian shape: V_Q is an inverted parabola
    c = cons.mask & (np.abs(grid.x) < 4)
    coef = np.polyfit(grid.x[c], cons.values[c], 2)
    assert abs(coef[0] + 0.5) < 1e-6
    with pytest.raises(DomainError):
        harmonic_vq_closed_form(0, 1, 1, 1, 0, 0, grid, mode="other")


def test_split_step_stationary_state_phase():
    spec = HarmonicLV(1, 1)
    grid = Grid1D.centered(12, 256)
    psi = hermite_eigenstate(1, spec.mass, spec.omega, 1.0, grid)
    t, steps = 1.0, 4000
    out = split_step_evolve(psi, spec, t / steps, steps)
    E = spec.exact_level(1, 1.0)
    assert abs(psi.inner(out) - np.exp(-1j * E * t)) < 1e-6


def test_split_step_precondition():
    grid = Grid1D.centered(8, 256)
    psi = hermite_eigenstate(0, 1, 1, 1, grid)
    with pytest.raises(DomainError):
        split_step_evolve(psi, Canonical.harmonic(), 0.1, 10)


def test_coherent_state_follows_classical_orbit():
    grid = Grid1D.centered(10, 256)
    psi = hermite_eigenstate(0, 1, 1, 1, grid, center=2.0)
    snaps = evolve_snapshots(psi, Canonical.harmonic(), 5e-4, 6000, 2000)
    assert len(snaps) == 4
    for j, s in enumerate(snaps):
        assert abs(s.expectation_x() - 2 * math.cos(j)) < 1e-5


def test_bohm_velocity_plane_wave():
    grid = Grid1D.centered(4, 64)
    k = 2 * np.pi * 3 / grid.length
    psi = WaveFunction(grid, np.exp(1j * k * grid.x), 0.5)
    assert np.allclose(bohm_velocity(psi, 2.0), 0.5 * k / 2.0)


def test_sampling_and_ks(g):
    psi = hermite_eigenstate(0, 1, 1, 1, g)
    ens = sample_walkers(psi, 20000, seed=3)
    assert len(ens) == 20000 and np.isclose(ens.weights.sum(), 1)
    assert ks_distance(ens.positions, psi) < 0.015
    assert ks_distance(ens.positions + 1.0, psi) > 0.3
    # same seed, same draws
    assert np.array_equal(sample_walkers(psi, 10, 3).positions, sample_walkers(psi, 10, 3).positions)
    x, cdf = density_cdf(psi)
    assert cdf[0] == 0 and abs(cdf[-1] - 1) < 1e-15 and np.all(np.diff(cdf) >= 0)


def test_periodic_cubic_interpolation(g):
    f = np.sin(2 * np.pi * g.x / g.length)
    pos = np.random.default_rng(0).uniform(g.x_min, g.x_max, 500)
    err = np.abs(PeriodicCubic(g, pos)(f) - np.sin(2 * np.pi * pos / g.length)).max()
    assert err < 1e-5


def test_stationary_state_trajectories_do_not_move(g):
    psi = hermite_eigenstate(0, 1, 1, 1, g)
    snaps = evolve_snapshots(psi, Canonical.harmonic(), 1e-3, 500, 25)
    ens = sample_walkers(psi, 200, seed=1)
    out = propagate_trajectories(ens, snaps, 1.0, 1e-3 * 25)
    # only the splitting error moves the walkers
    assert np.abs(out.positions - ens.positions).max() < 1e-6
    assert out.time == pytest.approx(0.5)
    with pytest.raises(DomainError):
        propagate_trajectories(ens, snaps, 1.0, 0.025, steps=len(snaps))


def test_reflection_counter_warns(g):
    moving = WaveFunction(g, np.exp(1j * 2 * np.pi * 8 / g.length * g.x))
    snaps = evolve_snapshots(moving, Canonical(1.0), 1e-3, 50, 5)
    ens = TrajectoryEnsemble(np.array([g.x_max - 1e-3]), seed=0)
    with pytest.warns(UserWarning):
        out = propagate_trajectories(ens, snaps, 1.0, 5e-3)
    assert out.reflections >= 1


def test_mixed_state_poles(g):
    psi = hermite_polynomial_superposition([0, 3], 1, 1, 1, g)
    assert quantum_potential_canonical(psi, 1.0).pole_count == 3


def test_environment_term(g):
    psi = hermite_eigenstate(2, 1, 1, 1, g)
    eta = environment_term_eta(psi, Canonical(1.0))
    assert eta.laplacian_residual < 1e-8


def test_stable_dt_satisfies_precondition(g):
    spec = Canonical.harmonic()
    dt = stable_dt(g, spec, 1.0)
    psi = hermite_eigenstate(0, 1, 1, 1, g)
    split_step_evolve(psi, spec, dt, 10)
    with pytest.raises(DomainError):
        split_step_evolve(psi, spec, 1.3 * dt, 10)


def test_global_phase_gauge(g):
    psi = hermite_polynomial_superposition([0, 1], 1, 1, 1, g)
    rot = psi * np.exp(0.77j)
    a, b = quantum_potential_canonical(psi, 1.0), quantum_potential_canonical(rot, 1.0)
    dv = np.abs(bohm_velocity(psi, 1.0, fill=0) - bohm_velocity(rot, 1.0, fill=0))
    dq = np.abs(a.values - b.values)
    # rounding of the rotated samples is amplified by 1/rho toward the mask edge
    bulk = psi.density() >= 1e-4 * psi.density().max()
    assert dq[bulk].max() < 1e-12 and dv[bulk].max() < 1e-12
    assert dq[a.mask].max() < 1e-9 and dv.max() < 1e-9
    spec = Canonical.harmonic()
    ens = sample_walkers(psi, 100, seed=2)
    x1 = propagate_trajectories(ens, evolve_snapshots(psi, spec, 1e-3, 200, 10), 1.0, 1e-2).positions
    x2 = propagate_trajectories(ens, evolve_snapshots(rot, spec, 1e-3, 200, 10), 1.0, 1e-2).positions
    assert np.abs(x1 - x2).max() < 1e-12


def test_norm_conservation(g):
    psi = hermite_polynomial_superposition([0, 2], 1, 1, 1, g)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        out = split_step_evolve(psi, Canonical.harmonic(), 1e-3, 1000)
    assert abs(out.norm() ** 2 - 1) < 1e-10
