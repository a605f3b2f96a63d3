"""Quantum potentials, mock-Schroedinger propagation and Bohmian ensembles."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (Canonical, FullLV, Grid1D, HamiltonianSpec, HarmonicLV, HbarLike, WaveFunction,
                   as_hbar, fourier_interpolate, probability_current)
from .errors import DegenerateStateError, DomainError, NonUnitaryWarning
from .spectral import hermite_eigenstate, kinetic_multiplier

# rho below this fraction of max(rho) is excluded from every quantum-potential value
NODE_RHO_TOL = 1e-10


# -- node handling ---------------------------------------------------------------

def phase_aligned(psi: WaveFunction, tol: float = 1e-8) -> Optional[np.ndarray]:
    """Real amplitude u with psi = e^{i theta} u, or None if psi carries a current."""
    amps = psi.amplitudes
    i = int(np.argmax(np.abs(amps)))
    if amps[i] == 0:
        return None
    u = amps * (np.abs(amps[i]) / amps[i])
    if np.abs(u.imag).max() > tol * np.abs(u).max():
        return None
    return u.real.copy()


def node_mask(psi: WaveFunction, rho_tol: float = NODE_RHO_TOL) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    """Validity mask and node intervals ``(i, j)`` bracketing each interior node.

    Points with rho < rho_tol * max(rho) are invalid. For real-up-to-phase
    states a node is a sign change of the aligned amplitude between consecutive
    valid points; otherwise it is an interior run of invalid points. Bracketing
    points are invalidated as well since the potential diverges there.
    """
    rho = psi.density()
    peak = rho.max()
    if peak == 0:
        raise DegenerateStateError("all-zero wavefunction")
    valid = rho >= rho_tol * peak
    idx = np.flatnonzero(valid)
    intervals = []
    u = phase_aligned(psi)
    if u is not None:
        s = np.sign(u[idx])
        flips = np.flatnonzero(s[1:] != s[:-1])
        intervals = [(int(idx[f]), int(idx[f + 1])) for f in flips]
    else:
        gaps = np.flatnonzero(np.diff(idx) > 1)
        intervals = [(int(idx[g]), int(idx[g + 1])) for g in gaps]
    for i, j in intervals:
        valid[i] = valid[j] = False
    return valid, intervals


@dataclass(frozen=True, eq=False)
class QuantumPotentialField:
    grid: Grid1D
    values: np.ndarray
    mask: np.ndarray
    node_intervals: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def pole_count(self) -> int:
        return len(self.node_intervals)

    def masked(self) -> np.ndarray:
        """Values with invalid points set to NaN."""
        out = np.array(self.values, dtype=complex if np.iscomplexobj(self.values) else float)
        out[~self.mask] = np.nan
        return out

    def rows(self) -> np.ndarray:
        """Columns x, vq_re, vq_im, masked (1 where excluded)."""
        vals = np.asarray(self.values, dtype=complex)
        return np.column_stack([self.grid.x, vals.real, vals.imag, (~self.mask).astype(float)])


def _fill(values, valid):
    out = np.zeros_like(values)
    out[valid] = values[valid]
    return out


def quantum_potential_canonical(psi: WaveFunction, m: float,
                                rho_tol: float = NODE_RHO_TOL) -> QuantumPotentialField:
    """-(hbar^2/2m) (sqrt rho)''/sqrt rho, evaluated from smooth psi derivatives.

    With psi = R e^{iS/hbar}: R''/R = Re(psi* psi'')/|psi|^2 + (Im(psi* psi')/|psi|^2)^2,
    which avoids differentiating |psi| across nodes.
    """
    valid, intervals = node_mask(psi, rho_tol)
    if not valid.any():
        raise DegenerateStateError("no valid points for the quantum potential")
    g = psi.grid
    amps = psi.amplitudes
    d1 = g.derivative(amps, 1)
    d2 = g.derivative(amps, 2)
    rho = psi.density()
    safe = np.where(valid, rho, 1.0)
    curv = np.real(np.conj(amps) * d2) / safe + (np.imag(np.conj(amps) * d1) / safe) ** 2
    vq = -(psi.hbar ** 2) / (2 * m) * curv
    return QuantumPotentialField(g, _fill(vq, valid), valid, intervals)


def smooth_amplitude(psi: WaveFunction) -> np.ndarray:
    """Signed amplitude for standing waves, |psi| otherwise (the sign branch of sqrt rho)."""
    u = phase_aligned(psi)
    return u if u is not None else np.abs(psi.amplitudes)


def quantum_potential_general(psi: WaveFunction, spec: HamiltonianSpec,
                              rho_tol: float = NODE_RHO_TOL) -> QuantumPotentialField:
    """(1/sqrt rho) K(P) sqrt rho with K applied as a Fourier multiplier.

    Complex for kinetic terms that are not even in P (full LV).
    """
    valid, intervals = node_mask(psi, rho_tol)
    if not valid.any():
        raise DegenerateStateError("no valid points for the quantum potential")
    g = psi.grid
    R = smooth_amplitude(psi)
    KR = g.apply_multiplier(R, kinetic_multiplier(spec, g, psi.hbar))
    vq = KR / np.where(valid, R, 1.0)
    if np.abs(vq.imag[valid]).max() <= 1e-12 * max(np.abs(vq[valid]).max(), 1e-300):
        vq = vq.real
    return QuantumPotentialField(g, _fill(vq, valid), valid, intervals)


def harmonic_vq_closed_form(n: int, a: float, d: float, hbar: HbarLike, t: float, A: float,
                            grid: Grid1D, mode: str = "consistent", steps_per_unit: int = 500
                            ) -> QuantumPotentialField:
    """Quantum potential of the harmonic LV approximation.

    ``mode="literal"``: hbar w (n + 1/2) - (w/2)(Q - A cos wt)^2 with w = sqrt(ad),
    unit mass implied. ``mode="consistent"`` (default): the numerically evaluated
    potential of eigenstate ``n`` displaced by ``A`` and propagated to ``t``
    under the HarmonicLV Hamiltonian. The two disagree in the Q^2 coefficient.
    """
    h = as_hbar(hbar)
    spec = HarmonicLV(a, d)
    w = spec.omega
    if mode == "literal":
        vals = h * w * (n + 0.5) - 0.5 * w * (grid.x - A * math.cos(w * t)) ** 2
        return QuantumPotentialField(grid, vals, np.ones(grid.n, dtype=bool))
    if mode != "consistent":
        raise DomainError(f"unknown mode {mode!r}")
    psi = hermite_eigenstate(n, spec.mass, w, h, grid, center=A)
    if t != 0:
        steps = max(1, int(math.ceil(abs(t) * steps_per_unit)),
                    int(math.ceil(abs(t) / stable_dt(grid, spec, h))))
        psi = split_step_evolve(psi, spec, t / steps, steps)
    return quantum_potential_canonical(psi, spec.mass)


# -- propagation ------------------------------------------------------------------

def _energy_bound(grid: Grid1D, spec: HamiltonianSpec, h: float):
    V = spec.potential(grid)
    K = kinetic_multiplier(spec, grid, h)
    return V, K, np.abs(V).max() + np.abs(K).max()


def stable_dt(grid: Grid1D, spec: HamiltonianSpec, hbar: HbarLike, safety: float = 0.4) -> float:
    """Largest step with dt*E_max/hbar = safety (the propagator requires < 0.5)."""
    h = as_hbar(hbar)
    return safety * h / _energy_bound(grid, spec, h)[2]


class SplitStepPropagator:
    """Strang splitting: half potential kick, full kinetic drift, half kick."""

    def __init__(self, grid: Grid1D, spec: HamiltonianSpec, hbar: HbarLike, dt: float,
                 check_accuracy: bool = True):
        h = as_hbar(hbar)
        V, K, e_max = _energy_bound(grid, spec, h)
        if check_accuracy and abs(dt) * e_max >= 0.5 * h:
            raise DomainError(
                f"dt*E_max/hbar = {abs(dt) * e_max / h:.3g} >= 0.5; reduce dt below {0.5 * h / e_max:.3g}")
        self.grid, self.spec, self.hbar, self.dt = grid, spec, h, dt
        self._half = np.exp(-0.5j * dt * V / h)
        self._kin = np.exp(-1j * dt * K / h)

    def step(self, amps: np.ndarray) -> np.ndarray:
        amps = self._half * amps
        amps = np.fft.ifft(self._kin * np.fft.fft(amps))
        return self._half * amps

    def run(self, psi: WaveFunction, steps: int, stride: int = 0):
        """Advance ``steps``; with ``stride`` > 0 also collect snapshots (start included)."""
        amps = psi.amplitudes.copy()
        snaps = [amps.copy()] if stride else None
        for j in range(1, steps + 1):
            amps = self.step(amps)
            if stride and j % stride == 0:
                snaps.append(amps.copy())
        return amps, snaps


def _check_norm(psi: WaveFunction, out: np.ndarray, steps: int) -> None:
    n0 = psi.norm() ** 2
    n1 = psi.grid.integrate(np.abs(out) ** 2)
    drift = abs(n1 - n0) / n0
    if drift > 1e-10 * max(1.0, steps / 1000):
        warnings.warn(f"norm drifted by {drift:.2e}; evolution is not unitary", NonUnitaryWarning, stacklevel=3)


def split_step_evolve(psi: WaveFunction, spec: HamiltonianSpec, dt: float, steps: int,
                      check_accuracy: bool = True) -> WaveFunction:
    prop = SplitStepPropagator(psi.grid, spec, psi.hbar, dt, check_accuracy)
    out, _ = prop.run(psi, steps)
    _check_norm(psi, out, steps)
    return psi.replace(out)


def evolve_snapshots(psi: WaveFunction, spec: HamiltonianSpec, dt: float, steps: int,
                     stride: int = 1, check_accuracy: bool = True) -> List[WaveFunction]:
    """States at times 0, stride*dt, 2*stride*dt, ... up to steps*dt."""
    prop = SplitStepPropagator(psi.grid, spec, psi.hbar, dt, check_accuracy)
    out, snaps = prop.run(psi, steps, stride)
    _check_norm(psi, out, steps)
    return [psi.replace(s) for s in snaps]


def bohm_velocity(psi: WaveFunction, m: float, rho_tol: float = NODE_RHO_TOL,
                  fill: float = np.nan) -> np.ndarray:
    """hbar Im(psi* psi')/(m |psi|^2); masked points get ``fill``."""
    valid, _ = node_mask(psi, rho_tol)
    rho = psi.density()
    v = probability_current(psi, m) / np.where(valid, rho, 1.0)
    return np.where(valid, v, fill)


# -- trajectories -------------------------------------------------------------------

@dataclass(eq=False)
class TrajectoryEnsemble:
    positions: np.ndarray
    seed: int
    time: float = 0.0
    reflections: int = 0

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self.positions), 1.0 / len(self.positions))

    def __len__(self):
        return len(self.positions)


def density_cdf(psi: WaveFunction, refine: int = 16):
    """Fine grid and CDF of |psi|^2 on it (band-limited interpolation, trapezoid)."""
    fine, amps = fourier_interpolate(psi.grid, psi.amplitudes, refine)
    rho = np.abs(amps) ** 2
    x = np.append(fine.x, fine.x_max)
    rho = np.append(rho, rho[0])
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * fine.spacing)])
    return x, cdf / cdf[-1]


def sample_walkers(psi: WaveFunction, size: int, seed: int, refine: int = 16) -> TrajectoryEnsemble:
    """i.i.d. draws from |psi|^2 by inverse CDF."""
    x, cdf = density_cdf(psi, refine)
    u = np.random.default_rng(seed).random(size)
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    return TrajectoryEnsemble(np.interp(u, cdf[keep], x[keep]), seed)


def ks_distance(samples: np.ndarray, psi: WaveFunction, refine: int = 16) -> float:
    """Kolmogorov-Smirnov distance between samples and |psi|^2."""
    x, cdf = density_cdf(psi, refine)
    s = np.sort(np.asarray(samples))
    target = np.interp(s, x, cdf)
    n = len(s)
    upper = np.arange(1, n + 1) / n - target
    lower = target - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


class PeriodicCubic:
    """Four-point cubic Lagrange interpolation on a periodic grid.

    Stencil weights depend only on positions, so they are shared by every
    field sampled on the same grid.
    """

    def __init__(self, grid: Grid1D, positions: np.ndarray):
        u = (np.asarray(positions) - grid.x_min) / grid.spacing
        i = np.floor(u).astype(np.int64)
        t = u - i
        n = grid.n
        self.idx = np.stack([(i - 1) % n, i % n, (i + 1) % n, (i + 2) % n])
        self.w = np.stack([
            -t * (t - 1) * (t - 2) / 6,
            (t + 1) * (t - 1) * (t - 2) / 2,
            -(t + 1) * t * (t - 2) / 2,
            (t + 1) * t * (t - 1) / 6,
        ])

    def __call__(self, field: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ij->j", self.w, field[self.idx])


def _reflect(x: np.ndarray, lo: float, hi: float) -> Tuple[np.ndarray, int]:
    out_lo, out_hi = x < lo, x > hi
    count = int(out_lo.sum() + out_hi.sum())
    if count:
        x = np.where(out_lo, 2 * lo - x, x)
        x = np.where(out_hi, 2 * hi - x, x)
        x = np.clip(x, lo, hi)
    return x, count


def propagate_trajectories(ens: TrajectoryEnsemble, snapshots: Sequence[WaveFunction], m: float,
                           dt: float, steps: Optional[int] = None,
                           record: Optional[Callable[[int, np.ndarray], None]] = None
                           ) -> TrajectoryEnsemble:
    """RK4 through velocity fields interpolated cubically in space, linearly in time.

    ``snapshots[j]`` is the state at ``ens.time + j*dt``; one RK4 step is taken
    per snapshot interval. ``record(j, positions)`` is called after each step.
    """
    if steps is None:
        steps = len(snapshots) - 1
    if steps > len(snapshots) - 1:
        raise DomainError("not enough snapshots for the requested steps")
    g = snapshots[0].grid
    lo, hi = g.x_min, g.x_max
    x = np.array(ens.positions, dtype=float)
    reflections = ens.reflections
    nxt = bohm_velocity(snapshots[0], m, fill=0.0)
    for j in range(steps):
        cur, nxt = nxt, bohm_velocity(snapshots[j + 1], m, fill=0.0)

        def vel(pos, frac):
            interp = PeriodicCubic(g, pos)
            return (1 - frac) * interp(cur) + frac * interp(nxt)

        k1 = vel(x, 0.0)
        k2 = vel(x + 0.5 * dt * k1, 0.5)
        k3 = vel(x + 0.5 * dt * k2, 0.5)
        k4 = vel(x + dt * k3, 1.0)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x, c = _reflect(x, lo, hi)
        reflections += c
        if record is not None:
            record(j + 1, x)
    if reflections > ens.reflections:
        warnings.warn(f"{reflections - ens.reflections} walker reflections at the grid edge", stacklevel=2)
    return TrajectoryEnsemble(x, ens.seed, ens.time + steps * dt, reflections)


# -- environment term -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EnvironmentTerm:
    values: np.ndarray
    mask: np.ndarray
    laplacian_residual: Optional[float]


def environment_term_eta(psi: WaveFunction, spec: HamiltonianSpec,
                         rho_tol: float = NODE_RHO_TOL) -> EnvironmentTerm:
    """eta = V_Q psi, the term whose addition linearizes the psi-equation.

    For canonical kinetic terms also checks |eta| = (hbar^2/2m)|(sqrt rho)''|.
    """
    vq = quantum_potential_general(psi, spec, rho_tol)
    eta = np.where(vq.mask, vq.values * psi.amplitudes, 0.0)
    residual = None
    if isinstance(spec, (Canonical, HarmonicLV)):
        m = spec.mass
        lap = psi.grid.derivative(smooth_amplitude(psi), 2)
        target = psi.hbar ** 2 / (2 * m) * np.abs(lap)
        residual = float(np.abs(np.abs(eta) - target)[vq.mask].max())
    return EnvironmentTerm(eta, vq.mask, residual)
