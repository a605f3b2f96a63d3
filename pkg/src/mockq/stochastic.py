"""Langevin dynamics, response-field (MSR) actions and a Born-ergodicity diagnostic.

Noise convention: the per-step increment is lambda*(F dt + sqrt(k N dt / lambda) g),
so the white-noise correlator is <xi xi'> = (k/lambda) N delta(t - t'). The
action uses the same k/lambda so that integrator and action describe one process.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numba
import numpy as np
from scipy.interpolate import CubicSpline

from .bohm import NODE_RHO_TOL, density_cdf, node_mask
from .core import WaveFunction
from .errors import BlowUpError, DomainError, ExtrapolationError

DIVERGENCE = 1e10


def _unit(phi):
    return 1.0


@dataclass(frozen=True)
class LangevinSpec:
    lam: float
    k: float
    drift: Callable[[float], float]
    noise_amplitude: Callable[[float], float] = _unit
    seed: int = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lambda must be > 0, got {self.lam}")
        if not self.k >= 0:
            raise DomainError(f"k must be >= 0, got {self.k}")

    @property
    def k_eff(self) -> float:
        """Noise strength per unit time seen by the action, k/lambda."""
        return self.k / self.lam


@dataclass(eq=False)
class DiscretePath:
    dt: float
    phi: np.ndarray
    phi_tilde: Optional[np.ndarray] = None

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        if self.phi_tilde is not None:
            self.phi_tilde = np.asarray(self.phi_tilde, dtype=float)
            if self.phi_tilde.shape != self.phi.shape:
                raise DomainError("phi and phi_tilde must have equal length")
        if not self.dt > 0:
            raise DomainError("dt must be > 0")
        if not np.isfinite(self.phi).all():
            raise DomainError("path contains non-finite values")

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.phi)) * self.dt

    def rows(self):
        cols = [self.t, self.phi]
        if self.phi_tilde is not None:
            cols.append(self.phi_tilde)
        return np.column_stack(cols)


def _slope(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def langevin_integrate(spec: LangevinSpec, phi0: float, dt: float, steps: int,
                       check: bool = True) -> DiscretePath:
    """Euler-Maruyama; deterministic given ``spec.seed``."""
    if check:
        stiff = dt * spec.lam * abs(_slope(spec.drift, phi0, 1e-6 * max(1.0, abs(phi0))))
        if stiff >= 0.1:
            raise DomainError(f"dt*lambda*|F'| = {stiff:.3g} at phi0 must be < 0.1")
    g = np.random.default_rng(spec.seed).standard_normal(steps) if spec.k > 0 else np.zeros(steps)
    root = math.sqrt(spec.k * dt / spec.lam)
    lam, F, N = spec.lam, spec.drift, spec.noise_amplitude
    phi = np.empty(steps + 1)
    x = phi[0] = float(phi0)
    for j in range(steps):
        x = x + lam * (F(x) * dt + root * math.sqrt(N(x)) * g[j])
        if not abs(x) <= DIVERGENCE:
            raise BlowUpError(f"path diverged at step {j + 1}", step=j + 1)
        phi[j + 1] = x
    return DiscretePath(dt, phi)


def ou_stationary_variance(lam: float, kappa: float, k: float, dt: float) -> float:
    """Exact stationary variance of the Euler-Maruyama chain for F = -kappa phi, N = 1.

    phi' = (1 - lam kappa dt) phi + sqrt(lam k dt) g  =>  var = k / (kappa (2 - lam kappa dt)).
    """
    r = lam * kappa * dt
    if not 0 < r < 2:
        raise DomainError("lam*kappa*dt must lie in (0, 2) for a stationary chain")
    return k / (kappa * (2 - r))


# -- drifts ---------------------------------------------------------------------

def drift_classical(H: Callable, scale: float = 1.0) -> Callable:
    """F = -dH/dphi by central difference with step 1e-6*scale."""
    h = 1e-6 * scale

    def F(phi):
        return -(H(phi + h) - H(phi - h)) / (2 * h)
    return F


def drift_mock(H: Callable, vq, scale: float = 1.0) -> Callable:
    """F = -d(H + V_Q)/dphi; V_Q given as a QuantumPotentialField or an (x, values) pair.

    Masked (node) samples are dropped before the cubic spline is built.
    """
    if hasattr(vq, "values"):
        x, v = vq.grid.x[vq.mask], np.real(vq.values[vq.mask])
    else:
        x, v = (np.asarray(a, dtype=float) for a in vq)
    spline = CubicSpline(x, v)
    dspline = spline.derivative()
    lo, hi = x[0], x[-1]
    Fc = drift_classical(H, scale)

    def F(phi):
        p = np.asarray(phi)
        if np.any((p < lo) | (p > hi)):
            raise ExtrapolationError(f"phi outside quantum-potential samples [{lo:g}, {hi:g}]")
        out = Fc(phi) - dspline(p)
        return float(out) if np.ndim(out) == 0 else out
    return F


# -- response-field action ---------------------------------------------------------

def _trapezoid_weights(n: int, dt: float) -> np.ndarray:
    w = np.full(n, dt)
    w[0] = w[-1] = 0.5 * dt
    return w


def msr_parts(path: DiscretePath, spec: LangevinSpec, scheme: str = "trapezoid"):
    """(J1, J2) with J(phi, a*phi~) = a J1 + a^2 J2.

    J = int dt phi~ (lambda^-1 d_t phi - F[phi] - (k/2lambda) N[phi] phi~).
    ``trapezoid``: nodal integrand with second-order d_t phi (numpy gradient);
    ``ito``: forward differences with drift/noise evaluated at the left point.
    """
    if path.phi_tilde is None:
        raise DomainError("msr_action needs the response field phi_tilde")
    phi, pt, dt = path.phi, path.phi_tilde, path.dt
    F = np.array([spec.drift(x) for x in phi])
    N = np.array([spec.noise_amplitude(x) for x in phi], dtype=float)
    if scheme == "trapezoid":
        w = _trapezoid_weights(len(phi), dt)
        eq = np.gradient(phi, dt) / spec.lam - F
        return float(np.sum(w * pt * eq)), float(np.sum(w * -0.5 * spec.k_eff * N * pt * pt))
    if scheme == "ito":
        eq = np.diff(phi) / (dt * spec.lam) - F[:-1]
        p = pt[:-1]
        return float(dt * np.sum(p * eq)), float(dt * np.sum(-0.5 * spec.k_eff * N[:-1] * p * p))
    raise DomainError(f"unknown scheme {scheme!r}")


def msr_action(path: DiscretePath, spec: LangevinSpec, scheme: str = "trapezoid") -> float:
    j1, j2 = msr_parts(path, spec, scheme)
    return j1 + j2


def onsager_machlup(path: DiscretePath, spec: LangevinSpec) -> float:
    """Action after integrating out phi~ (Ito scheme): sum (lambda^-1 dphi/dt - F)^2 dt / (2 k N / lambda)."""
    phi, dt = path.phi, path.dt
    F = np.array([spec.drift(x) for x in phi[:-1]])
    N = np.array([spec.noise_amplitude(x) for x in phi[:-1]], dtype=float)
    eq = np.diff(phi) / (dt * spec.lam) - F
    return float(np.sum(eq * eq * dt / (2 * spec.k_eff * N)))


# -- Born ergodicity ------------------------------------------------------------------

@numba.njit(cache=False)
def _osmotic_kernel(x0, drift, x_min, dx, valid, dt, sigma, steps, burn_in, nbins, seed, max_jump):
    n = drift.shape[0]
    L = n * dx
    counts = np.zeros(nbins, dtype=np.int64)
    reflections = 0
    np.random.seed(seed)
    sq = sigma * math.sqrt(dt)
    bw = L / nbins
    for w in range(x0.shape[0]):
        x = x0[w]
        for j in range(steps):
            u = (x - x_min) / dx
            i = int(math.floor(u))
            t = u - i
            i0 = i % n
            i1 = (i + 1) % n
            b = (1.0 - t) * drift[i0] + t * drift[i1]
            noise = sq * np.random.standard_normal()
            move = b * dt
            if abs(move) > max_jump:
                move = -move
                reflections += 1
            y = x + move + noise
            y = x_min + (y - x_min) % L
            k = int((y - x_min) / dx) % n
            if not valid[k]:
                # landing inside a node region: reflect the whole step
                y = x - move - noise
                y = x_min + (y - x_min) % L
                reflections += 1
                k = int((y - x_min) / dx) % n
                if not valid[k]:
                    y = x
            x = y
            if j >= burn_in:
                b_ = int((x - x_min) / bw)
                if b_ >= nbins:
                    b_ = nbins - 1
                counts[b_] += 1
    return counts, reflections


@dataclass(eq=False)
class ErgodicityResult:
    ks: float
    edges: np.ndarray
    counts: np.ndarray
    born_density: np.ndarray
    reflections: int
    seed: int

    def rows(self):
        return np.column_stack([self.edges[:-1], self.edges[1:], self.counts, self.born_density])


def osmotic_drift(psi: WaveFunction, m: float, rho_tol: float = NODE_RHO_TOL):
    """(hbar/2m) d log rho = (hbar/m) Re(psi* psi')/rho, bridged linearly across node regions."""
    g = psi.grid
    valid, _ = node_mask(psi, rho_tol)
    rho = psi.density()
    raw = np.real(np.conj(psi.amplitudes) * g.derivative(psi.amplitudes, 1))
    b = psi.hbar / m * raw / np.where(valid, rho, 1.0)
    if not valid.all():
        b = np.interp(g.x, g.x[valid], b[valid])
    return b, valid


def binned_ks(counts: np.ndarray, edges: np.ndarray, psi: WaveFunction) -> float:
    """KS distance between a histogram's CDF (at bin edges) and that of |psi|^2."""
    x, cdf = density_cdf(psi)
    target = np.interp(edges, x, cdf)
    emp = np.concatenate([[0.0], np.cumsum(counts) / counts.sum()])
    return float(np.abs(emp - target).max())


def born_ergodicity(psi: WaveFunction, m: float, dt: float, steps: int, burn_in: int,
                    walkers: int = 32, seed: int = 0, nbins: Optional[int] = None,
                    target: Optional[WaveFunction] = None) -> ErgodicityResult:
    """Osmotic diffusion dQ = (hbar/2m) d log rho dt + sqrt(hbar/m) dW scored against |psi|^2.

    ``walkers`` independent chains of ``steps`` steps each, all started at the
    density maximum, are pooled after ``burn_in``. ``target``
    scores the same occupation histogram against another state.
    """
    if burn_in >= steps:
        raise DomainError("burn_in must be smaller than steps")
    g = psi.grid
    drift, valid = osmotic_drift(psi, m)
    sigma = math.sqrt(psi.hbar / m)
    nbins = nbins or 8 * g.n
    x0 = np.full(walkers, g.x[int(np.argmax(psi.density()))])
    max_jump = 0.25 * g.spacing + 10 * sigma * math.sqrt(dt)
    counts, refl = _osmotic_kernel(x0, drift, g.x_min, g.spacing, valid, dt, sigma, steps,
                                   burn_in, nbins, seed, max_jump)
    edges = np.linspace(g.x_min, g.x_max, nbins + 1)
    scored = target if target is not None else psi
    sx, scdf = density_cdf(scored)
    born = np.diff(np.interp(edges, sx, scdf)) / np.diff(edges)
    return ErgodicityResult(binned_ks(counts, edges, scored), edges, counts, born, int(refl), seed)
