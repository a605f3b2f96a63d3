"""Madelung hydrodynamics diagnostics.

Density derivatives are always formed from a smooth amplitude (psi, or sqrt(rho)
for bare densities) by the product rule, so their roundoff scales with |psi|
rather than with max(rho); this keeps 1/rho-weighted terms accurate out to the
node mask.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .bohm import NODE_RHO_TOL
from .core import Grid1D, WaveFunction
from .errors import DegenerateFitError, DomainError, InsufficientDataError

VELOCITY_EXPONENT = 2.0 / 3.0
PHASE_EXPONENT = 8.0 / 3.0


def _fd(f: np.ndarray, h: float, order: int) -> np.ndarray:
    """Second-order periodic central differences."""
    r = np.roll
    if order == 1:
        return (r(f, -1) - r(f, 1)) / (2 * h)
    if order == 2:
        return (r(f, -1) - 2 * f + r(f, 1)) / h ** 2
    if order == 3:
        return (r(f, -2) - 2 * r(f, -1) + 2 * r(f, 1) - r(f, 2)) / (2 * h ** 3)
    raise ValueError(order)


def _derivatives(grid: Grid1D, f: np.ndarray, method: str):
    if method == "spectral":
        return [grid.derivative(f, k) for k in (1, 2, 3)]
    if method == "fd":
        return [_fd(f, grid.spacing, k) for k in (1, 2, 3)]
    raise DomainError(f"unknown derivative method {method!r}")


@dataclass(frozen=True, eq=False)
class HydroFields:
    grid: Grid1D
    rho: np.ndarray
    v: np.ndarray
    sigma: np.ndarray
    m: float
    hbar: float
    mask: np.ndarray
    drho: np.ndarray
    dv: np.ndarray
    dsigma: np.ndarray
    dj: np.ndarray

    @classmethod
    def from_wavefunction(cls, psi: WaveFunction, m: float, method: str = "spectral",
                          rho_tol: float = NODE_RHO_TOL) -> "HydroFields":
        a = psi.amplitudes
        a1, a2, a3 = _derivatives(psi.grid, a, method)
        rho = np.abs(a) ** 2
        mask = rho >= rho_tol * rho.max()
        safe = np.where(mask, a, 1.0)
        r1 = 2 * np.real(np.conj(a) * a1)
        r2 = 2 * np.real(np.conj(a) * a2) + 2 * np.abs(a1) ** 2
        r3 = 2 * np.real(np.conj(a) * a3) + 6 * np.real(np.conj(a1) * a2)
        h = psi.hbar
        q1 = a1 / safe
        v = np.where(mask, h / m * np.imag(q1), 0.0)
        dv = np.where(mask, h / m * np.imag(a2 / safe - q1 * q1), 0.0)
        dj = h / m * np.imag(np.conj(a) * a2)
        sigma, dsigma = _stress(rho, r1, r2, r3, mask, m, h)
        return cls(psi.grid, rho, v, sigma, m, h, mask, r1, dv, dsigma, dj)

    @classmethod
    def from_density(cls, grid: Grid1D, rho, v, m: float, hbar: float,
                     method: str = "spectral", rho_tol: float = NODE_RHO_TOL) -> "HydroFields":
        """Bare (rho, v) fields; derivatives of rho via sqrt(rho)."""
        rho = np.asarray(rho, dtype=float)
        if (rho < 0).any():
            raise DomainError("density must be non-negative")
        v = np.asarray(v, dtype=float)
        R = np.sqrt(rho)
        R1, R2, R3 = (np.real(d) for d in _derivatives(grid, R, method))
        mask = rho >= rho_tol * rho.max()
        r1 = 2 * R * R1
        r2 = 2 * (R * R2 + R1 ** 2)
        r3 = 2 * (R * R3 + 3 * R1 * R2)
        dv = np.real(_derivatives(grid, v, method)[0])
        sigma, dsigma = _stress(rho, r1, r2, r3, mask, m, hbar)
        dj = r1 * v + rho * dv
        return cls(grid, rho, v, sigma, m, hbar, mask, r1, dv, dsigma, dj)

    def with_velocity_scaled(self, c: float) -> "HydroFields":
        return replace(self, v=c * self.v, dv=c * self.dv, dj=c * self.dj)

    @property
    def stress_force(self) -> np.ndarray:
        """(1/(m rho)) d sigma on the mask, 0 elsewhere."""
        return np.where(self.mask, self.dsigma / (self.m * np.where(self.mask, self.rho, 1.0)), 0.0)

    @property
    def advection(self) -> np.ndarray:
        return np.where(self.mask, self.v * self.dv, 0.0)


def _stress(rho, r1, r2, r3, mask, m, hbar):
    c = -hbar ** 2 / (4 * m)
    s = np.where(mask, rho, 1.0)
    sigma = np.where(mask, c * (r2 - r1 * r1 / s), 0.0)
    dsigma = np.where(mask, c * (r3 - 2 * r1 * r2 / s + r1 ** 3 / s ** 2), 0.0)
    return sigma, dsigma


def stress_tensor(rho, grid: Grid1D, m: float, hbar: float, method: str = "spectral") -> np.ndarray:
    """sigma = -(hbar^2 rho / 4m) d^2 log rho (1D component), zero on node regions."""
    return HydroFields.from_density(grid, rho, np.zeros(grid.n), m, hbar, method).sigma


def quantum_potential_gradient(psi: WaveFunction, m: float, rho_tol: float = NODE_RHO_TOL):
    """d V_Q with V_Q = -(hbar^2/2m) R''/R, R the real amplitude (phase-free states only)."""
    g = psi.grid
    R = np.abs(psi.amplitudes)
    R1, R2, R3 = (np.real(d) for d in _derivatives(g, R.astype(complex), "spectral"))
    mask = R ** 2 >= rho_tol * (R ** 2).max()
    s = np.where(mask, R, 1.0)
    return np.where(mask, -(psi.hbar ** 2) / (2 * m) * (R3 / s - R2 * R1 / s ** 2), 0.0), mask


def _force(V, grid: Grid1D) -> np.ndarray:
    if V is None:
        return np.zeros(grid.n)
    if callable(V):
        h = 1e-6 * max(1.0, grid.length)
        x = grid.x
        return (np.asarray(V(x + h)) - np.asarray(V(x - h))) / (2 * h)
    return np.asarray(V, dtype=float)


@dataclass(frozen=True, eq=False)
class Residual:
    field: np.ndarray       # (snapshots - 2, n)
    mask: np.ndarray
    norm: float
    reference: float

    @property
    def relative(self) -> float:
        return self.norm / self.reference if self.reference > 0 else math.inf


def _masked_norm(a: np.ndarray, mask: np.ndarray, dx: float) -> float:
    return float(math.sqrt(np.sum(np.where(mask, a, 0.0) ** 2) * dx / a.shape[0]))


def _check(snapshots):
    if len(snapshots) < 3:
        raise InsufficientDataError(f"need >= 3 snapshots for centered differences, got {len(snapshots)}")


def euler_residual(snapshots: Sequence[HydroFields], dt: float, dV=None) -> Residual:
    """d_t v + v dv + (1/m) dV + (1/(m rho)) d sigma at interior snapshots.

    ``dV`` is the external force gradient: a callable V(x) (differenced
    numerically), an array of dV/dx on the grid, or None.
    """
    _check(snapshots)
    g = snapshots[0].grid
    force = _force(dV, g)
    mask = np.logical_and.reduce([s.mask for s in snapshots])
    dtv = np.array([(snapshots[i + 1].v - snapshots[i - 1].v) / (2 * dt)
                    for i in range(1, len(snapshots) - 1)])
    rhs = np.array([s.advection + force / s.m + s.stress_force for s in snapshots[1:-1]])
    r = np.where(mask, dtv + rhs, 0.0)
    return Residual(r, mask, _masked_norm(r, mask, g.spacing), _masked_norm(dtv, mask, g.spacing))


def continuity_residual(snapshots: Sequence[HydroFields], dt: float) -> Residual:
    _check(snapshots)
    g = snapshots[0].grid
    mask = np.logical_and.reduce([s.mask for s in snapshots])
    dtr = np.array([(snapshots[i + 1].rho - snapshots[i - 1].rho) / (2 * dt)
                    for i in range(1, len(snapshots) - 1)])
    r = np.where(mask, dtr + np.array([s.dj for s in snapshots[1:-1]]), 0.0)
    return Residual(r, mask, _masked_norm(r, mask, g.spacing), _masked_norm(dtr, mask, g.spacing))


def total_probability(snapshots: Sequence[HydroFields]) -> np.ndarray:
    return np.array([s.grid.integrate(s.rho) for s in snapshots])


def quantum_reynolds(fields: HydroFields) -> float:
    """||v dv|| / ||(1/(m rho)) d sigma|| over the mask; inf when the stress term vanishes."""
    g = fields.grid
    num = math.sqrt(np.sum(fields.advection ** 2) * g.spacing)
    den = math.sqrt(np.sum(fields.stress_force ** 2) * g.spacing)
    scale = fields.hbar ** 2 / fields.m * (math.pi / g.spacing) ** 3 * math.sqrt(g.length)
    if den <= 1e-12 * scale:
        return math.inf
    return num / den


# -- scaling --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScalingFit:
    l: np.ndarray
    D2: np.ndarray
    exponent: float
    prefactor: float
    residual: float
    stderr: float
    velocity_reference: float = VELOCITY_EXPONENT
    phase_reference: float = PHASE_EXPONENT

    @property
    def fit_value(self) -> np.ndarray:
        return self.prefactor * self.l ** self.exponent

    def rows(self):
        return np.column_stack([self.l, self.D2, self.fit_value])


def _structure(f: np.ndarray, lags: np.ndarray) -> np.ndarray:
    return np.array([np.mean((f[l:] - f[:-l]) ** 2) for l in lags])


def _fit(lags, D):
    A = np.column_stack([np.log(lags), np.ones(len(lags))])
    coef, res, *_ = np.linalg.lstsq(A, np.log(D), rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - np.log(D)) ** 2)))
    return float(coef[0]), float(math.exp(coef[1])), resid


def structure_scaling(f, dx: float = 1.0, lags: Optional[Sequence[int]] = None,
                      n_lags: int = 12, max_lag_fraction: float = 1 / 16,
                      blocks: int = 8) -> ScalingFit:
    """Second-order structure function D(l) = <(f(x+l) - f(x))^2> and its log-log slope.

    The standard error comes from refitting on ``blocks`` contiguous blocks.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or len(f) < 1024:
        raise InsufficientDataError("structure_scaling needs a 1-D field of length >= 1024")
    if lags is None:
        top = max(8, int(len(f) * max_lag_fraction))
        lags = np.unique(np.round(np.geomspace(1, top, n_lags)).astype(int))
    lags = np.asarray(lags, dtype=int)
    if len(lags) < 8:
        raise InsufficientDataError("need at least 8 separations")
    D = _structure(f, lags)
    if not (D > 0).all():
        raise DegenerateFitError("structure function is not positive (constant field?)")
    exponent, pref, resid = _fit(lags, D)
    per_block = []
    size = len(f) // blocks
    for b in range(blocks):
        seg = f[b * size:(b + 1) * size]
        Db = _structure(seg, lags[lags < size // 2])
        if (Db > 0).all() and len(Db) >= 2:
            per_block.append(_fit(lags[lags < size // 2], Db)[0])
    stderr = float(np.std(per_block, ddof=1) / math.sqrt(len(per_block))) if len(per_block) > 1 else math.nan
    return ScalingFit(lags * dx, D, exponent, pref / dx ** exponent, resid, stderr)


def hurst_field(n: int, hurst: float, seed: int) -> np.ndarray:
    """Fractional Brownian path with E[(f(x+l) - f(x))^2] = l^{2H} exactly at every lag.

    Spectral synthesis by circulant embedding: the increment covariance is
    embedded in a circulant of size 2n, whose FFT eigenvalues shape complex
    Gaussian noise; the cumulative sum of the increments is the path.
    """
    if not 0 < hurst < 1:
        raise DomainError("hurst exponent must lie in (0, 1)")
    k = np.arange(n + 1, dtype=float)
    h2 = 2 * hurst
    gamma = 0.5 * (np.abs(k + 1) ** h2 - 2 * k ** h2 + np.abs(k - 1) ** h2)
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    if lam.min() < -1e-10 * lam.max():
        raise DomainError("circulant embedding is not positive semi-definite")
    lam = np.clip(lam, 0, None)
    m = len(row)
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    inc = np.fft.fft(np.sqrt(lam / m) * w)[:n].real
    return np.concatenate([[0.0], np.cumsum(inc)])[:n]
