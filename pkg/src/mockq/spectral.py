"""Discretized Hamiltonians, stationary spectra, Hermite states, Moyal products
and an imaginary-time ground-energy estimate."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import comb, factorial
from typing import List, Optional

import numpy as np
import scipy.linalg

from .core import FullLV, Grid1D, HamiltonianSpec, HbarLike, WaveFunction, as_hbar, normalize
from .errors import ConvergenceError, DomainError, MultiplierOverflowError, SlowConvergenceWarning, TruncationError

# e^{hbar k} must stay representable; beyond this the periodic truncation is meaningless
MAX_HBAR_K = 30.0
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    matrix: np.ndarray
    hermitian: bool
    grid: Grid1D
    hbar: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_error(self) -> float:
        M = self.matrix
        return float(np.abs(M - M.conj().T).max() / max(np.abs(M).max(), 1e-300))

    def apply(self, psi) -> np.ndarray:
        return self.matrix @ np.asarray(psi)


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: List[WaveFunction]
    residuals: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def energies(self) -> np.ndarray:
        return self.eigenvalues.real

    def rows(self) -> np.ndarray:
        """Columns n, re_E, im_E, residual."""
        E = np.asarray(self.eigenvalues, dtype=complex)
        return np.column_stack([np.arange(len(E)), E.real, E.imag, self.residuals])


def circulant_from_multiplier(multiplier: np.ndarray) -> np.ndarray:
    """Dense matrix of a Fourier multiplier: T[j, l] = c[(j - l) mod n]."""
    c = np.fft.ifft(multiplier)
    n = len(c)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return c[idx]


def kinetic_multiplier(spec: HamiltonianSpec, grid: Grid1D, hbar: HbarLike) -> np.ndarray:
    h = as_hbar(hbar)
    if isinstance(spec, FullLV):
        top = h * np.abs(grid.k).max()
        if top > MAX_HBAR_K:
            raise MultiplierOverflowError(
                f"hbar*k_max = {top:.3g} exceeds {MAX_HBAR_K}; widen the grid spacing "
                "(shrink n or enlarge the domain) so e^(hbar k) stays representable"
            )
    return spec.kinetic_multiplier(grid, h)


def discretize(spec: HamiltonianSpec, grid: Grid1D, hbar: HbarLike) -> OperatorMatrix:
    h = as_hbar(hbar)
    mult = kinetic_multiplier(spec, grid, h)
    M = circulant_from_multiplier(mult) + np.diag(spec.potential(grid))
    scale = np.abs(M).max()
    if np.abs(M.imag).max() <= 1e-14 * scale:
        M = M.real.copy()
    herm = bool(np.abs(M - M.conj().T).max() < 1e-10 * scale)
    return OperatorMatrix(M, herm, grid, h)


def eigensolve(op: OperatorMatrix, k: int) -> Spectrum:
    n = op.n
    if k < 1 or k > n // 4:
        raise DomainError(f"requested {k} eigenpairs; at most n/4 = {n // 4} are trustworthy")
    M = op.matrix
    if op.hermitian:
        vals, vecs = scipy.linalg.eigh(M, subset_by_index=[0, k - 1])
        vals = vals.astype(complex)
    else:
        vals, vecs = scipy.linalg.eig(M)
        order = np.lexsort((vals.imag, vals.real))[:k]
        vals, vecs = vals[order], vecs[:, order]
        vecs = vecs / np.linalg.norm(vecs, axis=0)
    residuals = np.linalg.norm(M @ vecs - vecs * vals, axis=0)
    if np.any(residuals > RESIDUAL_TOL * max(1.0, np.abs(vals).max())):
        raise ConvergenceError(f"eigensolver residuals too large: max {residuals.max():.3e}")
    dx = op.grid.spacing
    states = []
    for j in range(k):
        v = vecs[:, j]
        # fix the global phase so the largest component is real positive
        i = np.argmax(np.abs(v))
        v = v * (np.abs(v[i]) / v[i])
        states.append(WaveFunction(op.grid, v / math.sqrt(dx), op.hbar))
    return Spectrum(vals, states, residuals)


def hermite_functions(nmax: int, y: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_nmax in y by three-term recurrence."""
    out = np.empty((nmax + 1, len(y)))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * y ** 2)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for j in range(2, nmax + 1):
        out[j] = math.sqrt(2.0 / j) * y * out[j - 1] - math.sqrt((j - 1) / j) * out[j - 2]
    return out


def hermite_eigenstate(n: int, m: float, omega: float, hbar: HbarLike, grid: Grid1D,
                       center: float = 0.0) -> WaveFunction:
    """Normalized oscillator eigenstate n for H = p^2/2m + m omega^2 x^2/2."""
    if not 0 <= n <= 20:
        raise DomainError(f"Hermite index must be in [0, 20], got {n}")
    h = as_hbar(hbar)
    scale = math.sqrt(m * omega / h)
    y = (grid.x - center) * scale
    psi = hermite_functions(n, y)[n] * math.sqrt(scale)
    peak = np.abs(psi).max()
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge > 1e-8 * peak:
        raise TruncationError(f"state {n} not contained in grid: edge amplitude {edge / peak:.2e} of peak")
    return WaveFunction(grid, psi.astype(complex), h)


def hermite_polynomial_superposition(indices, m: float, omega: float, hbar: HbarLike,
                                     grid: Grid1D) -> WaveFunction:
    """Normalized sum of H_n(y) exp(-y^2/2) with physicists' polynomials H_n.

    Unlike a sum of orthonormal eigenfunctions, each term keeps the polynomial
    weight 2^n n!-scaling, e.g. H_0 + H_3 = 1 - 12y + 8y^3 has three real nodes.
    """
    h = as_hbar(hbar)
    y = grid.x * math.sqrt(m * omega / h)
    coeffs = np.zeros(max(indices) + 1)
    for n in indices:
        coeffs[n] += 1.0
    psi = np.polynomial.hermite.hermval(y, coeffs) * np.exp(-0.5 * y ** 2)
    return normalize(WaveFunction(grid, psi.astype(complex), h))


# -- Moyal product ----------------------------------------------------------

def _fd_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order finite difference, exact on polynomials of degree <= 4."""
    f = np.moveaxis(np.asarray(f), axis, 0)
    if f.shape[0] < 5:
        raise DomainError("finite-difference Moyal derivatives need >= 5 points per axis")
    out = np.empty_like(f)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return np.moveaxis(out, 0, axis)


def _spectral_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    n = f.shape[axis]
    k = 2 * np.pi * np.fft.fftfreq(n, d=h)
    k[n // 2] = 0.0
    shape = [1] * f.ndim
    shape[axis] = n
    return np.fft.ifft(np.fft.fft(f, axis=axis) * (1j * k).reshape(shape), axis=axis)


class _DerivativeTable:
    def __init__(self, f, dq, dp, method):
        self.f = np.asarray(f, dtype=complex)
        self.dq, self.dp = dq, dp
        if method == "spectral":
            self._d = _spectral_derivative
        elif method == "fd":
            self._d = _fd_derivative
        else:
            raise DomainError(f"unknown derivative method {method!r}")
        self._cache = {(0, 0): self.f}

    def __call__(self, iq: int, ip: int) -> np.ndarray:
        key = (iq, ip)
        if key not in self._cache:
            if iq > 0:
                self._cache[key] = self._d(self(iq - 1, ip), self.dq, 0)
            else:
                self._cache[key] = self._d(self(iq, ip - 1), self.dp, 1)
        return self._cache[key]


def moyal_terms(a, b, hbar: float, dq: float, dp: float, order: int = 4, method: str = "spectral"):
    """Order-by-order terms of a*b; term n carries (i hbar/2)^n / n!."""
    A = _DerivativeTable(a, dq, dp, method)
    B = _DerivativeTable(b, dq, dp, method)
    terms = []
    for n in range(order + 1):
        coeff = (0.5j * hbar) ** n / factorial(n)
        acc = np.zeros(A.f.shape, dtype=complex)
        if coeff != 0 or n == 0:
            for k in range(n + 1):
                acc += comb(n, k) * (-1) ** k * A(n - k, k) * B(k, n - k)
        terms.append(coeff * acc)
    return terms


def moyal_star(a, b, hbar: HbarLike, dq: float, dp: float, order: int = 4,
               method: str = "spectral", check: bool = True) -> np.ndarray:
    """Moyal product of phase-space samples ``a[q, p]`` and ``b[q, p]``.

    The bidifferential exponential is truncated after ``order`` (default
    hbar^4). ``method="spectral"`` assumes periodic samples; ``"fd"`` uses
    fourth-order differences and is exact for polynomials up to degree 4.
    """
    h = float(hbar)
    if h < 0:
        raise DomainError("hbar must be nonnegative")
    terms = moyal_terms(a, b, h, dq, dp, order, method)
    if check and order >= 2:
        sizes = [np.abs(t).max() for t in terms]
        floor = 1e-12 * max(sizes[0], 1e-300)
        earlier = max(sizes[1:-1]) if order > 1 else 0.0
        if sizes[-1] > floor and sizes[-1] > earlier:
            raise TruncationError(
                f"Moyal series not converging: order-{order} term {sizes[-1]:.3e} exceeds earlier terms"
            )
    return np.sum(terms, axis=0)


def moyal_bracket(a, b, hbar: HbarLike, dq: float, dp: float, order: int = 4,
                  method: str = "spectral") -> np.ndarray:
    return moyal_star(a, b, hbar, dq, dp, order, method) - moyal_star(b, a, hbar, dq, dp, order, method)


# -- imaginary time -----------------------------------------------------------

def imaginary_time_ground_energy(spec: HamiltonianSpec, grid: Grid1D, hbar: HbarLike,
                                 beta: float, steps: int, seed: int = 0) -> float:
    """Ground energy from the decay rate of ||exp(-tau H) psi|| for a random start.

    Strang splitting with step beta/steps; the rate is read off the last step.
    """
    h = as_hbar(hbar)
    if beta <= 0 or steps < 1:
        raise DomainError("beta and steps must be positive")
    dtau = beta / steps
    V = spec.potential(grid)
    K = kinetic_multiplier(spec, grid, h).real
    # shift keeps exponents bounded; added back to the rate
    shift = V.min() + K.min()
    half_v = np.exp(-0.5 * dtau * (V - V.min()))
    kin = np.exp(-dtau * (K - K.min()))
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(grid.n) + 0.1
    psi /= np.linalg.norm(psi)
    rates = np.empty(steps)
    for j in range(steps):
        psi = half_v * psi
        psi = np.fft.ifft(kin * np.fft.fft(psi)).real
        psi = half_v * psi
        nrm = np.linalg.norm(psi)
        rates[j] = -math.log(nrm) / dtau
        psi /= nrm
    energy = rates[-1] + shift
    early = rates[int(0.75 * (steps - 1))] + shift
    if abs(energy - early) > 1e-6 * max(1.0, abs(energy)):
        warnings.warn(
            f"imaginary-time rate still drifting ({abs(energy - early):.2e}); the spectral gap "
            "may be too small for beta", SlowConvergenceWarning, stacklevel=2)
    return float(energy)
