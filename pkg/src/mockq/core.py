"""Grids, wavefunctions, Madelung fields and Hamiltonian specifications.

All grids are periodic: ``x_j = x_min + j * spacing`` for ``j < n`` and the
point ``x_max`` is identified with ``x_min``. Derivatives are taken
spectrally, which is why ``n`` must be a power of two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np

from .errors import DegenerateStateError, DomainError

# |psi| below this fraction of max|psi| leaves the phase undefined.
PHASE_NODE_TOL = 1e-12


@dataclass(frozen=True)
class MockPlanck:
    """Emergent action unit playing the role of hbar."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= 0:
            raise DomainError(f"mock Planck constant must be positive and finite, got {self.value!r}")
        object.__setattr__(self, "value", v)

    def __float__(self):
        return self.value


HbarLike = Union[MockPlanck, float, int]


def as_hbar(hbar: HbarLike) -> float:
    return MockPlanck(float(hbar)).value


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or self.x_min >= self.x_max:
            raise DomainError(f"grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n) != self.n or self.n < 8 or not _is_power_of_two(int(self.n)):
            raise DomainError(f"grid point count must be a power of two >= 8, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @classmethod
    def centered(cls, half_width: float, n: int) -> "Grid1D":
        return cls(-half_width, half_width, n)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + self.spacing * np.arange(self.n)
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        k = 2 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)
        k.flags.writeable = False
        return k

    def derivative(self, f, order: int = 1) -> np.ndarray:
        """Spectral derivative of periodic samples; real input gives real output."""
        f = np.asarray(f)
        fk = np.fft.fft(f) * (1j * self.k) ** order
        if order % 2 == 1:
            # the Nyquist mode has no odd derivative on a periodic grid
            fk[self.n // 2] = 0.0
        out = np.fft.ifft(fk)
        return out.real if np.isrealobj(f) else out

    def apply_multiplier(self, f, multiplier) -> np.ndarray:
        """Apply a Fourier multiplier sampled at ``self.k``."""
        return np.fft.ifft(np.asarray(multiplier) * np.fft.fft(np.asarray(f)))

    def integrate(self, f) -> float:
        """Periodic (rectangle = trapezoid) quadrature."""
        return np.sum(f) * self.spacing

    def refine(self, factor: int) -> "Grid1D":
        return Grid1D(self.x_min, self.x_max, self.n * factor)


def fourier_interpolate(grid: Grid1D, f, factor: int):
    """Band-limited interpolation onto a grid ``factor`` times finer."""
    fine = grid.refine(factor)
    fk = np.fft.fft(np.asarray(f, dtype=complex))
    n, m = grid.n, fine.n
    padded = np.zeros(m, dtype=complex)
    half = n // 2
    padded[:half] = fk[:half]
    padded[-half + 1:] = fk[-half + 1:]
    # split the Nyquist coefficient symmetrically
    padded[half] = 0.5 * fk[half]
    padded[-half] = 0.5 * fk[half]
    return fine, np.fft.ifft(padded) * (m / n)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: Grid1D
    amplitudes: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n,):
            raise DomainError(f"amplitudes must have length {self.grid.n}, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise DomainError("wavefunction amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "hbar", as_hbar(self.hbar))

    @property
    def psi(self) -> np.ndarray:
        return self.amplitudes

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return math.sqrt(self.grid.integrate(self.density()))

    def replace(self, amplitudes) -> "WaveFunction":
        return WaveFunction(self.grid, amplitudes, self.hbar)

    def inner(self, other: "WaveFunction") -> complex:
        return complex(self.grid.integrate(np.conj(self.amplitudes) * other.amplitudes))

    def expectation_x(self) -> float:
        return float(self.grid.integrate(self.x * self.density()) / self.norm() ** 2)

    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        return self.replace(self.amplitudes + other.amplitudes)

    def __mul__(self, c) -> "WaveFunction":
        return self.replace(self.amplitudes * c)

    __rmul__ = __mul__


def normalize(psi: WaveFunction) -> WaveFunction:
    norm = psi.norm()
    if norm == 0 or not math.isfinite(norm):
        raise DegenerateStateError("cannot normalize a zero-norm wavefunction")
    return psi.replace(psi.amplitudes / norm)


@dataclass(frozen=True, eq=False)
class MadelungFields:
    """Polar fields (rho, S, v) of a wavefunction.

    ``v`` is a velocity when ``mass`` is set and the momentum field ``dS/dx``
    otherwise. ``undefined`` flags nodes where the phase was interpolated.
    """

    grid: Grid1D
    rho: np.ndarray
    S: np.ndarray
    v: np.ndarray
    mass: Optional[float] = None
    undefined: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.undefined is None:
            object.__setattr__(self, "undefined", np.zeros(self.grid.n, dtype=bool))


def _unwrap_from_middle(phase: np.ndarray) -> np.ndarray:
    mid = len(phase) // 2
    out = np.empty_like(phase)
    out[mid:] = np.unwrap(phase[mid:])
    out[: mid + 1] = np.unwrap(phase[mid::-1])[::-1]
    return out


def probability_current(psi: WaveFunction, mass: float = 1.0) -> np.ndarray:
    """j = hbar Im(psi* dpsi/dx) / m; smooth everywhere, no division."""
    dpsi = psi.grid.derivative(psi.amplitudes)
    return psi.hbar * np.imag(np.conj(psi.amplitudes) * dpsi) / mass


def to_madelung(psi: WaveFunction, mass: Optional[float] = None) -> MadelungFields:
    amps = psi.amplitudes
    mod = np.abs(amps)
    peak = mod.max()
    if peak == 0:
        raise DegenerateStateError("all-zero wavefunction has no polar decomposition")
    rho = mod ** 2
    defined = mod >= PHASE_NODE_TOL * peak
    phase = np.zeros(psi.grid.n)
    idx = np.flatnonzero(defined)
    unwrapped = _unwrap_from_middle(np.angle(amps[idx]))
    phase[idx] = unwrapped
    if not defined.all():
        bad = np.flatnonzero(~defined)
        phase[bad] = np.interp(bad, idx, unwrapped)
    S = psi.hbar * phase

    m = 1.0 if mass is None else float(mass)
    if m <= 0:
        raise DomainError("mass must be positive")
    # v from the current rather than dS/dx avoids unwrap artifacts
    current = probability_current(psi, m)
    v = np.zeros(psi.grid.n)
    np.divide(current, rho, out=v, where=defined)
    return MadelungFields(psi.grid, rho, S, v, mass, ~defined)


def from_madelung(fields: MadelungFields, hbar: HbarLike) -> WaveFunction:
    rho = np.asarray(fields.rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("density must be nonnegative")
    h = as_hbar(hbar)
    return WaveFunction(fields.grid, np.sqrt(rho) * np.exp(1j * np.asarray(fields.S) / h), h)


# -- Hamiltonians ----------------------------------------------------------

class HamiltonianSpec:
    """H = K(P) + V(Q) with a Fourier-multiplier kinetic term."""

    name = "hamiltonian"
    hermitian = True

    def kinetic(self, p):
        raise NotImplementedError

    def potential(self, grid: Grid1D) -> np.ndarray:
        raise NotImplementedError

    def kinetic_multiplier(self, grid: Grid1D, hbar: HbarLike) -> np.ndarray:
        return self.kinetic(as_hbar(hbar) * grid.k)

    def params(self) -> dict:
        return {}


class Canonical(HamiltonianSpec):
    """K = P^2/2m with potential samples (array or callable of Q)."""

    name = "canonical"

    def __init__(self, mass: float, potential: Union[np.ndarray, Callable, None] = None):
        if not mass > 0:
            raise DomainError(f"Canonical spec needs mass > 0, got {mass}")
        self.mass = float(mass)
        self._potential = potential

    def kinetic(self, p):
        return np.asarray(p) ** 2 / (2 * self.mass)

    def potential(self, grid: Grid1D) -> np.ndarray:
        V = self._potential
        if V is None:
            return np.zeros(grid.n)
        if callable(V):
            return np.asarray(V(grid.x), dtype=float) * np.ones(grid.n)
        V = np.asarray(V, dtype=float)
        if V.shape != (grid.n,):
            raise DomainError(f"potential samples must have length {grid.n}")
        return V

    def params(self):
        return {"mass": self.mass}

    @classmethod
    def harmonic(cls, mass: float = 1.0, omega: float = 1.0) -> "Canonical":
        return cls(mass, lambda q: 0.5 * mass * omega ** 2 * q ** 2)


class HarmonicLV(HamiltonianSpec):
    """Quadratic expansion (a+d) + (a Q^2 + d P^2)/2 of the LV Hamiltonian."""

    name = "harmonic_lv"

    def __init__(self, a: float, d: float):
        if not (a > 0 and d > 0):
            raise DomainError(f"HarmonicLV needs a > 0 and d > 0, got a={a}, d={d}")
        self.a, self.d = float(a), float(d)

    @property
    def omega(self) -> float:
        return math.sqrt(self.a * self.d)

    @property
    def mass(self) -> float:
        return 1.0 / self.d

    def kinetic(self, p):
        return 0.5 * self.d * np.asarray(p) ** 2

    def potential(self, grid: Grid1D) -> np.ndarray:
        return (self.a + self.d) + 0.5 * self.a * grid.x ** 2

    def exact_level(self, n: int, hbar: HbarLike) -> float:
        return (self.a + self.d) + as_hbar(hbar) * self.omega * (n + 0.5)

    def ground_width(self, hbar: HbarLike) -> float:
        return math.sqrt(as_hbar(hbar) / (self.mass * self.omega))

    def params(self):
        return {"a": self.a, "d": self.d}


class FullLV(HamiltonianSpec):
    """a(e^Q - Q) + d(e^P - P); d = -a is allowed."""

    name = "full_lv"

    def __init__(self, a: float, d: float):
        if not (math.isfinite(a) and math.isfinite(d)):
            raise DomainError("FullLV rates must be finite")
        self.a, self.d = float(a), float(d)

    def kinetic(self, p):
        p = np.asarray(p)
        return self.d * (np.exp(p) - p)

    def potential(self, grid: Grid1D) -> np.ndarray:
        q = grid.x
        return self.a * (np.exp(q) - q)

    def params(self):
        return {"a": self.a, "d": self.d}


def mass_of(spec: HamiltonianSpec) -> float:
    """Effective mass of a quadratic kinetic term."""
    if isinstance(spec, (Canonical, HarmonicLV)):
        return spec.mass
    raise DomainError(f"{spec.name} has no quadratic kinetic term")
