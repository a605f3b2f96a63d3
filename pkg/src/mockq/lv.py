"""Two-species Lotka-Volterra dynamics, classical and mock-quantum.

Populations obey N1' = a N1 - b N1 N2, N2' = c N1 N2 - d N2. In the canonical
variables Q = log(N2/q2), P = log(N1/q1) the flow is Hamiltonian with
H = a(e^Q - Q) + d(e^P - P).
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.linalg import expm

from .bohm import quantum_potential_canonical
from .core import Grid1D, HarmonicLV, HbarLike, as_hbar
from .errors import BlowUpError, DomainError, SaturationWarning, WindowError
from .spectral import hermite_eigenstate

SATURATION_EXP = 700.0


@dataclass(frozen=True)
class LVParams:
    a: float
    b: float = 1.0
    c: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be > 0, got {v}")

    @property
    def q1(self) -> float:
        return self.d / self.c

    @property
    def q2(self) -> float:
        return self.a / self.b

    @property
    def omega(self) -> float:
        return math.sqrt(self.a * self.d)


@dataclass(frozen=True)
class LVState:
    """Population pair; the canonical view is derived."""
    N1: float
    N2: float

    def __post_init__(self):
        if not (self.N1 > 0 and self.N2 > 0):
            raise DomainError(f"populations must be positive, got ({self.N1}, {self.N2})")

    def to_canonical(self, params: LVParams):
        return math.log(self.N2 / params.q2), math.log(self.N1 / params.q1)

    @classmethod
    def from_canonical(cls, Q: float, P: float, params: LVParams) -> "LVState":
        return cls(params.q1 * math.exp(P), params.q2 * math.exp(Q))


def lv_rhs(params: LVParams, y: np.ndarray) -> np.ndarray:
    n1, n2 = y
    return np.array([params.a * n1 - params.b * n1 * n2, params.c * n1 * n2 - params.d * n2])


def lv_hamiltonian(Q, P, a: float, d: float):
    return a * (np.exp(Q) - Q) + d * (np.exp(P) - P)


@dataclass(eq=False)
class LVTrajectory:
    params: LVParams
    t: np.ndarray
    N1: np.ndarray
    N2: np.ndarray

    @property
    def Q(self) -> np.ndarray:
        return np.log(self.N2 / self.params.q2)

    @property
    def P(self) -> np.ndarray:
        return np.log(self.N1 / self.params.q1)

    @property
    def H(self) -> np.ndarray:
        return lv_hamiltonian(self.Q, self.P, self.params.a, self.params.d)

    def energy_drift(self) -> float:
        H = self.H
        return float(np.abs(H - H[0]).max() / abs(H[0]))

    def z_form_residual(self) -> float:
        """max |z1' - a(1 - e^{z2})| with z1' taken from the population vector field."""
        p = self.params
        dn1 = p.a * self.N1 - p.b * self.N1 * self.N2
        z1dot = dn1 / self.N1
        return float(np.abs(z1dot - p.a * (1 - np.exp(self.Q))).max())

    def rows(self):
        return np.column_stack([self.t, self.N1, self.N2, self.Q, self.P, self.H])


def lv_integrate(params: LVParams, state0: LVState, t_end: float, dt: float,
                 stride: int = 1) -> LVTrajectory:
    """Fixed-step RK4 on the population equations."""
    if dt <= 0 or t_end < 0:
        raise DomainError("dt must be > 0 and t_end >= 0")
    if dt * max(params.a, params.d) >= 0.01:
        raise DomainError(f"dt*max(a,d) = {dt * max(params.a, params.d):.3g} must be < 0.01")
    steps = int(round(t_end / dt))
    y = np.array([state0.N1, state0.N2], dtype=float)
    a, b, c, d = params.a, params.b, params.c, params.d
    out = np.empty((steps // stride + 1, 2))
    out[0] = y
    n1, n2 = y
    h2, h6 = dt / 2, dt / 6
    # scalar arithmetic: two-component arrays are slower than plain floats here
    for j in range(1, steps + 1):
        k1a = a * n1 - b * n1 * n2; k1b = c * n1 * n2 - d * n2
        x1, x2 = n1 + h2 * k1a, n2 + h2 * k1b
        k2a = a * x1 - b * x1 * x2; k2b = c * x1 * x2 - d * x2
        x1, x2 = n1 + h2 * k2a, n2 + h2 * k2b
        k3a = a * x1 - b * x1 * x2; k3b = c * x1 * x2 - d * x2
        x1, x2 = n1 + dt * k3a, n2 + dt * k3b
        k4a = a * x1 - b * x1 * x2; k4b = c * x1 * x2 - d * x2
        n1 = n1 + h6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        n2 = n2 + h6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        if not (n1 > 0 and n2 > 0):
            raise BlowUpError(f"nonpositive population at step {j}", step=j)
        if j % stride == 0:
            out[j // stride] = n1, n2
    t = np.arange(out.shape[0]) * dt * stride
    return LVTrajectory(params, t, out[:, 0], out[:, 1])


def oscillation_frequency(t: np.ndarray, x: np.ndarray) -> float:
    """Angular frequency from upward zero crossings of x - mean(x), cubic-refined."""
    y = x - 0.5 * (x.max() + x.min())
    idx = np.nonzero((y[:-1] < 0) & (y[1:] >= 0))[0]
    idx = idx[(idx >= 1) & (idx + 2 < len(y))]
    if len(idx) < 2:
        raise DomainError("fewer than two crossings; run longer")
    crossings = []
    for i in idx:
        coef = np.polyfit(t[i - 1:i + 3] - t[i], y[i - 1:i + 3], 3)
        roots = np.roots(coef)
        roots = roots[np.isreal(roots)].real
        roots = roots[(roots >= -1e-12) & (roots <= t[i + 1] - t[i] + 1e-12)]
        crossings.append(t[i] + (roots[0] if len(roots) else 0.0))
    crossings = np.asarray(crossings)
    period = (crossings[-1] - crossings[0]) / (len(crossings) - 1)
    return 2 * math.pi / period


# -- quadratic mock flow -----------------------------------------------------------

@dataclass(eq=False)
class LinearFlow:
    t: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    kappa: float
    d: float
    mode: str

    @property
    def invariant(self) -> np.ndarray:
        return 0.5 * (self.kappa * self.Q ** 2 + self.d * self.P ** 2)

    @property
    def frequency_squared(self) -> float:
        return self.d * self.kappa

    def rows(self):
        return np.column_stack([self.t, self.Q, self.P, self.invariant])


def ground_vq_curvature(a: float, d: float, hbar: HbarLike, n: int = 256) -> float:
    """Quadratic coefficient c2 of the numerically computed ground-state V_Q(Q) ~ c0 + c2 Q^2."""
    spec = HarmonicLV(a, d)
    w = spec.ground_width(hbar)
    grid = Grid1D.centered(12 * w, n)
    psi = hermite_eigenstate(0, spec.mass, spec.omega, hbar, grid)
    vq = quantum_potential_canonical(psi, spec.mass)
    core = np.abs(grid.x) <= 3 * w
    return float(np.polyfit(grid.x[core], vq.values[core], 2)[0])


def mock_quadratic_flow(a: float, d: float, hbar: HbarLike, state0, t_end: float, dt: float,
                        mode: str = "consistent") -> LinearFlow:
    """Q' = d P, P' = -kappa Q integrated exactly by the matrix exponential.

    ``literal``: kappa = a - sqrt(ad)/2, the stated closed-form coefficient.
    ``consistent`` (default): kappa = a + 2 c2 with c2 from the numeric ground-state V_Q,
    i.e. the force -d(H2 + V_Q)/dQ; this cancels to ~0.
    """
    if a <= 0 or d <= 0:
        raise DomainError("a and d must be > 0")
    if mode == "literal":
        kappa = a - 0.5 * math.sqrt(a * d)
    elif mode == "consistent":
        kappa = a + 2 * ground_vq_curvature(a, d, hbar)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    M = np.array([[0.0, d], [-kappa, 0.0]])
    steps = int(round(t_end / dt))
    t = np.arange(steps + 1) * dt
    s0 = np.asarray(state0, dtype=float)
    traj = np.array([expm(M * tj) @ s0 for tj in t])
    return LinearFlow(t, traj[:, 0], traj[:, 1], kappa, d, mode)


# -- exact full-LV vacuum family -------------------------------------------------

@dataclass(frozen=True)
class FullLVVacuum:
    """psi_n(Q) = exp f(Q), f = (i/2hbar)[Q + h + i hbar/2]^2 + i phi, h = 2 n pi i, d = -a."""
    n: int
    a: float
    hbar: float
    phi: float = 0.0
    d: Optional[float] = None

    def __post_init__(self):
        if self.d is None:
            object.__setattr__(self, "d", -self.a)
        if self.d != -self.a:
            raise DomainError(f"the exact vacuum family requires d = -a (got a={self.a}, d={self.d})")
        object.__setattr__(self, "hbar", as_hbar(self.hbar))

    @property
    def h(self) -> complex:
        return 2j * math.pi * self.n

    @property
    def energy(self) -> complex:
        return 1j * self.a * (0.5 * self.hbar + 2 * math.pi * self.n)

    @property
    def sigma(self) -> complex:
        return np.sqrt(1j * self.hbar)

    @property
    def q0(self) -> complex:
        return -(self.h + 0.5j * self.hbar)

    def f(self, Q):
        u = np.asarray(Q, dtype=complex) + self.h + 0.5j * self.hbar
        return 0.5j / self.hbar * u * u + 1j * self.phi

    def df(self, Q):
        return 1j / self.hbar * (np.asarray(Q, dtype=complex) + self.h + 0.5j * self.hbar)

    def residuals(self, Q) -> dict:
        Q = np.asarray(Q, dtype=complex)
        func = self.f(Q - 1j * self.hbar) - Q - self.f(Q) - self.h
        diff = 1j * self.hbar * self.d * self.df(Q) - self.a * Q - self.energy
        cons = self.a + self.d * np.exp(self.h)
        return {"functional": float(np.abs(func).max()),
                "differential": float(np.abs(diff).max()),
                "consistency": float(abs(cons))}


def full_lv_vacuum_eval(vac: FullLVVacuum, Q):
    """exp f(Q), unnormalized; points with Re f > 700 are saturated (flagged, set to inf)."""
    f = vac.f(Q)
    sat = f.real > SATURATION_EXP
    if sat.any():
        warnings.warn(f"{int(sat.sum())} points saturate exp(Re f > {SATURATION_EXP:g})",
                      SaturationWarning, stacklevel=2)
    out = np.exp(np.where(sat, 0, f))
    out[sat] = np.inf
    return out, sat


def complex_disk_samples(count: int, radius: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    return r * np.exp(2j * math.pi * rng.random(count))


def full_lv_spectrum(n_range: Sequence[int], a: float, hbar: HbarLike) -> np.ndarray:
    h = as_hbar(hbar)
    return np.array([1j * a * (0.5 * h + 2 * math.pi * n) for n in n_range])


class VQConstants(NamedTuple):
    quadratic: float
    lv_exact: complex           # closed form -a e^{i hbar/2} + i a E_n
    lv_exact_operator: complex  # d[e^P - P]|psi|/|psi| evaluated directly


def full_lv_vq_constants(n: int, a: float, d: float, hbar: HbarLike) -> VQConstants:
    h = as_hbar(hbar)
    if d == 0:
        return VQConstants(0.0, 0j, 0j)
    if not math.isclose(d, -a, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(f"exact family requires d = -a (got a={a}, d={d})")
    s = 4 * n * math.pi + h
    quad = -0.125 * d * s * s
    E = 1j * a * (0.5 * h + 2 * math.pi * n)
    literal = -a * np.exp(0.5j * h) + 1j * a * E
    operator = 0.5 * d * (2 * np.exp(0.5j * h) - 1j * s)
    return VQConstants(quad, complex(literal), complex(operator))


@dataclass(frozen=True)
class VQConstancyReport:
    window: float
    quadratic_values: np.ndarray
    lv_values: np.ndarray
    quadratic_spread: float
    lv_spread: float
    quadratic_error: float
    lv_operator_error: float

    def ok(self, tol: float = 1e-4) -> bool:
        return max(self.quadratic_spread, self.lv_spread, self.quadratic_error,
                   self.lv_operator_error) < tol


def verify_vq_constants(n: int, a: float, hbar: HbarLike, window: Optional[float] = None,
                        degree: int = 8, points: int = 33) -> VQConstancyReport:
    """Apply both kinetic operators to |psi_n| numerically and test constancy.

    g = log|psi_n| is sampled from the evaluated vacuum on a window where
    |psi_n| is representable and fitted by a Chebyshev series. Then
    R''/R = g'' + g'^2 and e^P R / R = exp(g(Q - i hbar) - g(Q)), P = -i hbar d/dQ,
    using analytic continuation of the (smooth, slowly varying) log-amplitude.
    """
    h = as_hbar(hbar)
    d = -a
    vac = FullLVVacuum(n, a, h)
    kappa = 0.5 + 2 * math.pi * n / h
    if window is None:
        window = min(2.0, 0.5 * SATURATION_EXP / abs(kappa)) if kappa != 0 else 2.0
    if not window > 0:
        raise WindowError(f"no representable window for n={n}, hbar={h}")
    nodes = C.chebpts2(degree + 1) * window
    psi, sat = full_lv_vacuum_eval(vac, nodes)
    amp = np.abs(psi)
    if sat.any() or not (amp > 0).all():
        raise WindowError(f"|psi_{n}| not representable on |Q| <= {window:g}")
    coef = C.chebfit(nodes / window, np.log(amp), degree)
    q = np.linspace(-0.5 * window, 0.5 * window, points)
    g = C.chebval(q / window, coef)
    g1 = C.chebval(q / window, C.chebder(coef, 1)) / window
    g2 = C.chebval(q / window, C.chebder(coef, 2)) / window ** 2
    shifted = np.exp(C.chebval((q - 1j * h) / window, coef) - g)
    quad = -0.5 * d * h * h * (g2 + g1 * g1)
    lv = d * (shifted - (-1j * h) * g1)
    consts = full_lv_vq_constants(n, a, d, h)
    return VQConstancyReport(
        window, quad, lv,
        float(np.ptp(quad)), float(np.abs(lv - lv.mean()).max()),
        float(np.abs(quad - consts.quadratic).max()),
        float(np.abs(lv - consts.lv_exact_operator).max()),
    )
