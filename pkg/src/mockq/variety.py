"""Distinctiveness, variety and its continuum (Fisher information) limit."""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from .bohm import NODE_RHO_TOL
from .core import Grid1D
from .errors import DomainError, ReliabilityWarning

MASK_WARN_FRACTION = 0.10


@dataclass(frozen=True, eq=False)
class RelationalSystem:
    views: np.ndarray   # (N, k)

    def __post_init__(self):
        v = np.asarray(self.views, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 2:
            raise DomainError("a relational system needs at least 2 elements with vector views")
        if not np.isfinite(v).all():
            raise DomainError("views must be finite")
        object.__setattr__(self, "views", v)

    def __len__(self):
        return self.views.shape[0]


def distinctiveness(sys: RelationalSystem, i: int, j: int) -> float:
    n = len(sys)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"element index out of range for N={n}")
    if i == j:
        raise DomainError("distinctiveness needs two different elements")
    d = sys.views[i] - sys.views[j]
    return float(d @ d)


def discrete_variety(sys: RelationalSystem) -> float:
    """(1/N(N-1)) sum_{i != j} |V_i - V_j|^2."""
    n = len(sys)
    return float(2 * pdist(sys.views, "sqeuclidean").sum() / (n * (n - 1)))


def _amplitude_slope(rho: np.ndarray, grid: Grid1D) -> np.ndarray:
    """R' with R = sqrt(rho); rho'^2/rho = 4 R'^2 avoids dividing by small rho."""
    return grid.derivative(np.sqrt(rho), 1).real


def _support_mask(rho: np.ndarray, rho_tol: float):
    valid = rho >= rho_tol * rho.max()
    idx = np.flatnonzero(valid)
    hull = np.zeros_like(valid)
    hull[idx[0]:idx[-1] + 1] = True
    return valid, hull


def continuum_variety(rho, grid: Grid1D, rho_tol: float = NODE_RHO_TOL) -> float:
    """integral of rho (rho'/rho)^2 over the node mask (the Fisher information)."""
    rho = np.asarray(rho, dtype=float)
    if (rho < 0).any() or rho.max() <= 0:
        raise DomainError("density must be non-negative and not identically zero")
    valid, hull = _support_mask(rho, rho_tol)
    frac = 1 - valid[hull].mean()
    if frac > MASK_WARN_FRACTION:
        warnings.warn(f"{frac:.1%} of the support is node-masked; variety may be unreliable",
                      ReliabilityWarning, stacklevel=2)
    s = _amplitude_slope(rho, grid)
    return float(grid.integrate(np.where(valid, 4 * s * s, 0.0)))


@dataclass(frozen=True)
class IdentityReport:
    potential_energy: float    # integral rho V_Q
    variety_term: float        # (hbar^2/8m) * continuum variety
    boundary: float
    residual: float
    applicable: bool


def _decays_or_periodic(rho: np.ndarray, tol: float = 1e-8) -> bool:
    peak = rho.max()
    if max(rho[0], rho[-1]) < tol * peak:
        return True
    spec = np.abs(np.fft.rfft(np.sqrt(rho)))
    return bool(spec[3 * len(spec) // 4:].max() <= 1e-10 * spec.max())


def variety_fisher_identity(rho, grid: Grid1D, m: float = 1.0, hbar: float = 1.0) -> IdentityReport:
    """Check integral rho V_Q = (hbar^2/8m) * variety + boundary terms.

    rho V_Q = -(hbar^2/2m) R R'' needs no division, so the left side is a
    plain quadrature; the right side is the masked Fisher integral. On a
    periodic grid the boundary term vanishes when rho decays (or is smooth
    and periodic); otherwise the report is flagged not applicable.
    """
    rho = np.asarray(rho, dtype=float)
    R = np.sqrt(rho)
    R2 = grid.derivative(R, 2).real
    c = hbar ** 2 / (2 * m)
    lhs = float(grid.integrate(-c * R * R2))
    rhs = hbar ** 2 / (8 * m) * continuum_variety(rho, grid)
    applicable = _decays_or_periodic(rho)
    boundary = 0.0 if applicable else math.nan
    return IdentityReport(lhs, rhs, boundary, abs(lhs - rhs), applicable)


# -- views from samples --------------------------------------------------------------

def nearest_neighbor_bandwidth(samples: np.ndarray, k: Optional[int] = None) -> np.ndarray:
    """Per-sample bandwidth: distance to the k-th neighbour (k ~ N^0.7), i.e. ~ k/(N rho)."""
    x = np.asarray(samples, dtype=float).reshape(-1, 1)
    k = k or max(2, int(round(len(x) ** 0.7)))
    dist, _ = cKDTree(x).query(x, k=k + 1)
    h = dist[:, -1]
    if not (h > 0).all():
        raise DomainError("duplicate samples give a zero bandwidth")
    return h


def density_contrast_views(samples: np.ndarray, k: Optional[int] = None) -> RelationalSystem:
    """View of sample i = kernel-estimated score d log rho at x_i, leave-one-out.

    The Gaussian kernel at sample i uses the nearest-neighbour bandwidth h_i.
    """
    x = np.asarray(samples, dtype=float)
    h = nearest_neighbor_bandwidth(x, k)
    diff = x[None, :] - x[:, None]               # x_j - x_i
    w = np.exp(-0.5 * (diff / h[:, None]) ** 2)
    np.fill_diagonal(w, 0.0)
    score = (w * diff).sum(axis=1) / (h ** 2 * w.sum(axis=1))
    return RelationalSystem(score[:, None])
