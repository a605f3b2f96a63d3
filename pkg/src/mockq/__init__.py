"""Mock-quantum dynamics for classical systems.

Madelung decomposition and quantum potentials, mock-Schroedinger propagation,
Bohmian ensembles, Lotka-Volterra dynamics in classical and mock-quantum form,
Langevin/response-field tools, quantum hydrodynamics diagnostics and the
variety functional.
"""

__version__ = "0.1.0"

from .core import (Canonical, FullLV, Grid1D, HamiltonianSpec, HarmonicLV, MadelungFields,
                   MockPlanck, WaveFunction, from_madelung, normalize, to_madelung)
from .errors import MockqError

__all__ = [
    "Canonical", "FullLV", "Grid1D", "HamiltonianSpec", "HarmonicLV", "MadelungFields",
    "MockPlanck", "MockqError", "WaveFunction", "from_madelung", "normalize", "to_madelung",
    "__version__",
]
