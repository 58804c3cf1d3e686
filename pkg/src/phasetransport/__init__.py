"""Phase-directed single-exciton transport on a dephasing 1D chain."""

from .couplings import (
    Boundary,
    Custom,
    NearestNeighbor,
    PowerLaw,
    coupling_matrix,
    focusing_profile,
)
from .model import (
    ChainSpec,
    InitialCondition,
    build_hamiltonian,
    build_initial_density,
    validate_density,
)
from .dynamics import PropagationConfig, Trajectory, propagate

__all__ = [
    "Boundary",
    "ChainSpec",
    "Custom",
    "InitialCondition",
    "NearestNeighbor",
    "PowerLaw",
    "PropagationConfig",
    "Trajectory",
    "build_hamiltonian",
    "build_initial_density",
    "coupling_matrix",
    "focusing_profile",
    "propagate",
    "validate_density",
]

__version__ = "0.1.0"
