"""Chain definition, single-exciton Hamiltonian and initial density matrices.

Site indices are 1-based wherever they cross the public API; arrays are
0-based internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .couplings import Boundary, CouplingModel, NearestNeighbor, PowerLaw, coupling_matrix

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


class PositivityError(ValueError):
    """Initial coherence too large for a positive two-site block."""


class SiteIndexError(IndexError):
    pass


def wrap_phase(theta: float) -> float:
    """Fold an angle into (-pi, pi]; in-range values pass through bit-exact."""
    if -math.pi < theta <= math.pi:
        return theta
    folded = math.pi - math.fmod(math.pi - theta, 2 * math.pi)
    if folded <= -math.pi:
        folded += 2 * math.pi
    elif folded > math.pi:
        folded -= 2 * math.pi
    return folded


def equivalent_phase(theta: float) -> float:
    """Map a phase to the representative in [-pi/2, pi/2] with identical populations.

    Uses theta = pi/2 + d  ->  pi/2 - d (and its mirror for theta < -pi/2).
    Only exact for bipartite (nearest-neighbor) chains, where flipping the
    sign of every other site turns theta into theta + pi.
    """
    theta = wrap_phase(theta)
    if theta > math.pi / 2:
        return math.pi - theta
    if theta < -math.pi / 2:
        return -math.pi - theta
    return theta


@dataclass(frozen=True)
class ChainSpec:
    n_sites: int
    epsilon: float = 0.0
    coupling: CouplingModel = field(default_factory=PowerLaw)
    boundary: Boundary = Boundary.OPEN
    dephasing_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites}")
        if not self.dephasing_rate >= 0:
            raise ValueError(f"dephasing_rate must be >= 0, got {self.dephasing_rate}")
        if self.boundary is Boundary.PERIODIC and not isinstance(self.coupling, NearestNeighbor):
            raise ValueError("periodic boundary is only defined for nearest-neighbor coupling")
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")

    @property
    def default_left_site(self) -> int:
        return self.n_sites // 2

    @property
    def coupling_strength(self) -> float:
        return self.coupling.strength


@dataclass(frozen=True)
class InitialCondition:
    """Two-site block [[rho_l, a e^{-i theta}], [a e^{i theta}, rho_r]].

    ``left_site`` is 1-based; ``None`` selects the chain center N // 2.
    ``theta`` is folded into (-pi, pi] on construction.
    """

    theta: float = 0.0
    a: float = 0.5
    rho_l: float = 0.5
    rho_r: float = 0.5
    left_site: int | None = None

    def __post_init__(self):
        for name in ("rho_l", "rho_r"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if abs(self.rho_l + self.rho_r - 1.0) > 1e-12:
            raise ValueError(f"rho_l + rho_r must equal 1, got {self.rho_l + self.rho_r}")
        if not self.a >= 0:
            raise ValueError(f"coherence magnitude a must be >= 0, got {self.a}")
        bound = math.sqrt(self.rho_l * self.rho_r)
        if self.a > bound + 1e-12:
            raise PositivityError(
                f"a = {self.a} exceeds sqrt(rho_l * rho_r) = {bound}; block is not positive"
            )
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", wrap_phase(self.theta))

    @classmethod
    def pure(cls, theta: float, left_site: int | None = None) -> "InitialCondition":
        """Equal-weight pure superposition (|L> + e^{i theta}|R>)/sqrt(2)."""
        return cls(theta=theta, a=0.5, rho_l=0.5, rho_r=0.5, left_site=left_site)

    @property
    def is_pure(self) -> bool:
        return abs(self.a - math.sqrt(self.rho_l * self.rho_r)) <= 1e-12

    def resolve_left_site(self, n_sites: int) -> int:
        site = n_sites // 2 if self.left_site is None else self.left_site
        if not 1 <= site <= n_sites - 1:
            raise SiteIndexError(f"left_site must be in [1, {n_sites - 1}], got {site}")
        return site


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Real symmetric single-exciton Hamiltonian with diagonal epsilon."""
    H = coupling_matrix(spec.coupling, spec.n_sites, spec.boundary)
    np.fill_diagonal(H, spec.epsilon)
    return H


def build_initial_density(spec: ChainSpec, init: InitialCondition) -> np.ndarray:
    left = init.resolve_left_site(spec.n_sites) - 1
    rho = np.zeros((spec.n_sites, spec.n_sites), dtype=complex)
    coherence = init.a * np.exp(-1j * init.theta)
    rho[left, left] = init.rho_l
    rho[left + 1, left + 1] = init.rho_r
    rho[left, left + 1] = coherence
    rho[left + 1, left] = np.conj(coherence)
    return rho


def pure_state_vector(spec: ChainSpec, init: InitialCondition) -> np.ndarray:
    """State vector sqrt(rho_l)|L> + sqrt(rho_r) e^{i theta}|R> for a pure init."""
    if not init.is_pure:
        raise ValueError("initial condition is mixed; no state vector exists")
    left = init.resolve_left_site(spec.n_sites) - 1
    psi = np.zeros(spec.n_sites, dtype=complex)
    psi[left] = math.sqrt(init.rho_l)
    psi[left + 1] = math.sqrt(init.rho_r) * np.exp(1j * init.theta)
    return psi


@dataclass(frozen=True)
class Violation:
    residual: float

    def __str__(self):
        return f"{type(self).__name__}({self.residual:.3g})"


class HermiticityViolation(Violation):
    pass


class TraceViolation(Violation):
    pass


class NegativePopulationViolation(Violation):
    pass


class ComplexPopulationViolation(Violation):
    pass


def validate_density(rho: np.ndarray) -> list[Violation]:
    """Check Hermiticity, unit trace and real non-negative populations.

    Returns an empty list when every invariant holds; otherwise one entry per
    violated invariant carrying the worst residual.
    """
    rho = np.asarray(rho)
    violations: list[Violation] = []
    herm = float(np.max(np.abs(rho - rho.conj().T))) if rho.size else 0.0
    if herm > HERMITICITY_TOL:
        violations.append(HermiticityViolation(herm))
    diag = np.diagonal(rho)
    trace_err = float(abs(np.sum(diag) - 1.0))
    if trace_err > TRACE_TOL:
        violations.append(TraceViolation(trace_err))
    imag = float(np.max(np.abs(diag.imag))) if diag.size else 0.0
    if imag > HERMITICITY_TOL:
        violations.append(ComplexPopulationViolation(imag))
    lowest = float(np.min(diag.real)) if diag.size else 0.0
    if lowest < -POSITIVITY_TOL:
        violations.append(NegativePopulationViolation(-lowest))
    return violations
