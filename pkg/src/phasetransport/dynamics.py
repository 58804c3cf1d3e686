"""Fixed-step RK4 integration of the pure-dephasing master equation.

    d rho_nm / dt = -i [H, rho]_nm - gamma (1 - delta_nm) rho_nm      (hbar = 1)

plus the transport observables extracted along the trajectory.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .model import ChainSpec, InitialCondition, build_hamiltonian, build_initial_density

log = logging.getLogger(__name__)

STABILITY_LIMIT = 0.1


class ConfigurationError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass


@dataclass(frozen=True)
class PropagationConfig:
    t_max: float = 12.0
    dt: float = 0.005
    output_stride: int = 10

    def __post_init__(self):
        if not self.t_max >= 0 or not math.isfinite(self.t_max):
            raise ConfigurationError(f"t_max must be finite and >= 0, got {self.t_max}")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be > 0, got {self.dt}")
        if int(self.output_stride) != self.output_stride or self.output_stride < 1:
            raise ConfigurationError(f"output_stride must be a positive integer, got {self.output_stride}")

    @property
    def n_steps(self) -> int:
        # dt is shrunk, never stretched, so t_max lands exactly on the grid
        return math.ceil(self.t_max / self.dt - 1e-9)

    @property
    def step(self) -> float:
        return self.t_max / self.n_steps if self.n_steps else self.dt


def check_stability(cfg: PropagationConfig, H: np.ndarray, gamma: float) -> None:
    h_norm = float(np.max(np.sum(np.abs(H), axis=1)))
    scale = max(h_norm, gamma)
    if cfg.step * scale > STABILITY_LIMIT:
        raise ConfigurationError(
            f"dt * max(||H||_inf, gamma) = {cfg.step * scale:.3g} exceeds {STABILITY_LIMIT}; "
            f"use dt <= {STABILITY_LIMIT / scale:.3g}"
        )


@dataclass
class Trajectory:
    """Observables sampled on the output grid.

    ``populations`` has shape (n_times, N); ``states`` holds the full density
    matrices only when requested from :func:`propagate_density`.
    """

    times: np.ndarray
    populations: np.ndarray
    mean: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    phi: np.ndarray
    split_after: int
    max_trace_error: float = 0.0
    max_hermiticity_error: float = 0.0
    states: np.ndarray | None = None

    @property
    def n_sites(self) -> int:
        return self.populations.shape[1]

    def final(self) -> dict[str, float]:
        return {
            "t": float(self.times[-1]),
            "M": float(self.mean[-1]),
            "P_L": float(self.p_left[-1]),
            "P_R": float(self.p_right[-1]),
            "phi": float(self.phi[-1]),
        }


def master_rhs(rho: np.ndarray, H: np.ndarray, gamma: float) -> np.ndarray:
    if rho.shape != H.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"shape mismatch: rho {rho.shape}, H {H.shape}")
    drho = -1j * (H @ rho - rho @ H)
    if gamma:
        diag = np.diagonal(rho).copy()
        drho -= gamma * rho
        drho[np.diag_indices_from(drho)] += gamma * diag
    return drho


def _hermitian_rhs(H: np.ndarray, gamma: float):
    """Fast right-hand side valid for Hermitian rho and real symmetric H."""
    n = H.shape[0]
    damping = gamma * (1.0 - np.eye(n)) if gamma else None
    if np.count_nonzero(H - np.diag(np.diagonal(H))) <= 4 * n:
        H = sparse.csr_array(H)

    def rhs(rho, _H=None, _gamma=None):
        # [H, rho] = A - A^dagger with A = H rho; viewing complex rho as
        # interleaved reals makes H rho a single real GEMM.
        rho = np.ascontiguousarray(rho)
        A = (H @ rho.view(np.float64).reshape(n, 2 * n)).view(np.complex128)
        drho = A.conj().T - A
        drho *= 1j
        if damping is not None:
            drho -= damping * rho
        return drho

    return rhs


def rk4_step(rho: np.ndarray, H: np.ndarray, gamma: float, dt: float, rhs=master_rhs) -> np.ndarray:
    k1 = rhs(rho, H, gamma)
    k2 = rhs(rho + 0.5 * dt * k1, H, gamma)
    k3 = rhs(rho + 0.5 * dt * k2, H, gamma)
    k4 = rhs(rho + dt * k3, H, gamma)
    # k1 + 2 k2 + 2 k3 + k4 accumulated in place
    k2 += k3
    k2 *= 2
    k2 += k1
    k2 += k4
    k2 *= dt / 6.0
    return rho + k2


def mean_position(populations) -> float:
    """Population-weighted mean site index (1-based)."""
    p = np.asarray(populations, dtype=float)
    total = p.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"populations sum to {total}, not 1")
    return float(np.dot(np.arange(1, p.size + 1), p))


def side_populations(populations, split_after: int | None = None) -> tuple[float, float]:
    """Population on sites 1..split_after and on the remaining sites."""
    p = np.asarray(populations, dtype=float)
    if split_after is None:
        split_after = p.size // 2
    if not 1 <= split_after < p.size:
        raise ValueError(f"split_after must be in [1, {p.size - 1}], got {split_after}")
    left = float(p[:split_after].sum())
    return left, float(p[split_after:].sum())


def phi_observable(rho: np.ndarray) -> float:
    """i * sum_n (rho[n+1, n] - rho[n, n+1]) over open-chain bonds n = 1..N-1."""
    lower = np.diagonal(rho, -1)
    upper = np.diagonal(rho, 1)
    return float((1j * np.sum(lower - upper)).real)


def _observables(rho: np.ndarray, split_after: int):
    pops = np.diagonal(rho).real.copy()
    n = np.arange(1, pops.size + 1)
    return (
        pops,
        float(n @ pops),
        float(pops[:split_after].sum()),
        float(pops[split_after:].sum()),
        phi_observable(rho),
    )


def propagate_density(
    H: np.ndarray,
    rho0: np.ndarray,
    gamma: float,
    cfg: PropagationConfig,
    split_after: int | None = None,
    keep_states: bool = False,
) -> Trajectory:
    """Integrate an arbitrary initial density matrix under ``H`` and ``gamma``."""
    H = np.asarray(H, dtype=float)
    rho = np.array(rho0, dtype=complex)
    n = H.shape[0]
    if rho.shape != H.shape:
        raise ValueError(f"shape mismatch: rho {rho.shape}, H {H.shape}")
    if gamma < 0:
        raise ConfigurationError("gamma must be >= 0")
    if split_after is None:
        split_after = n // 2
    if not 1 <= split_after < n:
        raise ConfigurationError(f"split_after must be in [1, {n - 1}], got {split_after}")
    check_stability(cfg, H, gamma)
    rho = 0.5 * (rho + rho.conj().T)
    rhs = _hermitian_rhs(H, gamma)

    n_steps, dt = cfg.n_steps, cfg.step
    out_steps = list(range(0, n_steps + 1, cfg.output_stride))
    if out_steps[-1] != n_steps:
        out_steps.append(n_steps)
    n_out = len(out_steps)

    times = np.array([s * dt for s in out_steps])
    pops = np.empty((n_out, n))
    mean = np.empty(n_out)
    p_left = np.empty(n_out)
    p_right = np.empty(n_out)
    phi = np.empty(n_out)
    states = np.empty((n_out, n, n), dtype=complex) if keep_states else None
    trace_err = abs(np.trace(rho).real - 1.0)
    herm_err = 0.0

    def record(slot: int):
        nonlocal herm_err
        pops[slot], mean[slot], p_left[slot], p_right[slot], phi[slot] = _observables(rho, split_after)
        herm_err = max(herm_err, float(np.max(np.abs(rho - rho.conj().T))))
        if states is not None:
            states[slot] = rho

    slot = 0
    record(slot)
    slot += 1
    for step in range(1, n_steps + 1):
        rho = rk4_step(rho, H, gamma, dt, rhs)
        rho = 0.5 * (rho + rho.conj().T)
        trace_err = max(trace_err, abs(np.trace(rho).real - 1.0))
        if step == out_steps[slot]:
            if not np.all(np.isfinite(rho)):
                raise NumericalError(f"non-finite density matrix at t = {step * dt:.6g}")
            record(slot)
            slot += 1

    log.debug("propagated N=%d over %d steps (dt=%g), trace drift %.2e", n, n_steps, dt, trace_err)
    return Trajectory(
        times=times,
        populations=pops,
        mean=mean,
        p_left=p_left,
        p_right=p_right,
        phi=phi,
        split_after=split_after,
        max_trace_error=trace_err,
        max_hermiticity_error=herm_err,
        states=states,
    )


def propagate(
    spec: ChainSpec,
    init: InitialCondition,
    cfg: PropagationConfig = PropagationConfig(),
    split_after: int | None = None,
    keep_states: bool = False,
) -> Trajectory:
    """Propagate the two-site initial condition on the chain described by ``spec``."""
    H = build_hamiltonian(spec)
    rho0 = build_initial_density(spec, init)
    return propagate_density(H, rho0, spec.dephasing_rate, cfg, split_after, keep_states)
