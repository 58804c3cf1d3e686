"""Closed-form results for the nearest-neighbor chain.

Bloch spectrum of the periodic chain, the k-space content of the two-site
initial state, its directionality, and the exact first moment M(t) under
pure dephasing.

Every function takes an optional ``coherence`` (the magnitude ``a`` of the
initial two-site coherence); the default 0.5 is the pure equal-weight state.
For general ``a`` the Bloch weights are (1 + 2a cos(k - theta)) / N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ChainSpec, InitialCondition, wrap_phase


@dataclass(frozen=True)
class KSpectrum:
    k_values: np.ndarray
    energies: np.ndarray
    velocities: np.ndarray

    def __len__(self):
        return self.k_values.size


def _require_even(n_sites: int) -> None:
    if n_sites < 2 or n_sites % 2:
        raise ValueError(f"k-space results need an even chain length, got {n_sites}")


def k_grid(n_sites: int) -> np.ndarray:
    """k = 2 pi j / N for j = -N/2 .. N/2 - 1."""
    _require_even(n_sites)
    j = np.arange(-n_sites // 2, n_sites // 2)
    return 2 * np.pi * j / n_sites


def k_spectrum(n_sites: int, epsilon: float = 0.0, v: float = 1.0) -> KSpectrum:
    k = k_grid(n_sites)
    return KSpectrum(k, epsilon + 2 * v * np.cos(k), -2 * v * np.sin(k))


def initial_k_distribution(n_sites: int, theta: float, coherence: float = 0.5) -> np.ndarray:
    k = k_grid(n_sites)
    return (1.0 + 2 * coherence * np.cos(k - theta)) / n_sites


def initial_velocity(theta: float, v: float = 1.0, coherence: float = 0.5) -> float:
    """Initial velocity of the mean, -2 a V sin(theta) (= -V sin(theta) when pure)."""
    return -2 * coherence * v * math.sin(theta)


def p_k_positive(n_sites: int, theta: float, coherence: float = 0.5) -> float:
    """Weight on Bloch states with 0 < k < pi for a finite even chain."""
    if n_sites < 4:
        raise ValueError(f"need an even chain of >= 4 sites, got {n_sites}")
    _require_even(n_sites)
    cot = 1.0 / math.tan(math.pi / n_sites)
    return 0.5 - 1.0 / n_sites + 2 * coherence * cot * math.sin(theta) / n_sites


def p_k_positive_limit(theta: float, coherence: float = 0.5) -> float:
    """N -> infinity limit of :func:`p_k_positive`; the asymptotic left population for V > 0."""
    return 0.5 + 2 * coherence * math.sin(theta) / math.pi


def phi_initial(a: float, theta: float) -> float:
    return -2 * a * math.sin(theta)


def mean_closed_form(m0: float, v: float, phi0: float, gamma: float, t):
    """Exact first moment M(t) of the infinite nearest-neighbor chain.

    Linear drift ``m0 + v*phi0*t`` without dephasing, exponential saturation
    ``m0 + (v/gamma)*phi0*(1 - exp(-gamma t))`` otherwise. ``t`` may be an array.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    if gamma == 0:
        out = m0 + v * phi0 * t_arr
    else:
        out = m0 + (v / gamma) * phi0 * -np.expm1(-gamma * t_arr)
    return float(out) if out.ndim == 0 else out


def long_time_mean(m0: float, v: float, phi0: float, gamma: float) -> float | None:
    """Limit of M(t) for t >> 1/gamma; ``None`` when the mean drifts without bound."""
    if gamma == 0:
        return m0 if v * phi0 == 0 else None
    return m0 + v * phi0 / gamma


def eigenvector_check(n_sites: int, epsilon: float = 0.0, v: float = 1.0, hamiltonian=None) -> float:
    """Max residual ||H phi_k - E_k phi_k||_inf over all plane waves.

    ``hamiltonian`` defaults to the periodic nearest-neighbor chain; pass any
    other matrix (e.g. an open chain) to measure how far plane waves are from
    being its eigenstates.
    """
    spectrum = k_spectrum(n_sites, epsilon, v)
    if hamiltonian is None:
        H = np.diag(np.full(n_sites, float(epsilon)))
        i = np.arange(n_sites)
        H[i, (i + 1) % n_sites] = v
        H[(i + 1) % n_sites, i] = v
    else:
        H = np.asarray(hamiltonian)
    n = np.arange(1, n_sites + 1)
    phis = np.exp(1j * np.outer(n, spectrum.k_values)) / math.sqrt(n_sites)
    residual = H @ phis - phis * spectrum.energies
    return float(np.max(np.abs(residual)))


@dataclass(frozen=True)
class AnalyticReport:
    """Closed-form predictions for one chain + initial condition.

    k-space fields are ``None`` for odd chains.
    """

    n_sites: int
    theta: float
    coherence: float
    v: float
    gamma: float
    m0: float
    phi0: float
    v_initial: float
    p_k: np.ndarray | None
    p_k_positive_finite: float | None
    p_k_positive_limit: float
    long_time_mean: float | None

    def mean_at(self, t):
        return mean_closed_form(self.m0, self.v, self.phi0, self.gamma, t)

    def rows(self) -> list[tuple[str, object]]:
        rows: list[tuple[str, object]] = [
            ("n_sites", self.n_sites),
            ("theta", self.theta),
            ("a", self.coherence),
            ("V", self.v),
            ("gamma", self.gamma),
            ("M0", self.m0),
            ("phi0", self.phi0),
            ("v_initial", self.v_initial),
            ("p_k_positive_limit", self.p_k_positive_limit),
            ("long_time_mean", "unbounded" if self.long_time_mean is None else self.long_time_mean),
        ]
        if self.p_k_positive_finite is not None:
            rows.append(("p_k_positive_finite", self.p_k_positive_finite))
        return rows


def analytic_report(spec: ChainSpec, init: InitialCondition) -> AnalyticReport:
    """Closed-form predictions treating the chain as uniform nearest-neighbor with strength V."""
    n = spec.n_sites
    v = spec.coupling_strength
    theta = wrap_phase(init.theta)
    left = init.resolve_left_site(n)
    m0 = left * init.rho_l + (left + 1) * init.rho_r
    phi0 = phi_initial(init.a, theta)
    even = n % 2 == 0 and n >= 4
    return AnalyticReport(
        n_sites=n,
        theta=theta,
        coherence=init.a,
        v=v,
        gamma=spec.dephasing_rate,
        m0=m0,
        phi0=phi0,
        v_initial=initial_velocity(theta, v, init.a),
        p_k=initial_k_distribution(n, theta, init.a) if even else None,
        p_k_positive_finite=p_k_positive(n, theta, init.a) if even else None,
        p_k_positive_limit=p_k_positive_limit(theta, init.a),
        long_time_mean=long_time_mean(m0, v, phi0, spec.dephasing_rate),
    )
