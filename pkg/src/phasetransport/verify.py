"""Brute-force oracles that share no machinery with the RK4 propagator.

Used by the test suite to cross-check :mod:`phasetransport.dynamics` and
:mod:`phasetransport.analytics`.
"""

from __future__ import annotations

import math

import numpy as np


def schrodinger_propagate(H: np.ndarray, psi0: np.ndarray, t):
    """Return exp(-i H t) psi0 via the eigendecomposition of the real symmetric ``H``.

    ``t`` may be a scalar (returns shape (N,)) or a 1-D array of times
    (returns shape (len(t), N)).
    """
    H = np.asarray(H)
    psi0 = np.asarray(psi0, dtype=complex)
    if not np.all(np.isfinite(H)):
        raise np.linalg.LinAlgError("Hamiltonian has non-finite entries")
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"initial state is not normalized (|psi| = {norm})")
    energies, vecs = np.linalg.eigh(H)
    coeffs = vecs.conj().T @ psi0
    t_arr = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t_arr, energies))
    return (phases * coeffs) @ vecs.T


def brute_force_pk(n_sites: int, theta: float) -> np.ndarray:
    """Bloch weights of (|N/2> + e^{i theta}|N/2+1>)/sqrt(2) by explicit projection.

    Weights are ordered like k = 2 pi j / N, j = -N/2 .. N/2 - 1.
    """
    if n_sites % 2:
        raise ValueError("brute-force k-distribution needs an even chain")
    psi = np.zeros(n_sites, dtype=complex)
    psi[n_sites // 2 - 1] = 1 / math.sqrt(2)
    psi[n_sites // 2] = np.exp(1j * theta) / math.sqrt(2)
    weights = np.empty(n_sites)
    sites = np.arange(1, n_sites + 1)
    for idx, j in enumerate(range(-n_sites // 2, n_sites // 2)):
        k = 2 * math.pi * j / n_sites
        phi_k = np.exp(1j * k * sites) / math.sqrt(n_sites)
        weights[idx] = abs(np.vdot(phi_k, psi)) ** 2
    return weights
