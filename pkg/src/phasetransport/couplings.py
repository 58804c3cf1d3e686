"""Off-diagonal coupling profiles V_nm for the monomer chain."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence, Union

import numpy as np


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class PowerLaw:
    """V_nm = strength / |n - m|**exponent between every pair of sites."""

    strength: float = 1.0
    exponent: float = 3.0

    def __post_init__(self):
        if not self.exponent > 0:
            raise ValueError(f"power-law exponent must be > 0, got {self.exponent}")
        if not math.isfinite(self.strength):
            raise ValueError("coupling strength must be finite")


@dataclass(frozen=True)
class NearestNeighbor:
    strength: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.strength):
            raise ValueError("coupling strength must be finite")


@dataclass(frozen=True)
class Custom:
    """Explicit nearest-neighbor bonds; ``bonds[i]`` couples sites i+1 and i+2 (1-based)."""

    bonds: tuple[float, ...]

    def __post_init__(self):
        bonds = tuple(float(b) for b in self.bonds)
        if not all(math.isfinite(b) for b in bonds):
            raise ValueError("custom bonds must be finite")
        object.__setattr__(self, "bonds", bonds)

    @property
    def strength(self) -> float:
        """Largest bond magnitude, used as the energy scale."""
        return max((abs(b) for b in self.bonds), default=0.0)


CouplingModel = Union[PowerLaw, NearestNeighbor, Custom]


def coupling_matrix(model: CouplingModel, n_sites: int, boundary=Boundary.OPEN) -> np.ndarray:
    """Return the N x N real symmetric coupling matrix with a zero diagonal."""
    boundary = Boundary(boundary)
    if n_sites < 2:
        raise ValueError(f"need at least 2 sites, got {n_sites}")

    V = np.zeros((n_sites, n_sites))
    if isinstance(model, PowerLaw):
        if boundary is Boundary.PERIODIC:
            raise ValueError("periodic boundary requires nearest-neighbor coupling")
        idx = np.arange(n_sites)
        dist = np.abs(idx[:, None] - idx[None, :]).astype(float)
        off = dist > 0
        V[off] = model.strength / dist[off] ** model.exponent
    elif isinstance(model, NearestNeighbor):
        i = np.arange(n_sites - 1)
        V[i, i + 1] = model.strength
        V[i + 1, i] = model.strength
        if boundary is Boundary.PERIODIC:
            V[n_sites - 1, 0] = model.strength
            V[0, n_sites - 1] = model.strength
    elif isinstance(model, Custom):
        if boundary is Boundary.PERIODIC:
            raise ValueError("custom bond profiles support open boundaries only")
        if len(model.bonds) != n_sites - 1:
            raise ValueError(
                f"custom profile has {len(model.bonds)} bonds, expected {n_sites - 1}"
            )
        i = np.arange(n_sites - 1)
        V[i, i + 1] = model.bonds
        V[i + 1, i] = model.bonds
    else:
        raise TypeError(f"unknown coupling model {model!r}")
    return V


def focusing_profile(n_sites: int, peak_strength: float = 1.0, center_bond: float | None = None) -> Custom:
    """Mirror-symmetric bonds that refocus a wave packet at the chain ends.

    Each half of length M = N/2 carries the perfect-state-transfer arch
    sqrt(n (M - n)), n = 1..M-1, rescaled so the largest bond equals
    ``peak_strength``. The two halves are joined by a single center bond.

    Args:
        n_sites: even chain length, at least 4.
        peak_strength: value of the largest bond.
        center_bond: bond between sites M and M+1. Defaults to the arch
            evaluated at the last half-chain index M-1, so the junction is as
            weak as the arch ends. Stronger center bonds spoil the refocusing.

    Returns:
        A ``Custom`` model with N-1 bonds.
    """
    if n_sites < 4 or n_sites % 2:
        raise ValueError(f"focusing profile needs an even chain of >= 4 sites, got {n_sites}")
    half = n_sites // 2
    n = np.arange(1, half)
    arch = np.sqrt(n * (half - n))
    scale = peak_strength / arch.max()
    arch = arch * scale
    if center_bond is None:
        center_bond = arch[-1]
    bonds = np.concatenate([arch, [center_bond], arch])
    return Custom(tuple(bonds.tolist()))


def load_profile(path: str | PathLike) -> Custom:
    """Read a one-column bond file (blank lines and ``#`` comments ignored)."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
    return Custom(tuple(values))


def format_profile(bonds: Sequence[float]) -> str:
    return "".join(f"{b:.15g}\n" for b in bonds)
