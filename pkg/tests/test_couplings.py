import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phasetransport.couplings import (
    Boundary,
    Custom,
    NearestNeighbor,
    PowerLaw,
    coupling_matrix,
    focusing_profile,
    format_profile,
    load_profile,
)


def pairs(V):
    n = V.shape[0]
    return {(i + 1, j + 1): V[i, j] for i in range(n) for j in range(i + 1, n)}


def test_power_law_three_sites():
    V = coupling_matrix(PowerLaw(1.0, 3.0), 3)
    assert pairs(V) == {(1, 2): 1.0, (2, 3): 1.0, (1, 3): 0.125}


def test_nearest_neighbor_open():
    V = coupling_matrix(NearestNeighbor(1.0), 3, Boundary.OPEN)
    assert pairs(V) == {(1, 2): 1.0, (2, 3): 1.0, (1, 3): 0.0}


def test_nearest_neighbor_periodic_wraps():
    V = coupling_matrix(NearestNeighbor(1.0), 4, "periodic")
    assert V[3, 0] == V[0, 3] == 1.0
    assert np.count_nonzero(V) == 8


def test_custom_direct_placement():
    V = coupling_matrix(Custom((2.0, 1.0)), 3)
    assert pairs(V) == {(1, 2): 2.0, (2, 3): 1.0, (1, 3): 0.0}


@pytest.mark.parametrize(
    "model, boundary",
    [(Custom((1.0, 1.0)), Boundary.PERIODIC), (PowerLaw(), Boundary.PERIODIC)],
)
def test_periodic_needs_nearest_neighbor(model, boundary):
    with pytest.raises(ValueError):
        coupling_matrix(model, 3, boundary)


def test_custom_length_mismatch():
    with pytest.raises(ValueError, match="expected 3"):
        coupling_matrix(Custom((1.0, 1.0)), 4)


def test_invalid_models():
    with pytest.raises(ValueError):
        PowerLaw(1.0, 0.0)
    with pytest.raises(ValueError):
        Custom((1.0, math.nan))
    with pytest.raises(ValueError):
        coupling_matrix(NearestNeighbor(), 1)


@given(
    n=st.integers(2, 40),
    strength=st.floats(-3, 3, allow_nan=False),
    exponent=st.floats(0.5, 6),
)
def test_power_law_symmetric_and_decaying(n, strength, exponent):
    V = coupling_matrix(PowerLaw(strength, exponent), n)
    assert np.array_equal(V, V.T)
    assert np.all(np.diagonal(V) == 0)
    assert np.all(np.diagonal(V, 1) == strength)
    first_row = np.abs(V[0, 1:])
    assert np.all(np.diff(first_row) <= 0)


@pytest.mark.parametrize("n", [4, 8, 60])
def test_focusing_profile_shape(n):
    bonds = np.array(focusing_profile(n, 1.0).bonds)
    assert bonds.size == n - 1
    assert bonds.max() == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_array_equal(bonds, bonds[::-1])


def test_focusing_profile_arches():
    bonds = np.array(focusing_profile(8, 2.0).bonds)
    # half length 4: sqrt(3), 2, sqrt(3) scaled to peak 2, joined by the arch end value
    s3 = math.sqrt(3)
    np.testing.assert_allclose(bonds, [s3, 2, s3, s3, s3, 2, s3], rtol=1e-15)


def test_focusing_profile_center_bond_tunable():
    bonds = focusing_profile(8, 1.0, center_bond=0.25).bonds
    assert bonds[3] == 0.25


@pytest.mark.parametrize("n", [3, 2, 7])
def test_focusing_profile_rejects_bad_length(n):
    with pytest.raises(ValueError):
        focusing_profile(n, 1.0)


def test_profile_file_roundtrip(tmp_path):
    profile = focusing_profile(10, 1.0)
    path = tmp_path / "bonds.txt"
    path.write_text("# engineered\n" + format_profile(profile.bonds) + "\n")
    loaded = load_profile(path)
    np.testing.assert_allclose(loaded.bonds, profile.bonds, rtol=1e-14)
    assert len(loaded.bonds) == 9


def test_profile_file_bad_line(tmp_path):
    path = tmp_path / "bonds.txt"
    path.write_text("1.0\nabc\n")
    with pytest.raises(ValueError, match=":2:"):
        load_profile(path)
