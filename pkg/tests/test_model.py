import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phasetransport.couplings import Boundary, Custom, NearestNeighbor, PowerLaw
from phasetransport.model import (
    ChainSpec,
    HermiticityViolation,
    InitialCondition,
    NegativePopulationViolation,
    PositivityError,
    SiteIndexError,
    TraceViolation,
    build_hamiltonian,
    build_initial_density,
    equivalent_phase,
    pure_state_vector,
    validate_density,
    wrap_phase,
)


class TestChainSpec:
    def test_defaults(self):
        spec = ChainSpec(60)
        assert spec.epsilon == 0.0
        assert isinstance(spec.coupling, PowerLaw)
        assert spec.boundary is Boundary.OPEN
        assert spec.default_left_site == 30

    @pytest.mark.parametrize("kwargs", [
        {"n_sites": 1},
        {"n_sites": 4, "dephasing_rate": -0.1},
        {"n_sites": 4, "boundary": "periodic"},
        {"n_sites": 4, "boundary": "periodic", "coupling": Custom((1, 1, 1))},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ChainSpec(**kwargs)

    def test_odd_chain_default_pair(self):
        assert ChainSpec(7).default_left_site == 3


class TestHamiltonian:
    def test_two_sites(self):
        H = build_hamiltonian(ChainSpec(2, coupling=PowerLaw(1.0)))
        np.testing.assert_array_equal(H, [[0, 1], [1, 0]])

    def test_dipole_tail(self):
        H = build_hamiltonian(ChainSpec(3, coupling=PowerLaw(1.0, 3)))
        assert H[0, 2] == 0.125

    def test_periodic_wrap(self):
        H = build_hamiltonian(ChainSpec(4, coupling=NearestNeighbor(1.0), boundary="periodic"))
        assert H[3, 0] == 1.0 and H[0, 3] == 1.0

    @given(n=st.integers(2, 30), eps=st.floats(-5, 5), v=st.floats(-2, 2))
    def test_exactly_symmetric_with_uniform_diagonal(self, n, eps, v):
        H = build_hamiltonian(ChainSpec(n, epsilon=eps, coupling=PowerLaw(v)))
        assert np.array_equal(H, H.T)
        assert np.all(np.diagonal(H) == eps)
        assert np.all(np.diagonal(H, 1) == v)


class TestInitialDensity:
    def test_quarter_turn_block(self):
        rho = build_initial_density(ChainSpec(4), InitialCondition.pure(math.pi / 2))
        block = rho[1:3, 1:3]
        np.testing.assert_allclose(block, [[0.5, -0.5j], [0.5j, 0.5]], atol=1e-16)
        assert np.count_nonzero(rho) == 4

    def test_fully_mixed(self):
        rho = build_initial_density(ChainSpec(4), InitialCondition(theta=1.3, a=0.0))
        np.testing.assert_array_equal(rho[1:3, 1:3], np.diag([0.5, 0.5]))
        assert np.count_nonzero(rho) == 2

    def test_zero_phase_is_symmetric_projector(self):
        spec = ChainSpec(6)
        rho = build_initial_density(spec, InitialCondition.pure(0.0))
        psi = np.zeros(6)
        psi[2] = psi[3] = 1 / math.sqrt(2)
        np.testing.assert_allclose(rho, np.outer(psi, psi), atol=1e-15)

    def test_matches_state_vector(self):
        spec = ChainSpec(10)
        init = InitialCondition(theta=-2.1, a=math.sqrt(0.3 * 0.7), rho_l=0.3, rho_r=0.7, left_site=2)
        psi = pure_state_vector(spec, init)
        np.testing.assert_allclose(build_initial_density(spec, init), np.outer(psi, psi.conj()), atol=1e-15)

    def test_positivity_violation(self):
        with pytest.raises(PositivityError):
            InitialCondition(a=0.6)

    def test_normalization(self):
        with pytest.raises(ValueError):
            InitialCondition(rho_l=0.6, rho_r=0.6, a=0.0)

    @pytest.mark.parametrize("site", [0, 4])
    def test_site_bounds(self, site):
        with pytest.raises(SiteIndexError):
            build_initial_density(ChainSpec(4), InitialCondition(left_site=site))

    def test_mixed_has_no_state_vector(self):
        with pytest.raises(ValueError):
            pure_state_vector(ChainSpec(4), InitialCondition(a=0.2))

    @given(
        rho_l=st.floats(0, 1),
        theta=st.floats(-10, 10),
        n=st.integers(2, 20),
    )
    def test_pure_state_is_rank_one(self, rho_l, theta, n):
        rho_r = 1.0 - rho_l
        init = InitialCondition(theta=theta, a=math.sqrt(rho_l * rho_r), rho_l=rho_l, rho_r=rho_r)
        rho = build_initial_density(ChainSpec(n), init)
        eig = np.linalg.eigvalsh(rho)
        assert abs(eig[-1] - 1.0) <= 1e-12
        assert validate_density(rho) == []


class TestPhases:
    @pytest.mark.parametrize("theta, expected", [
        (0.0, 0.0), (math.pi, math.pi), (-math.pi, math.pi), (3 * math.pi / 2, -math.pi / 2),
        (-3 * math.pi / 2, math.pi / 2), (5 * math.pi, math.pi),
    ])
    def test_wrap(self, theta, expected):
        assert wrap_phase(theta) == pytest.approx(expected, abs=1e-12)

    @given(st.floats(-100, 100))
    def test_wrap_range(self, theta):
        w = wrap_phase(theta)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-9)
        assert math.isclose(math.sin(w), math.sin(theta), abs_tol=1e-9)

    def test_init_folds_theta(self):
        assert InitialCondition(theta=3 * math.pi / 2).theta == pytest.approx(-math.pi / 2)

    def test_equivalent_phase(self):
        assert equivalent_phase(math.pi / 2 + 0.3) == pytest.approx(math.pi / 2 - 0.3)
        assert equivalent_phase(-math.pi / 2 - 0.3) == pytest.approx(-math.pi / 2 + 0.3)
        assert equivalent_phase(0.4) == 0.4


class TestValidateDensity:
    def test_valid(self):
        rho = build_initial_density(ChainSpec(5), InitialCondition.pure(0.3))
        assert validate_density(rho) == []

    def test_trace(self):
        rho = np.diag([1.0, 0.5]).astype(complex)
        assert validate_density(rho) == [TraceViolation(0.5)]

    def test_hermiticity(self):
        rho = np.array([[0.5, 0.2j], [0.2j, 0.5]])
        found = validate_density(rho)
        assert len(found) == 1 and isinstance(found[0], HermiticityViolation)
        assert found[0].residual == pytest.approx(0.4)

    def test_negative_population(self):
        rho = np.diag([1.2, -0.2]).astype(complex)
        assert validate_density(rho) == [NegativePopulationViolation(pytest.approx(0.2))]
