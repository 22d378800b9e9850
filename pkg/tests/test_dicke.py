import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfscontrol.dicke import (
    DickeKet,
    bloch_angle_grid,
    bloch_overlap_map,
    build_collective_ops,
    ground_state,
    ladder_strengths,
    spin_coherent_state,
)
from dfscontrol.eigenstructure import eigenstate


class TestCollectiveOps:
    def test_single_atom_matrices(self):
        ops = build_collective_ops(1)
        assert np.array_equal(ops.j_plus, [[0.0, 0.0], [1.0, 0.0]])
        assert np.array_equal(ops.j_minus, [[0.0, 1.0], [0.0, 0.0]])
        assert np.array_equal(ops.j_z, np.diag([-0.5, 0.5]))

    def test_two_atom_ladder_elements(self):
        ops = build_collective_ops(2)
        # J = 1 ladder: <m=0|J+|m=-1> = <m=1|J+|m=0> = sqrt(2)
        assert ops.j_plus[1, 0] == pytest.approx(math.sqrt(2.0))
        assert ops.j_plus[2, 1] == pytest.approx(math.sqrt(2.0))

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 20, 40])
    def test_angular_momentum_algebra(self, n):
        ops = build_collective_ops(n)
        assert np.array_equal(ops.j_plus, ops.j_minus.T)
        comm = ops.j_plus @ ops.j_minus - ops.j_minus @ ops.j_plus
        assert np.abs(comm - 2.0 * ops.j_z).max() <= 1e-12
        for jpm, sign in ((ops.j_plus, 1.0), (ops.j_minus, -1.0)):
            comm_z = ops.j_z @ jpm - jpm @ ops.j_z
            assert np.abs(comm_z - sign * jpm).max() <= 1e-12

    def test_jz_diagonal_entries(self):
        ops = build_collective_ops(5)
        assert np.allclose(np.diag(ops.j_z), np.arange(6) - 2.5)

    def test_rejects_zero_atoms(self):
        with pytest.raises(ValueError):
            build_collective_ops(0)

    def test_ladder_strengths_match_matrix(self):
        ops = build_collective_ops(7)
        lad = ladder_strengths(7)
        assert np.allclose(ops.j_minus[np.arange(7), np.arange(1, 8)], lad)


class TestSpinCoherentState:
    def test_north_pole_is_all_up(self):
        ket = spin_coherent_state(4, 0.0, 0.0)
        expected = np.zeros(5)
        expected[-1] = 1.0
        assert np.allclose(ket.amplitudes, expected)

    def test_south_pole_is_all_down(self):
        ket = spin_coherent_state(4, math.pi, 0.0)
        expected = np.zeros(5)
        expected[0] = 1.0
        assert np.allclose(ket.amplitudes, expected)

    def test_equator_binomial_amplitudes(self):
        ket = spin_coherent_state(2, math.pi / 2.0, 0.0)
        assert np.allclose(ket.amplitudes, [0.5, 1.0 / math.sqrt(2.0), 0.5])

    @settings(max_examples=40, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=60),
        theta=st.floats(min_value=0.0, max_value=math.pi),
        phi=st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True),
    )
    def test_normalized_everywhere(self, n, theta, phi):
        ket = spin_coherent_state(n, theta, phi)
        assert abs(ket.norm() - 1.0) <= 1e-12

    def test_rejects_out_of_range_angles(self):
        with pytest.raises(ValueError):
            spin_coherent_state(3, -0.1, 0.0)
        with pytest.raises(ValueError):
            spin_coherent_state(3, 0.3, 2.0 * math.pi)


class TestDickeKet:
    def test_length_validation(self):
        with pytest.raises(ValueError):
            DickeKet(3, np.zeros(3))

    def test_require_normalized(self):
        with pytest.raises(ValueError):
            DickeKet(1, np.array([1.0, 1.0])).require_normalized()


class TestBlochOverlapMap:
    def test_all_up_peaks_at_north_pole(self):
        n = 6
        amps = np.zeros(n + 1, dtype=complex)
        amps[-1] = 1.0
        grid = bloch_overlap_map(DickeKet(n, amps), 25, 24)
        assert grid[0, :] == pytest.approx(1.0)
        assert grid.max() <= 1.0 + 1e-12
        assert grid.min() >= 0.0

    def test_plus_x_eigenstate_peaks_on_equator(self):
        # k = 0 at mu = 1 is the +x coherent state
        state = eigenstate(20, 0, 1.0)
        grid = bloch_overlap_map(state, 41, 40)
        thetas, phis = bloch_angle_grid(41, 40)
        it, ip = np.unravel_index(np.argmax(grid), grid.shape)
        assert thetas[it] == pytest.approx(math.pi / 2.0)
        assert phis[ip] == pytest.approx(0.0)
        assert grid[it, ip] == pytest.approx(1.0, abs=1e-10)

    def test_ring_state_vanishes_at_plus_x(self):
        # k = N/2 at mu = 1 concentrates on the great circle <Jx> = 0
        state = eigenstate(20, 10, 1.0)
        grid = bloch_overlap_map(state, 41, 40)
        thetas, phis = bloch_angle_grid(41, 40)
        at_plus_x = grid[np.argmin(np.abs(thetas - math.pi / 2.0)), 0]
        assert at_plus_x <= 1e-6
        it, ip = np.unravel_index(np.argmax(grid), grid.shape)
        # every maximum sits where sin(theta) cos(phi) ~ 0
        jx_direction = math.sin(thetas[it]) * math.cos(phis[ip])
        assert abs(jx_direction) <= 0.05

    @pytest.mark.parametrize("state_fn", [
        lambda: ground_state(8),
        lambda: spin_coherent_state(8, 1.1, 2.2),
        lambda: eigenstate(8, 4, 1.0),
        lambda: eigenstate(8, 2, 0.5),
    ])
    def test_resolution_of_identity(self, state_fn):
        # integral over the sphere with measure (N+1)/(4 pi) sin(theta) ~ 1
        state = state_fn()
        n = state.n_atoms
        t_steps, p_steps = 201, 64
        grid = bloch_overlap_map(state, t_steps, p_steps)
        thetas, phis = bloch_angle_grid(t_steps, p_steps)
        integrand = grid * np.sin(thetas)[:, None]
        phi_integral = integrand.sum(axis=1) * (2.0 * math.pi / p_steps)
        total = np.trapezoid(phi_integral, thetas) * (n + 1) / (4.0 * math.pi)
        assert total == pytest.approx(1.0, abs=1e-3)

    def test_rejects_unnormalized_state(self):
        with pytest.raises(ValueError):
            bloch_overlap_map(DickeKet(2, np.array([1.0, 1.0, 0.0])), 10, 10)

    def test_rejects_tiny_grids(self):
        with pytest.raises(ValueError):
            bloch_overlap_map(ground_state(2), 1, 10)
