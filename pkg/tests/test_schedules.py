import math

import numpy as np
import pytest

from dfscontrol.dicke import ground_state
from dfscontrol.eigenstructure import eigenstate
from dfscontrol.lindblad import DensityMatrix, fidelity
from dfscontrol.schedules import (
    chi_of,
    linear_schedule,
    optimize_q,
    piecewise_schedule,
    quench_initial_fidelity,
    quench_schedule,
)


class TestLinearSchedule:
    def test_endpoints_and_midpoint(self):
        s = linear_schedule(40.0, 10, 0)
        assert s.mu(0.0) == 0.0
        assert s.mu(40.0) == 1.0
        assert s.mu(20.0) == pytest.approx(0.5)
        assert s.beta == pytest.approx(1.0 / 40.0)

    def test_final_value_exact(self):
        for t_f in (7.0, 40.0, 1.0 / 3.0):
            assert linear_schedule(t_f, 4, 0).mu(t_f) == 1.0

    def test_slope(self):
        s = linear_schedule(80.0, 10, 0)
        assert s.mu_dot(10.0) == pytest.approx(1.0 / 80.0)
        assert s.mu_dot(-1.0) == 0.0

    def test_drive_off_before_start(self):
        s = linear_schedule(10.0, 4, 1)
        assert s.mu(-0.5) == 0.0
        assert chi_of(s, -0.5) == 0.0

    def test_horizon_validation(self):
        with pytest.raises(ValueError):
            linear_schedule(0.0, 4, 0)


class TestQuenchSchedule:
    def test_paper_style_points(self):
        s = quench_schedule(40.0, 16, 0, 4.0)
        assert s.mu(0.0) == pytest.approx(0.75)
        assert s.mu_dot(1.0) == pytest.approx(0.00625)
        assert s.mu(40.0) == 1.0

    def test_sqrt_n_choice(self):
        s = quench_schedule(40.0, 10, 0, math.sqrt(10.0))
        assert s.mu(0.0) == pytest.approx(1.0 - 1.0 / math.sqrt(10.0))

    def test_half_manifold_choice(self):
        s = quench_schedule(40.0, 20, 10, 2.0)
        assert s.mu(0.0) == pytest.approx(0.9)
        assert all(chi_of(s, t) == 0.0 for t in (0.0, 17.2, 40.0))

    def test_discontinuity_only_at_zero(self):
        s = quench_schedule(40.0, 10, 0, 2.0)
        assert s.mu(-1e-9) == 0.0
        assert s.mu(0.0) == pytest.approx(0.8)
        # continuous on (0, t_f]
        for t in (1e-9, 1.0, 39.0):
            assert s.mu(t + 1e-9) - s.mu(t) <= 1e-9

    def test_q_range_validation(self):
        with pytest.raises(ValueError):
            quench_schedule(40.0, 10, 0, 10.0)  # C = 0
        with pytest.raises(ValueError):
            quench_schedule(40.0, 10, 0, 0.0)
        with pytest.raises(ValueError):
            quench_schedule(40.0, 10, 0, 12.0)


class TestPiecewiseSchedule:
    def test_interpolates(self):
        s = piecewise_schedule(4, 0, [(0.0, 0.0), (1.0, 0.8), (5.0, 1.0)])
        assert s.t_f == 5.0
        assert s.mu(0.5) == pytest.approx(0.4)
        assert s.mu(3.0) == pytest.approx(0.9)
        assert s.mu(7.0) == 1.0
        assert s.mu_dot(0.5) == pytest.approx(0.8)
        assert s.mu_dot(3.0) == pytest.approx(0.05)

    def test_monotonicity_enforced(self):
        with pytest.raises(ValueError):
            piecewise_schedule(4, 0, [(0.0, 0.5), (1.0, 0.2)])
        with pytest.raises(ValueError):
            piecewise_schedule(4, 0, [(1.0, 0.1), (0.5, 0.2)])
        with pytest.raises(ValueError):
            piecewise_schedule(4, 0, [(0.0, 0.1)])


class TestChiOf:
    def test_tracks_dark_condition(self):
        s = linear_schedule(40.0, 4, 0)
        assert chi_of(s, 20.0) == pytest.approx(-2.0)  # mu = 0.5, N - 2k = 4
        s_half = linear_schedule(40.0, 8, 4)
        assert chi_of(s_half, 13.0) == 0.0


class TestQuenchInitialFidelity:
    def test_single_atom_closed_form(self):
        # C = 0.5; |<psi_0(0)|psi_0(0.5)>|^2 = 1/(1 + C^2)
        assert quench_initial_fidelity(1, 0, 0.5) == pytest.approx(0.8, rel=1e-12)

    def test_ground_overlap_limit_small_quench(self):
        # q -> 0 means no quench: overlap of the ground state with psi_k(C->1)
        # approaches N!/(2^N (N-k)! k!)
        n, k = 6, 2
        expected = math.factorial(n) / (
            2.0**n * math.factorial(n - k) * math.factorial(k)
        )
        got = quench_initial_fidelity(n, k, 1e-9)
        assert got == pytest.approx(expected, rel=1e-6)

    def test_matches_vector_overlap(self):
        # oracle: direct overlap of the constructed kets
        for n, k, q in ((2, 0, 1.0), (5, 2, 2.5), (9, 9, 4.0)):
            c = 1.0 - q / n
            direct = abs(np.vdot(ground_state(n).amplitudes,
                                 eigenstate(n, k, c).amplitudes)) ** 2
            assert quench_initial_fidelity(n, k, q) == pytest.approx(direct, rel=1e-12)

    def test_two_atom_frozen_value(self):
        # brute force: psi_0(0.5) amplitudes prop. to (sqrt(2), 1, sqrt(2)/4)
        assert quench_initial_fidelity(2, 0, 1.0) == pytest.approx(0.64, rel=1e-12)

    def test_matches_engine_fidelity(self):
        for n, k, q in ((3, 1, 1.0), (8, 4, 2.0)):
            c = 1.0 - q / n
            rho0 = DensityMatrix.ground(n)
            assert quench_initial_fidelity(n, k, q) == pytest.approx(
                fidelity(rho0, eigenstate(n, k, c)), rel=1e-10
            )

    def test_range_validation(self):
        with pytest.raises(ValueError):
            quench_initial_fidelity(4, 0, 4.0)


class TestOptimizeQ:
    def test_singleton_grid_passthrough(self):
        result = optimize_q(6, 0, 4.0, [1.5], lambda s: 0.5)
        assert result.q_best == 1.5
        assert result.points[0].final_fidelity == 0.5

    def test_argmax_and_tie_breaking(self):
        # plateau at the top: ties resolve toward smaller q
        table = {1.0: 0.8, 2.0: 0.95, 3.0: 0.95, 4.0: 0.90}
        result = optimize_q(6, 0, 4.0, list(table), lambda s: table[round(s.q, 6)])
        assert result.q_best == 2.0

    def test_failed_points_are_marked(self):
        def runner(schedule):
            if schedule.q > 2.5:
                raise RuntimeError("boom")
            return schedule.q / 10.0

        result = optimize_q(6, 0, 4.0, [1.0, 2.0, 3.0], runner)
        assert result.q_best == 2.0
        failed = [p for p in result.points if p.error]
        assert len(failed) == 1 and failed[0].q == 3.0
        assert "boom" in failed[0].error

    def test_all_failed_raises(self):
        def runner(schedule):
            raise RuntimeError("nope")

        with pytest.raises(RuntimeError):
            optimize_q(6, 0, 4.0, [1.0, 2.0], runner)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            optimize_q(6, 0, 4.0, [], lambda s: 1.0)
        with pytest.raises(ValueError):
            optimize_q(6, 0, 4.0, [7.0], lambda s: 1.0)

    def test_deterministic_order(self):
        result = optimize_q(6, 0, 4.0, [3.0, 1.0, 2.0], lambda s: s.q)
        assert [p.q for p in result.points] == [1.0, 2.0, 3.0]
