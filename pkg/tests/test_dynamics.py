import math

import numpy as np
import pytest

import nmotto as nm
from nmotto.dynamics import _propagate_guarded, _solve_full
from nmotto.errors import PositivityError

from conftest import CUTOFF, LAMBDA, OMEGA_H


class TestPropagate:
    def test_zero_time_returns_initial(self, hot_grid):
        trace = nm.propagate(0.42, hot_grid, 0.0)
        assert trace.rho00.shape == (1,)
        assert trace.rho00[0] == 0.42
        assert trace.value_at_t == 0.42

    def test_decoupled_bath_is_constant(self):
        grid = nm.build_kernel_grid(nm.BathSpec("hot", 0.0, CUTOFF, 1.0), OMEGA_H, 30.0)
        trace = nm.propagate(0.3, grid, 30.0)
        assert np.array_equal(trace.rho00, np.full(grid.n_points, 0.3))

    def test_long_time_thermalization(self, hot_bath):
        rate = nm.markov_rate(hot_bath, OMEGA_H)
        grid = nm.build_kernel_grid(hot_bath, OMEGA_H, 9.0 / rate)
        n = nm.bose_occupation(OMEGA_H, hot_bath.temperature)
        stationary = (1.0 + n) / (1.0 + 2.0 * n)
        for initial in (1.0, 0.0):
            final = nm.propagate(initial, grid, grid.t_max).value_at_t
            assert final == pytest.approx(stationary, abs=1e-3)

    def test_trace_in_unit_interval(self, hot_grid):
        trace = nm.propagate(1.0, hot_grid, 100.0)
        assert trace.rho00.min() >= -1e-9
        assert trace.rho00.max() <= 1.0 + 1e-9

    def test_affinity_in_initial_value(self, hot_grid):
        mu = 0.37
        mixed = nm.propagate(mu, hot_grid, 80.0).rho00
        pure = mu * nm.propagate(1.0, hot_grid, 80.0).rho00 \
            + (1.0 - mu) * nm.propagate(0.0, hot_grid, 80.0).rho00
        assert np.max(np.abs(mixed - pure)) < 1e-10

    def test_off_node_time_is_linear_interpolation(self, hot_grid):
        h = hot_grid.step
        t = 10.0 * h + 0.3 * h
        full = nm.propagate(0.8, hot_grid, 30.0)
        expected = 0.7 * full.rho00[10] + 0.3 * full.rho00[11]
        assert nm.propagate(0.8, hot_grid, t).value_at_t == pytest.approx(expected, abs=1e-15)

    def test_bad_inputs_rejected(self, hot_grid):
        with pytest.raises(ValueError):
            nm.propagate(1.2, hot_grid, 1.0)
        with pytest.raises(ValueError):
            nm.propagate(0.5, hot_grid, -1.0)
        with pytest.raises(ValueError):
            nm.propagate(0.5, hot_grid, hot_grid.t_max + 1.0)

    def test_positivity_violation_raises(self):
        # a deliberately coarse grid at strong coupling breaks the quadrature
        bath = nm.BathSpec("hot", 5.0, CUTOFF, 0.1)
        grid = nm.build_kernel_grid(bath, OMEGA_H, 30.0, step=0.8)
        with pytest.raises(PositivityError):
            nm.propagate(1.0, grid, 30.0)

    def test_grid_convergence_of_final_population(self, hot_bath):
        g1 = nm.build_kernel_grid(hot_bath, OMEGA_H, 60.0, 0.05)
        g2 = nm.build_kernel_grid(hot_bath, OMEGA_H, 60.0, 0.025)
        d = abs(nm.propagate(1.0, g1, 60.0).value_at_t - nm.propagate(1.0, g2, 60.0).value_at_t)
        assert d < 1e-7

    def test_markov_rate_crosscheck(self, hot_bath):
        # instantaneous decay of the deviation from the stationary value
        rate = nm.markov_rate(hot_bath, OMEGA_H)
        grid = nm.build_kernel_grid(hot_bath, OMEGA_H, 70.0)
        from_ground, _ = nm.transition_traces(grid)
        n = nm.bose_occupation(OMEGA_H, hot_bath.temperature)
        stationary = (1.0 + n) / (1.0 + 2.0 * n)
        i1, i2 = int(30.0 / grid.step), int(60.0 / grid.step)
        dev1 = from_ground[i1] - stationary
        dev2 = from_ground[i2] - stationary
        estimated = -(math.log(abs(dev2)) - math.log(abs(dev1))) / (grid.tau[i2] - grid.tau[i1])
        assert estimated == pytest.approx(rate, rel=0.02)


class TestTransitionPopulations:
    def test_zero_time(self, hot_grid):
        assert nm.transition_populations(hot_grid, 0.0) == (1.0, 0.0)

    def test_outputs_in_unit_interval(self, hot_grid):
        for t in (0.5, 5.0, 50.0, 120.0):
            r0, r1 = nm.transition_populations(hot_grid, t)
            assert 0.0 <= r0 <= 1.0
            assert 0.0 <= r1 <= 1.0

    def test_difference_equals_exp_big_a(self, hot_grid):
        # subtracting the two solutions cancels the inhomogeneous term
        from_ground, from_excited = nm.transition_traces(hot_grid)
        residual = np.abs((from_ground - from_excited) - np.exp(hot_grid.A))
        assert residual.max() < 1e-10

    def test_traces_cached_per_grid(self, hot_grid):
        a = nm.transition_traces(hot_grid)
        b = nm.transition_traces(hot_grid)
        assert a[0] is b[0] and a[1] is b[1]


class TestGuardedPropagation:
    def test_matches_plain_form_on_mild_grids(self, hot_grid):
        plain = _solve_full(hot_grid, 0.7)
        guarded = _propagate_guarded(hot_grid.b, hot_grid.A, hot_grid.step, 0.7)
        assert np.max(np.abs(plain - guarded)) < 1e-12

    def test_engages_beyond_exponent_guard(self):
        # strong damping pushes |A| past 500; the plain form would overflow
        bath = nm.BathSpec("hot", 2.0, CUTOFF, 5.0)
        grid = nm.build_kernel_grid(bath, CUTOFF, 14.0, 0.002)
        assert np.max(np.abs(grid.A)) > 500.0
        trace = nm.propagate(1.0, grid, 14.0)
        assert np.all(np.isfinite(trace.rho00))
        n = nm.bose_occupation(CUTOFF, bath.temperature)
        assert trace.value_at_t == pytest.approx((1.0 + n) / (1.0 + 2.0 * n), abs=5e-3)
