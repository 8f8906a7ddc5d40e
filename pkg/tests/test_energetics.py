import math

import numpy as np
import pytest

import nmotto as nm
from nmotto.sweep import evaluate_cycle

from conftest import CUTOFF, LAMBDA, OMEGA_C, OMEGA_H, T_C, T_H


def _node_time(grid, t):
    return grid.step * round(t / grid.step)


class TestQubitEnergyChange:
    def test_short_cold_stroke_vanishes(self, hot_grid, cold_grid):
        lc = nm.fixed_point(60.0, 1e-4, hot_grid, cold_grid)
        assert abs(nm.qubit_energy_change(lc, "cold", OMEGA_C)) < 1e-5

    def test_ratio_identity(self, hot_grid, cold_grid):
        # populations are exchanged between strokes, so the heats are
        # proportional with opposite signs
        rng = np.random.default_rng(2)
        for _ in range(10):
            t_h = float(rng.uniform(1.0, 120.0))
            t_c = float(rng.uniform(1.0, 120.0))
            lc = nm.fixed_point(t_h, t_c, hot_grid, cold_grid)
            des_h = nm.qubit_energy_change(lc, "hot", OMEGA_H)
            des_c = nm.qubit_energy_change(lc, "cold", OMEGA_C)
            assert abs(des_h * OMEGA_C + des_c * OMEGA_H) < 1e-10

    def test_cold_heat_positive_at_short_times(self, reference_context):
        # short-time transient drives the qubit toward equal populations,
        # so it absorbs energy even from the cold bath
        rep = evaluate_cycle(reference_context, 60.0, 1.0)
        assert rep.dE_S_c > 0.0


class TestBathEnergyChange:
    def test_decoupled_bath_moves_nothing(self):
        grid = nm.build_kernel_grid(nm.BathSpec("hot", 0.0, CUTOFF, T_H), OMEGA_H, 10.0)
        cold = nm.build_kernel_grid(nm.BathSpec("cold", LAMBDA, CUTOFF, T_C), OMEGA_C, 10.0)
        lc = nm.fixed_point(5.0, 5.0, grid, cold)
        assert nm.bath_energy_change(lc, "hot", OMEGA_H, grid, 5.0) == pytest.approx(
            -nm.qubit_energy_change(lc, "hot", OMEGA_H), abs=1e-18)

    def test_wrong_frequency_rejected(self, hot_grid, cold_grid):
        lc = nm.fixed_point(10.0, 10.0, hot_grid, cold_grid)
        with pytest.raises(ValueError):
            nm.bath_energy_change(lc, "hot", 2.0 * OMEGA_H, hot_grid, 10.0)

    def test_interaction_energy_converges_at_long_times(self, hot_grid, cold_grid):
        # tail bound from the kernel decay: |D1| <= c/tau^2 with
        # c = 2*lam*(cutoff^2 + 2*T*cutoff)/cutoff^2 ... evaluated directly below
        t = _node_time(cold_grid, 10.0 / CUTOFF)
        values = {}
        for mult in (1, 2, 4):
            lc = nm.fixed_point(60.0, mult * t, hot_grid, cold_grid)
            values[mult] = nm.stroke_energetics(lc, "cold", OMEGA_C, cold_grid, mult * t).dE_I
        c_tail = abs(nm.noise_kernel(t, nm.BathSpec("cold", LAMBDA, CUTOFF, T_C))) * t * t
        bound = 3.0 * 2.0 * c_tail / (OMEGA_C * t * t)
        assert abs(values[1] - values[2]) < bound
        assert abs(values[2] - values[4]) < abs(values[1] - values[2])


class TestInteractionEnergyChange:
    def test_zero_inputs(self):
        assert nm.interaction_energy_change(0.0, 0.0) == 0.0

    def test_exact_negative_sum(self):
        assert nm.interaction_energy_change(0.25, -0.1) == -0.15

    def test_adiabatic_work_shrinks_as_frequencies_merge(self, hot_bath, cold_bath):
        # W_adiab scales with (omega_h - omega_c) per excitation
        totals = []
        for omega_c in (0.5, 0.8, 0.95):
            rep = nm.markov_cycle(40.0, 40.0, hot_bath, cold_bath, OMEGA_H, omega_c)
            totals.append(rep.W_adiab_h + rep.W_adiab_c)
        assert totals[0] > totals[1] > totals[2] > 0.0


class TestConservation:
    def test_exact_closure_and_independent_route(self, hot_grid, cold_grid):
        rng = np.random.default_rng(7)
        for _ in range(20):
            t_h = hot_grid.step * int(rng.integers(20, int(120.0 / hot_grid.step)))
            t_c = cold_grid.step * int(rng.integers(20, int(120.0 / cold_grid.step)))
            lc = nm.fixed_point(t_h, t_c, hot_grid, cold_grid)
            for label, omega, grid, t in (("hot", OMEGA_H, hot_grid, t_h),
                                          ("cold", OMEGA_C, cold_grid, t_c)):
                s = nm.stroke_energetics(lc, label, omega, grid, t)
                assert abs(s.dE_S + s.dE_B + s.dE_I) < 1e-14
                explicit = nm.eq_interaction_integral(lc, label, grid, t)
                assert abs(s.dE_I - explicit) < 1e-9

    def test_independent_route_tight_on_fine_grids(self, hot_bath, cold_bath):
        gh = nm.build_kernel_grid(hot_bath, OMEGA_H, 40.0, 0.025)
        gc = nm.build_kernel_grid(cold_bath, OMEGA_C, 40.0, 0.025)
        rng = np.random.default_rng(17)
        for _ in range(10):
            t_h = gh.step * int(rng.integers(40, gh.n_points - 1))
            t_c = gc.step * int(rng.integers(40, gc.n_points - 1))
            lc = nm.fixed_point(t_h, t_c, gh, gc)
            for label, omega, grid, t in (("hot", OMEGA_H, gh, t_h), ("cold", OMEGA_C, gc, t_c)):
                s = nm.stroke_energetics(lc, label, omega, grid, t)
                assert abs(s.dE_I - nm.eq_interaction_integral(lc, label, grid, t)) < 1e-10

    def test_interaction_energy_negative_on_reproduction_line(self, reference_context):
        for t_c in np.linspace(0.5, 120.0, 40):
            rep = evaluate_cycle(reference_context, 60.0, float(t_c))
            assert rep.dE_I_h < 0.0
            assert rep.dE_I_c < 0.0

    def test_markov_limit_agreement(self):
        # stronger coupling keeps 50/rate affordable
        lam = 0.05
        hot = nm.BathSpec("hot", lam, CUTOFF, T_H)
        cold = nm.BathSpec("cold", lam, CUTOFF, T_C)
        rate_h = nm.markov_rate(hot, OMEGA_H)
        rate_c = nm.markov_rate(cold, OMEGA_C)
        t_h, t_c = 50.0 / rate_h, 50.0 / rate_c
        gh = nm.build_kernel_grid(hot, OMEGA_H, t_h)
        gc = nm.build_kernel_grid(cold, OMEGA_C, t_c)
        lc = nm.fixed_point(t_h, t_c, gh, gc)
        markov = nm.markov_cycle(t_h, t_c, hot, cold, OMEGA_H, OMEGA_C)
        des_h = nm.qubit_energy_change(lc, "hot", OMEGA_H)
        des_c = nm.qubit_energy_change(lc, "cold", OMEGA_C)
        assert des_h == pytest.approx(markov.dE_S_h, rel=0.02)
        assert des_c == pytest.approx(markov.dE_S_c, rel=0.02)


class TestSimultaneousZeroCrossing:
    def test_qubit_heats_vanish_together(self, reference_context):
        ev = lambda tc: evaluate_cycle(reference_context, 60.0, float(tc))
        root_hot = nm.bisect_sign_change(lambda x: ev(x).dE_S_h, 2.0, 10.0, rtol=1e-8)
        root_cold = nm.bisect_sign_change(lambda x: ev(x).dE_S_c, 2.0, 10.0, rtol=1e-8)
        assert abs(root_hot - root_cold) <= 2.0 * 1e-8 * max(root_hot, 1.0)


class TestMarkovReference:
    def test_population_examples(self, hot_bath):
        assert nm.markov_population(0.25, hot_bath, OMEGA_H, 0.0) == 0.25
        n = nm.bose_occupation(OMEGA_H, hot_bath.temperature)
        stationary = (1.0 + n) / (1.0 + 2.0 * n)
        assert nm.markov_population(0.25, hot_bath, OMEGA_H, 1e7) == pytest.approx(stationary, abs=1e-12)
        frozen_cold = nm.BathSpec("hot", LAMBDA, CUTOFF, 1e-4)
        assert nm.markov_population(0.3, frozen_cold, OMEGA_H, 1e9) == pytest.approx(1.0, abs=1e-9)

    def test_cycle_has_no_interaction_energy(self, hot_bath, cold_bath):
        for t_h in (5.0, 40.0, 120.0):
            for t_c in (3.0, 66.0):
                rep = nm.markov_cycle(t_h, t_c, hot_bath, cold_bath, OMEGA_H, OMEGA_C)
                assert rep.dE_I_h == 0.0 and rep.dE_I_c == 0.0
                assert rep.W_detach_h == 0.0 and rep.W_detach_c == 0.0
                assert rep.dE_B_h == -rep.dE_S_h
                assert rep.dE_B_c == -rep.dE_S_c
                assert rep.mode is nm.Mode.ENGINE
                assert rep.alpha_h == 0.0 and rep.alpha_c == 0.0

    def test_engine_efficiency_is_frequency_ratio(self, hot_bath, cold_bath):
        for t_h, t_c in ((10.0, 7.0), (80.0, 33.0)):
            rep = nm.markov_cycle(t_h, t_c, hot_bath, cold_bath, OMEGA_H, OMEGA_C)
            assert rep.eta == pytest.approx(1.0 - OMEGA_C / OMEGA_H, abs=1e-12)
            assert rep.W_total == pytest.approx(
                (OMEGA_H - OMEGA_C) * (rep.dE_S_h / OMEGA_H), rel=1e-10)
