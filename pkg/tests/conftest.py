import numpy as np
import pytest

import nmotto as nm

# Reference scale: ratios omega_c/omega_h = 0.5, T_c/T_h = 0.2 anchored at
# omega_h = T_h = 1 (see configs/reference_cycle.json).
OMEGA_H = 1.0
OMEGA_C = 0.5
T_H = 1.0
T_C = 0.2
LAMBDA = 0.01
CUTOFF = 0.4
T_HOT_STROKE = 60.0


@pytest.fixture(scope="session")
def hot_bath():
    return nm.BathSpec("hot", LAMBDA, CUTOFF, T_H)


@pytest.fixture(scope="session")
def cold_bath():
    return nm.BathSpec("cold", LAMBDA, CUTOFF, T_C)


@pytest.fixture(scope="session")
def hot_grid(hot_bath):
    return nm.build_kernel_grid(hot_bath, OMEGA_H, 130.0)


@pytest.fixture(scope="session")
def cold_grid(cold_bath):
    return nm.build_kernel_grid(cold_bath, OMEGA_C, 130.0)


@pytest.fixture(scope="session")
def reference_context(hot_bath, cold_bath, hot_grid, cold_grid):
    return nm.CycleContext(
        omega_h=OMEGA_H, omega_c=OMEGA_C,
        hot_bath=hot_bath, cold_bath=cold_bath,
        hot_grid=hot_grid, cold_grid=cold_grid,
        dynamics="tcl2", sign_eps=1e-12,
    )


def trigamma_series_oracle(z, terms=10**6):
    """Direct summation of sum 1/(z+k)^2 with an Euler-Maclaurin tail."""
    k = np.arange(terms)
    total = np.sum(1.0 / (z + k) ** 2)
    w = z + terms
    return total + 1.0 / w + 1.0 / (2.0 * w * w) + 1.0 / (6.0 * w ** 3)


def base_config_dict(**overrides):
    data = {
        "omega_h": OMEGA_H, "omega_c": OMEGA_C, "T_h": T_H, "T_c": T_C,
        "lambda_h": LAMBDA, "lambda_c": LAMBDA, "Omega_h": CUTOFF, "Omega_c": CUTOFF,
        "t_h": T_HOT_STROKE, "t_c": 10.0,
    }
    data.update(overrides)
    return data
