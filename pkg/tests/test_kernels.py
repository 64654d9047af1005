import numpy as np
import pytest

from qsc import kernels
from qsc.operators import dag, haar_unitary, partial_trace_env, random_density


def naive_collision(u, rho0, d_sys, d_env, steps):
    """Reference implementation: full kron, conjugate, partial trace."""
    vac = np.zeros((d_env, d_env), dtype=complex)
    vac[0, 0] = 1.0
    out = [rho0]
    rho = rho0
    for _ in range(steps):
        full = u @ np.kron(rho, vac) @ dag(u)
        rho = partial_trace_env(full, d_sys, d_env)
        out.append(rho)
    return np.stack(out)


def test_rk4_step_matrix_matches_staged_rk4():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    h = 0.07
    k1 = m @ v
    k2 = m @ (v + 0.5 * h * k1)
    k3 = m @ (v + 0.5 * h * k2)
    k4 = m @ (v + h * k3)
    staged = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    assert np.allclose(kernels.rk4_step_matrix(m, h) @ v, staged, atol=1e-13)


def test_propagate_python_path():
    rng = np.random.default_rng(1)
    phi = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    phi /= np.abs(np.linalg.eigvals(phi)).max()
    v0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    traj = kernels.propagate_py(phi, v0, 30)
    assert traj.shape == (31, 4)
    assert np.allclose(traj[7], np.linalg.matrix_power(phi, 7) @ v0, atol=1e-12)


def test_backends_agree_propagate():
    if kernels.backend() != "compiled":
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(2)
    phi = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    phi /= np.abs(np.linalg.eigvals(phi)).max() * 1.01
    v0 = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    a = kernels.propagate(phi, v0, 200)
    b = kernels.propagate_py(phi, v0, 200)
    assert np.max(np.abs(a - b)) < 1e-12


def test_large_dimension_uses_python_path():
    rng = np.random.default_rng(3)
    d = kernels.COMPILED_DIM_LIMIT + 5
    phi = np.eye(d, dtype=complex) * 0.5
    v0 = rng.standard_normal(d) + 0j
    traj = kernels.propagate(phi, v0, 3)
    assert np.allclose(traj[3], v0 * 0.125)


def test_collision_matches_naive_reference():
    rng = np.random.default_rng(4)
    d_sys, d_env = 2, 4
    u = haar_unitary(rng, d_sys * d_env)
    rho0 = random_density(rng, d_sys)
    fast = kernels.collision_run(u, rho0, d_sys, d_env, 10)
    ref = naive_collision(u, rho0, d_sys, d_env, 10)
    assert np.max(np.abs(fast - ref)) < 1e-12


def test_collision_backends_agree():
    if kernels.backend() != "compiled":
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(5)
    d_sys, d_env = 3, 3
    u = haar_unitary(rng, d_sys * d_env)
    rho0 = random_density(rng, d_sys)
    a = kernels.collision_run(u, rho0, d_sys, d_env, 25)
    b = kernels.collision_run_py(u, rho0, d_sys, d_env, 25)
    assert np.max(np.abs(a - b)) < 1e-12


def test_collision_shape_validation():
    rng = np.random.default_rng(6)
    with pytest.raises(ValueError):
        kernels.collision_run(np.eye(6, dtype=complex), random_density(rng, 2), 2, 4, 1)
