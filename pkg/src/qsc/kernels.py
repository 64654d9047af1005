"""Stepping loops behind the integrators, with an optional compiled backend.

Two kernels dominate the runtime of long runs: iterating the one-step RK4
propagator of a vectorized master equation, and the per-collision conjugate-
and-trace update of the collision model. Both are implemented in Cython
(``qsc._kernels``) and in plain numpy; the compiled version is picked at
import time when present.

Python-loop overhead only matters for small state dimensions, so the
dispatch uses the compiled loop up to ``COMPILED_DIM_LIMIT`` and BLAS-backed
numpy above it (where a naive C loop would lose to BLAS). Set
``QSC_PURE_PYTHON=1`` to force the numpy paths; ``backend()`` reports which
is active.
"""

import os

import numpy as np

try:
    from . import _kernels as _ext
except ImportError:
    _ext = None

_FORCE_PY = os.environ.get("QSC_PURE_PYTHON") == "1"

# measured crossover: the compiled triple loop wins below ~32, BLAS above
COMPILED_DIM_LIMIT = 32


def backend():
    return "compiled" if (_ext is not None and not _FORCE_PY) else "python"


def rk4_step_matrix(generator, dt):
    """One-step propagator I + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24.

    For a linear equation v' = M v this equals the classical RK4 update
    exactly, stage by stage.
    """
    m = np.asarray(generator, dtype=complex)
    hm = dt * m
    hm2 = hm @ hm
    hm3 = hm2 @ hm
    hm4 = hm2 @ hm2
    return np.eye(m.shape[0], dtype=complex) + hm + hm2 / 2.0 + hm3 / 6.0 + hm4 / 24.0


def propagate_py(phi, v0, steps):
    phi = np.ascontiguousarray(phi, dtype=complex)
    d = phi.shape[0]
    out = np.empty((steps + 1, d), dtype=complex)
    out[0] = v0
    # overflow of an unstable iteration surfaces as non-finite output, which
    # callers check for; keep numpy quiet about it here
    with np.errstate(over="ignore", invalid="ignore"):
        for s in range(steps):
            out[s + 1] = phi @ out[s]
    return out


def propagate(phi, v0, steps):
    """Iterate v_{k+1} = phi v_k, returning all steps + 1 states."""
    phi = np.ascontiguousarray(phi, dtype=complex)
    v0 = np.ascontiguousarray(v0, dtype=complex)
    if _ext is not None and not _FORCE_PY and phi.shape[0] <= COMPILED_DIM_LIMIT:
        return _ext.propagate(phi, v0, steps)
    return propagate_py(phi, v0, steps)


def _collision_columns(u, d_env):
    # Fresh environment slices start in basis state 0, so only the columns of
    # the step unitary at env index 0 enter the update.
    return np.ascontiguousarray(u[:, ::d_env])


def collision_run_py(u, rho0, d_sys, d_env, steps):
    v = _collision_columns(np.asarray(u, dtype=complex), d_env)
    vc3 = v.conj().reshape(d_sys, d_env, d_sys)
    out = np.empty((steps + 1, d_sys, d_sys), dtype=complex)
    out[0] = rho0
    for s in range(steps):
        w = (v @ out[s]).reshape(d_sys, d_env, d_sys)
        out[s + 1] = np.einsum("pej,qej->pq", w, vc3)
    return out


def collision_run(u, rho0, d_sys, d_env, steps):
    """Repeatedly couple the system to a fresh env slice in state |0>.

    Each step maps rho to Tr_env[ U (rho x |0><0|) U* ] for the fixed step
    unitary ``u`` on the system (x) env space.
    """
    u = np.ascontiguousarray(u, dtype=complex)
    rho0 = np.ascontiguousarray(rho0, dtype=complex)
    if u.shape != (d_sys * d_env, d_sys * d_env):
        raise ValueError("step unitary shape does not match d_sys * d_env")
    if _ext is not None and not _FORCE_PY and u.shape[0] <= COMPILED_DIM_LIMIT:
        return _ext.collision_run(_collision_columns(u, d_env), rho0, d_sys, d_env, steps)
    return collision_run_py(u, rho0, d_sys, d_env, steps)
