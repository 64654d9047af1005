# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping loops; see qsc.kernels for the dispatching wrappers."""

import numpy as np


def propagate(double complex[:, ::1] phi, double complex[::1] v0, Py_ssize_t steps):
    cdef Py_ssize_t d = phi.shape[0]
    out_arr = np.empty((steps + 1, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t s, i, j
    cdef double complex acc
    for i in range(d):
        out[0, i] = v0[i]
    for s in range(steps):
        for i in range(d):
            acc = 0
            for j in range(d):
                acc = acc + phi[i, j] * out[s, j]
            out[s + 1, i] = acc
    return out_arr


def collision_run(double complex[:, ::1] v, double complex[:, ::1] rho0,
                  Py_ssize_t d_sys, Py_ssize_t d_env, Py_ssize_t steps):
    """v holds the step-unitary columns at env index 0, shape (d_sys*d_env, d_sys)."""
    cdef Py_ssize_t dim = d_sys * d_env
    out_arr = np.empty((steps + 1, d_sys, d_sys), dtype=np.complex128)
    w_arr = np.empty((dim, d_sys), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_arr
    cdef double complex[:, ::1] w = w_arr
    cdef Py_ssize_t s, r, p, q, e, j, k
    cdef double complex acc
    for p in range(d_sys):
        for q in range(d_sys):
            out[0, p, q] = rho0[p, q]
    for s in range(steps):
        for r in range(dim):
            for j in range(d_sys):
                acc = 0
                for k in range(d_sys):
                    acc = acc + v[r, k] * out[s, k, j]
                w[r, j] = acc
        for p in range(d_sys):
            for q in range(d_sys):
                acc = 0
                for e in range(d_env):
                    for j in range(d_sys):
                        acc = acc + w[p * d_env + e, j] * v[q * d_env + e, j].conjugate()
                out[s + 1, p, q] = acc
    return out_arr
