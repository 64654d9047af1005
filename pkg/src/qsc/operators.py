"""Shared matrix plumbing: operator constructors, vectorization, state checks.

Conventions used throughout the package:

- two-level basis ordering is (excited, ground), so ``rho[0, 0]`` is the
  excited population and ``sigma_minus()`` lowers excited -> ground;
- density matrices are vectorized by column stacking,
  ``vec(X)[i + d*j] = X[i, j]``, under which ``vec(A X B) = kron(B.T, A) vec(X)``.
"""

import numpy as np

EXCITED = 0
GROUND = 1


def identity(d):
    return np.eye(d, dtype=complex)


def sigma_minus():
    """Lowering operator |g><e| in the (excited, ground) basis."""
    return np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


def sigma_plus():
    return np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def sigma_z():
    return np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def ground_state():
    return np.diag([0.0, 1.0]).astype(complex)


def excited_state():
    return np.diag([1.0, 0.0]).astype(complex)


def annihilation(d):
    """Truncated annihilation operator, a|k> = sqrt(k)|k-1> for k < d."""
    a = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        a[k - 1, k] = np.sqrt(k)
    return a


def number_op(d):
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def dag(a):
    return np.asarray(a).conj().T


def vec(x):
    """Column-stack a d x d matrix into a d^2 vector."""
    x = np.asarray(x)
    return x.reshape(-1, order="F")


def unvec(v, d=None):
    v = np.asarray(v)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    return v.reshape((d, d), order="F")


def partial_trace_env(rho_full, d_sys, d_env):
    """Trace out the second (environment) factor of a system (x) env operator."""
    r = np.asarray(rho_full).reshape(d_sys, d_env, d_sys, d_env)
    return np.einsum("iaja->ij", r)


def trace_distance(rho, sigma):
    """Half the trace norm of the difference of two Hermitian matrices."""
    diff = np.asarray(rho) - np.asarray(sigma)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def state_fidelity(rho, sigma):
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    sqrt_rho = (v * np.sqrt(w)) @ dag(v)
    m = sqrt_rho @ sigma @ sqrt_rho
    ev = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    return float(np.sum(np.sqrt(ev)) ** 2)


def check_density_matrix(rho, trace_tol=1e-6, herm_tol=1e-8, psd_tol=1e-8):
    """Validate a density matrix; returns it as a complex ndarray.

    Degenerate input (trace off by more than ``trace_tol``) is rejected, not
    renormalized.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr} deviates from 1 by more than {trace_tol}")
    if np.max(np.abs(rho - dag(rho))) > herm_tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + dag(rho)))) < -psd_tol:
        raise ValueError("density matrix has a negative eigenvalue beyond tolerance")
    return rho


def haar_unitary(rng, d):
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_hermitian(rng, d, scale=1.0):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * 0.5 * (z + dag(z))


def random_density(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = z @ dag(z)
    return rho / np.trace(rho)


def geometric_thermal_probs(n, cutoff):
    """Truncated geometric level populations p_k proportional to (n/(n+1))^k."""
    if n < 0:
        raise ValueError("occupation must be >= 0")
    if n == 0:
        p = np.zeros(cutoff + 1)
        p[0] = 1.0
        return p
    ratio = n / (n + 1.0)
    p = ratio ** np.arange(cutoff + 1)
    return p / p.sum()


def gibbs_truncated(n, cutoff):
    """Thermal (Gibbs) density matrix of a truncated oscillator mode."""
    return np.diag(geometric_thermal_probs(n, cutoff)).astype(complex)
