"""Open-system dynamics: Lindblad generators, master-equation integration,
and the exact relaxation law of a thermally driven two-level detector.

Superoperators are stored as d^2 x d^2 matrices acting on column-stacked
density matrices (see ``operators.vec``). Heisenberg-picture generators act
on observables and are unital; Schroedinger-picture generators act on states
and annihilate the trace. The two are exchanged by the trace-pairing adjoint,
which in this vectorization is the conjugate transpose.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .operators import (
    check_density_matrix,
    dag,
    sigma_minus,
    sigma_plus,
    unvec,
    vec,
)

HEISENBERG = "heisenberg"
SCHROEDINGER = "schroedinger"


class IntegrationError(RuntimeError):
    """Master-equation integration produced non-finite values."""


@dataclass(frozen=True)
class HPTriple:
    """Coefficient operators (S, L, H) of a unitary quantum stochastic evolution.

    S must be unitary and H self-adjoint, both within 1e-10 in max-abs norm.
    """

    S: np.ndarray
    L: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.S, dtype=complex)
        L = np.asarray(self.L, dtype=complex)
        H = np.asarray(self.H, dtype=complex)
        d = S.shape[0]
        for name, m in (("S", S), ("L", L), ("H", H)):
            if m.shape != (d, d):
                raise ValueError(f"{name} must be {d}x{d}, got {m.shape}")
        if np.max(np.abs(dag(S) @ S - np.eye(d))) > 1e-10:
            raise ValueError("S is not unitary within 1e-10")
        if np.max(np.abs(H - dag(H))) > 1e-10:
            raise ValueError("H is not self-adjoint within 1e-10")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "H", H)

    @property
    def dim(self):
        return self.S.shape[0]


@dataclass(frozen=True)
class Superoperator:
    """Linear map on density matrices in column-stacked matrix form."""

    matrix: np.ndarray
    dim: int
    picture: str

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim**2, self.dim**2):
            raise ValueError(f"matrix shape {m.shape} does not match dim {self.dim}")
        if self.picture not in (HEISENBERG, SCHROEDINGER):
            raise ValueError(f"unknown picture {self.picture!r}")
        object.__setattr__(self, "matrix", m)

    def apply(self, x):
        return unvec(self.matrix @ vec(x), self.dim)

    def __call__(self, x):
        return self.apply(x)


def liouvillian_adjoint(g):
    """Trace-pairing adjoint, tr((adj g)(rho) X) = tr(rho g(X)); flips the picture."""
    other = SCHROEDINGER if g.picture == HEISENBERG else HEISENBERG
    return Superoperator(dag(g.matrix), g.dim, other)


def _left(a):
    d = a.shape[0]
    return np.kron(np.eye(d), a)


def _right(a):
    d = a.shape[0]
    return np.kron(a.T, np.eye(d))


def _sandwich(a, b):
    """Matrix of X -> a X b."""
    return np.kron(b.T, a)


def lindblad(t: HPTriple):
    """Heisenberg-picture generator -i[X, H] + ([L*, X] L + L* [X, L]) / 2.

    The scattering operator S does not enter the vacuum generator.
    """
    L, H = t.L, t.H
    LdL = dag(L) @ L
    m = (
        _sandwich(dag(L), L)
        - 0.5 * _left(LdL)
        - 0.5 * _right(LdL)
        + 1j * _left(H)
        - 1j * _right(H)
    )
    return Superoperator(m, t.dim, HEISENBERG)


def transform_triple(t: HPTriple, gamma_v):
    """Coefficients seen from a frame where the system moves with factor gamma_v.

    S is unchanged, L picks up 1/sqrt(gamma), H picks up 1/gamma.
    """
    if gamma_v < 1.0:
        raise ValueError(f"gamma factor must be >= 1, got {gamma_v}")
    return HPTriple(t.S, t.L / math.sqrt(gamma_v), t.H / gamma_v)


def scale_lindblad(t_rest: HPTriple, gamma_v, zeta_uv):
    """Rest-frame generator and its rescalings into two moving frames.

    Returns (Lbar, L, Lprime) with L = Lbar/gamma_v and L = zeta_uv * Lprime,
    expressing that the three generators measure the same physical evolution
    per unit of their respective times.
    """
    if gamma_v < 1.0:
        raise ValueError(f"gamma factor must be >= 1, got {gamma_v}")
    if not zeta_uv > 0:
        raise ValueError(f"zeta must be positive, got {zeta_uv}")
    rest = lindblad(t_rest)
    lab = Superoperator(rest.matrix / gamma_v, rest.dim, HEISENBERG)
    primed = Superoperator(lab.matrix / zeta_uv, rest.dim, HEISENBERG)
    return rest, lab, primed


def coherent_shift(t: HPTriple, alpha_val):
    """Fold a coherent drive of instantaneous amplitude alpha into the triple.

    L -> L + S alpha and H -> H + (L* alpha - L alpha*) / 2i; the shifted H is
    self-adjoint by construction.
    """
    a = complex(alpha_val)
    L_shift = t.L + t.S * a
    H_shift = t.H + (dag(t.L) * a - t.L * np.conj(a)) / 2j
    return HPTriple(t.S, L_shift, H_shift)


def coherent_lindblad(t: HPTriple, alpha_val):
    """Heisenberg generator with the input field in a coherent state of
    amplitude alpha:

        |alpha|^2 (S* X S - X) + alpha* S* [X, L] + [L*, X] S alpha + lindblad(t)

    Reduces to ``lindblad(t)`` at alpha = 0, and the first term vanishes
    identically when S = I.
    """
    a = complex(alpha_val)
    S, L = t.S, t.L
    d = t.dim
    eye = np.eye(d**2, dtype=complex)
    m = lindblad(t).matrix
    m = m + abs(a) ** 2 * (_sandwich(dag(S), S) - eye)
    m = m + np.conj(a) * (_sandwich(dag(S), L) - _left(dag(S) @ L))
    m = m + a * (_sandwich(dag(L), S) - _right(dag(L) @ S))
    return Superoperator(m, d, HEISENBERG)


@dataclass(frozen=True)
class CoherentAmplitude:
    """Complex drive amplitude as a function of proper time."""

    fn: callable

    def __call__(self, tau):
        return complex(self.fn(tau))

    def norm_squared(self, t0, t1, samples=1001):
        """Trapezoid estimate of the squared norm over [t0, t1]; must be finite."""
        taus = np.linspace(t0, t1, samples)
        vals = np.array([abs(self(t)) ** 2 for t in taus])
        out = float(np.trapezoid(vals, taus))
        if not math.isfinite(out):
            raise ValueError("coherent amplitude has non-finite squared norm")
        return out


@dataclass(frozen=True)
class ThermalChannel:
    """Damping channel parameters: base rate, thermal occupation, frequency."""

    rate: float
    occupation: float
    frequency: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")
        if self.occupation < 0:
            raise ValueError(f"occupation must be >= 0, got {self.occupation}")
        if not self.frequency > 0:
            raise ValueError(f"frequency must be positive, got {self.frequency}")


def _dissipator(c):
    """Schroedinger-picture matrix of rho -> c rho c* - {c*c, rho}/2."""
    cdc = dag(c) @ c
    return _sandwich(c, dag(c)) - 0.5 * _left(cdc) - 0.5 * _right(cdc)


def thermal_lindblad(ch: ThermalChannel, collapse_down, collapse_up, include_hamiltonian=False):
    """Schroedinger generator of thermal damping,

        rho -> -i[H0, rho] + rate (n+1) D[down] rho + rate n D[up] rho,

    with D[C] rho = C rho C* - {C*C, rho}/2. H0 = frequency * up@down is only
    included on request; by default the generator is purely dissipative.
    """
    down = np.asarray(collapse_down, dtype=complex)
    up = np.asarray(collapse_up, dtype=complex)
    d = down.shape[0]
    m = ch.rate * (ch.occupation + 1.0) * _dissipator(down) + ch.rate * ch.occupation * _dissipator(up)
    if include_hamiltonian:
        h0 = ch.frequency * (up @ down)
        m = m - 1j * _left(h0) + 1j * _right(h0)
    return Superoperator(m, d, SCHROEDINGER)


def bose_occupation(omega, a):
    """Mean boson occupation 1/(e^(2 pi omega / a) - 1) at acceleration a."""
    if not omega > 0:
        raise ValueError(f"frequency must be positive, got {omega}")
    if not a > 0:
        raise ValueError(f"acceleration must be positive, got {a}")
    return 1.0 / math.expm1(2.0 * math.pi * omega / a)


def detector_generator(n, omega, include_hamiltonian=False):
    """Two-level detector Liouvillian with base rate omega / 4 pi."""
    ch = ThermalChannel(rate=omega / (4.0 * math.pi), occupation=n, frequency=omega)
    return thermal_lindblad(ch, sigma_minus(), sigma_plus(), include_hamiltonian)


def oscillator_generator(n, rate, cutoff, omega=1.0, include_hamiltonian=False):
    """Damped oscillator Liouvillian on a number basis truncated at ``cutoff``."""
    from .operators import annihilation

    a = annihilation(cutoff + 1)
    ch = ThermalChannel(rate=rate, occupation=n, frequency=omega)
    return thermal_lindblad(ch, a, dag(a), include_hamiltonian)


def thermal_steady_state(n):
    """Detector fixed point diag(n, n+1)/(2n+1) in the (excited, ground) basis."""
    if n < 0:
        raise ValueError(f"occupation must be >= 0, got {n}")
    z = 2.0 * n + 1.0
    return np.diag([n / z, (n + 1.0) / z]).astype(complex)


@dataclass(frozen=True)
class TrajectoryResult:
    """States of a master-equation or collision-model run at stored times.

    trace_drift records |tr rho - 1| per stored state; drift is reported, the
    states are never renormalized.
    """

    times: np.ndarray
    states: np.ndarray
    trace_drift: np.ndarray

    @property
    def final_state(self):
        return self.states[-1]


def evolve_master(g: Superoperator, rho0, tau, steps, store_every=1):
    """Integrate d rho / d tau = g(rho) with fixed-step 4th-order Runge-Kutta.

    For the constant generators used here the classical RK4 stage evaluation
    collapses exactly to one step with the degree-4 Taylor propagator, which
    is what the stepping kernel iterates.

    Parameters
    ----------
    g : Superoperator
        Schroedinger-picture generator.
    rho0 : array
        Initial density matrix (validated, not renormalized).
    tau : float
        Horizon; steps : number of RK4 steps >= 1.
    store_every : int
        Keep every k-th state; must divide ``steps``.

    Returns
    -------
    TrajectoryResult
    """
    if g.picture != SCHROEDINGER:
        raise ValueError("evolve_master needs a Schroedinger-picture generator")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if store_every < 1 or steps % store_every:
        raise ValueError("store_every must be >= 1 and divide steps")
    rho0 = check_density_matrix(rho0)
    h = tau / steps
    phi = kernels.rk4_step_matrix(g.matrix, h)
    traj = kernels.propagate(phi, vec(rho0), steps)
    if not np.all(np.isfinite(traj)):
        raise IntegrationError(
            f"non-finite state encountered (step size {h:g}; the generator's "
            "fastest rate likely exceeds the RK4 stability limit)"
        )
    kept = traj[::store_every]
    times = np.arange(0, steps + 1, store_every) * h
    # row-major reshape of a column-stacked vector is the transpose
    states = np.ascontiguousarray(kept.reshape(-1, g.dim, g.dim).transpose(0, 2, 1))
    drift = np.abs(np.einsum("kii->k", states) - 1.0)
    return TrajectoryResult(times, states, drift)


def detector_exact(rho0, tau, n, omega):
    """Closed-form detector state at proper time tau.

    Populations relax toward n/(2n+1) (excited) and (n+1)/(2n+1) (ground) at
    rate (2n+1) omega / 4 pi; coherences decay at half that rate.
    """
    rho0 = check_density_matrix(rho0)
    if rho0.shape != (2, 2):
        raise ValueError("detector state must be 2x2")
    if n < 0:
        raise ValueError(f"occupation must be >= 0, got {n}")
    z = 2.0 * n + 1.0
    pop_rate = z * omega / (4.0 * math.pi)
    ee_inf = n / z
    ee = ee_inf + (rho0[0, 0].real - ee_inf) * math.exp(-pop_rate * tau)
    eg = rho0[0, 1] * math.exp(-0.5 * pop_rate * tau)
    return np.array([[ee, eg], [np.conj(eg), 1.0 - ee]], dtype=complex)


def write_trajectory_csv(fp, result: TrajectoryResult):
    """Write a two-level trajectory with the fixed header
    ``tau,rho_ee,rho_gg,re_rho_eg,im_rho_eg,trace_drift``."""
    if result.states.shape[1:] != (2, 2):
        raise ValueError("trajectory CSV schema is defined for two-level states")
    fp.write("tau,rho_ee,rho_gg,re_rho_eg,im_rho_eg,trace_drift\n")
    for t, rho, drift in zip(result.times, result.states, result.trace_drift):
        cols = (t, rho[0, 0].real, rho[1, 1].real, rho[0, 1].real, rho[0, 1].imag, drift)
        fp.write(",".join(repr(float(c)) for c in cols) + "\n")
