"""Finite-dimensional noise representations and collision-model simulation.

A time slice of duration dtau carries the Wiener increment dB = sqrt(dtau) a
on a number basis truncated at ``cutoff`` levels. Thermal noise at
occupation n lives on a doubled slice F1 (x) F2,

    dA = sqrt(n+1) dB1 (x) I + sqrt(n) I (x) dB2*,

whose vacuum moments reproduce the thermal Ito table exactly already at
cutoff 2: <dA dA*> = (n+1) dtau, <dA* dA> = n dtau, <dA dA> = 0.

The collision model discretizes a quantum stochastic evolution by coupling
the system to a fresh slice per step through the exactly unitary
exp(L (x) dA* - L* (x) dA) and tracing the slice out; the reduced dynamics
converges weakly at first order in dtau to the thermal master equation.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import kernels
from .open_system import TrajectoryResult
from .operators import annihilation, check_density_matrix, dag, identity


@dataclass(frozen=True)
class TruncatedFock:
    """Single-mode number basis truncated to ``cutoff`` levels.

    [a, a*] = I holds exactly on the first cutoff - 1 levels; the last
    diagonal entry of the commutator is 1 - cutoff.
    """

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")

    @property
    def a(self):
        return annihilation(self.cutoff)


@dataclass(frozen=True)
class ThermalIncrement:
    """Doubled-slice thermal noise increment for one step of length dtau."""

    occupation: float
    dtau: float
    cutoff: int
    delta_a: np.ndarray

    @property
    def dim(self):
        return self.cutoff**2

    @property
    def delta_a_dag(self):
        return dag(self.delta_a)

    @property
    def vacuum(self):
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def thermal_increment(n, dtau, cutoff=2):
    """Build dA on the doubled slice space (dimension cutoff^2)."""
    if n < 0:
        raise ValueError(f"occupation must be >= 0, got {n}")
    if not dtau > 0:
        raise ValueError(f"dtau must be positive, got {dtau}")
    a = annihilation(cutoff)
    eye = identity(cutoff)
    db = np.sqrt(dtau) * a
    delta_a = np.sqrt(n + 1.0) * np.kron(db, eye) + np.sqrt(n) * np.kron(eye, dag(db))
    return ThermalIncrement(float(n), float(dtau), int(cutoff), delta_a)


def vacuum_moment(inc: ThermalIncrement, *ops):
    """Vacuum expectation <0,0| op1 op2 ... |0,0> of slice operators."""
    v = inc.vacuum
    out = v
    for op in reversed(ops):
        out = op @ out
    return complex(np.vdot(v, out))


def number_increment_moments(inc: ThermalIncrement):
    """First and second vacuum moments of the candidate counting increment
    N = dA* dA.

    A genuine gauge increment would obey a table row N N ~ N, i.e. a second
    moment of order dtau. Here the connected second moment is
    n (n+1) dtau^2 exactly, of order dtau^2, which is the concrete face of
    the obstruction to defining a counting process for thermal noise.
    """
    nop = inc.delta_a_dag @ inc.delta_a
    m1 = vacuum_moment(inc, nop)
    m2 = vacuum_moment(inc, nop, nop)
    return m1, m2


def rindler_pair_commutation(n, cutoff=2, max_dim=4096):
    """Max-abs entry of [dA_R, dA_L] and [dA_R, dA_L*] on the four-mode slice.

    The right and left increments are built from two modes (b-, b+) and their
    doubles,

        dA_R = sqrt(n+1) db- (x) I + sqrt(n) I (x) db+*,
        dA_L = sqrt(n+1) db+ (x) I + sqrt(n) I (x) db-*,

    and commute exactly because the four tensor slots are disjoint.
    """
    if n < 0:
        raise ValueError(f"occupation must be >= 0, got {n}")
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    dim = cutoff**4
    if dim > max_dim:
        raise MemoryError(f"four-mode slice dimension {dim} exceeds cap {max_dim}")
    a = annihilation(cutoff)
    eye = identity(cutoff)

    def slot(op, k):
        ops = [eye, eye, eye, eye]
        ops[k] = op
        out = ops[0]
        for m in ops[1:]:
            out = np.kron(out, m)
        return out

    # Slots: (copy1 b-, copy1 b+, copy2 b-, copy2 b+).
    sp, sn = np.sqrt(n + 1.0), np.sqrt(n)
    a_r = sp * slot(a, 0) + sn * slot(dag(a), 3)
    a_l = sp * slot(a, 1) + sn * slot(dag(a), 2)
    c1 = a_r @ a_l - a_l @ a_r
    a_l_dag = dag(a_l)
    c2 = a_r @ a_l_dag - a_l_dag @ a_r
    return float(max(np.max(np.abs(c1)), np.max(np.abs(c2))))


@dataclass(frozen=True)
class SimConfig:
    """Collision-model run parameters; horizon = dtau * steps."""

    dtau: float
    steps: int
    cutoff: int = 2
    occupation: float = 0.0
    rate: float = 1.0

    def __post_init__(self):
        if not self.dtau > 0:
            raise ValueError(f"dtau must be positive, got {self.dtau}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.occupation < 0:
            raise ValueError(f"occupation must be >= 0, got {self.occupation}")
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    @property
    def horizon(self):
        return self.dtau * self.steps


def step_unitary(L_sys, inc: ThermalIncrement):
    """Exactly unitary one-collision step exp(L (x) dA* - L* (x) dA).

    The exponent is anti-Hermitian, so the result is unitary to rounding; it
    agrees with the Ito increment form to first order in dtau.
    """
    L_sys = np.asarray(L_sys, dtype=complex)
    gen = np.kron(L_sys, inc.delta_a_dag) - np.kron(dag(L_sys), inc.delta_a)
    u = expm(gen)
    if not np.all(np.isfinite(u)):
        raise ArithmeticError("step unitary is non-finite")
    return u


def simulate_qsde(cfg: SimConfig, L_sys, rho0, max_dim=4096):
    """Collision-model trajectory of the reduced system state.

    Per step the system is coupled to a fresh doubled slice in its vacuum,
    the step unitary is applied, and the slice is traced out.
    """
    L_sys = np.asarray(L_sys, dtype=complex)
    rho0 = check_density_matrix(rho0)
    d_sys = L_sys.shape[0]
    d_env = cfg.cutoff**2
    if d_sys * d_env > max_dim:
        raise MemoryError(f"system x slice dimension {d_sys * d_env} exceeds cap {max_dim}")
    inc = thermal_increment(cfg.occupation, cfg.dtau, cfg.cutoff)
    u = step_unitary(L_sys, inc)
    states = kernels.collision_run(u, rho0, d_sys, d_env, cfg.steps)
    if not np.all(np.isfinite(states)):
        raise ArithmeticError("collision-model state became non-finite")
    times = np.arange(cfg.steps + 1) * cfg.dtau
    drift = np.abs(np.einsum("kii->k", states) - 1.0)
    return TrajectoryResult(times, states, drift)
