"""Two-point functions along accelerated worldlines and the weak-coupling
limit numerics: regulated Wightman functions, van Hove delta families, and
the detector response rate with its detailed-balance (KMS) ratio.

Conventions follow the package's Minkowski two-point function

    W(x1, x2) = (1 / 4 pi^2) / (x1 - x2 - i eps that)^2,

with metric signature (+,-,-,-) and that = (1,0,0,0). Its pullback along the
uniformly accelerated worldline gives the closed hyperbolic-sine form used by
``accelerated_wightman`` (the SINH_SQUARED default); the overall sign of the
convention cancels from every detailed-balance ratio. The literal first-power
variant is kept behind the SINH_PAPER flag for comparison only; it does not
match the worldline pullback.

The Fourier integrals are oscillatory with an eps-scale peak at the origin,
so the quadrature uses Gauss-Legendre panels graded geometrically away from
zero (panel width comparable to the distance from the pole) before switching
to uniform panels that resolve the e^(-i omega tau) oscillation. Values are
computed on a decreasing epsilon schedule and Richardson-extrapolated to the
distributional limit eps -> 0+.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .kinematics import accelerated_worldline

_4PI2 = 4.0 * math.pi**2


class WightmanForm(Enum):
    SINH_SQUARED = "sinh_squared"
    SINH_PAPER = "sinh_paper"


@dataclass(frozen=True)
class WightmanParams:
    """Acceleration, short-distance regulator, and closed-form variant."""

    acceleration: float
    epsilon: float = 1e-6
    form: WightmanForm = WightmanForm.SINH_SQUARED

    def __post_init__(self):
        if not self.acceleration > 0:
            raise ValueError(f"acceleration must be positive, got {self.acceleration}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def minkowski_wightman(x1, x2, epsilon):
    """Regulated two-point function of 4-vector events (t, x, y, z)."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    dx = np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float)
    if dx.shape != (4,):
        raise ValueError("events must be 4-vectors (t, x, y, z)")
    dt = dx[0] - 1j * epsilon
    interval = dt * dt - (dx[1] ** 2 + dx[2] ** 2 + dx[3] ** 2)
    return complex(1.0 / (_4PI2 * interval))


def worldline_event4(tau, a):
    """Accelerated worldline point embedded as a 4-vector."""
    e = accelerated_worldline(tau, a)
    return np.array([e.t, e.x, 0.0, 0.0])


def accelerated_wightman(dtau, p: WightmanParams):
    """Two-point function along the accelerated worldline at proper-time lag dtau.

    SINH_SQUARED: (a^2 / 16 pi^2) / sinh^2(a (dtau - i eps) / 2), the exact
    pullback of ``minkowski_wightman``. SINH_PAPER: first power with an
    overall minus sign, retained for documentation. Vectorized over dtau.
    """
    a = p.acceleration
    arg = 0.5 * a * (np.asarray(dtau, dtype=complex) - 1j * p.epsilon)
    s = np.sinh(arg)
    if p.form is WightmanForm.SINH_SQUARED:
        out = (a * a) / (4.0 * _4PI2 * s * s)
    else:
        out = -(a * a) / (4.0 * _4PI2 * s)
    if out.ndim == 0:
        return complex(out)
    return out


@lru_cache(maxsize=8)
def _leggauss(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_quadrature(fn, edges, order):
    """Sum of Gauss-Legendre panel integrals in a fixed, deterministic order."""
    x, w = _leggauss(order)
    lefts = edges[:-1]
    rights = edges[1:]
    mid = 0.5 * (lefts + rights)
    half = 0.5 * (rights - lefts)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    vals = fn(nodes.ravel())
    return complex(np.sum(vals * weights.ravel()))


def _symmetric_edges(window, wmax, refine_from):
    """Panel edges on [-window, window], geometrically graded near zero."""
    pos = [0.0]
    x = min(refine_from, wmax)
    while x < wmax:
        pos.append(x)
        x *= 2.0
    start = pos[-1]
    n_uniform = int(math.ceil((window - start) / wmax - 1e-12))
    for k in range(1, n_uniform):
        pos.append(start + k * wmax)
    if window - pos[-1] > 1e-12 * window:
        pos.append(window)
    else:
        pos[-1] = window
    edges = [-e for e in reversed(pos[1:])] + pos
    return np.asarray(edges)


@dataclass(frozen=True)
class ResponseConfig:
    """Fourier-integral parameters for the response rate.

    omega may be negative (de-excitation side). window is the half-width T of
    the integration range, step the maximum panel width, epsilons the
    halving regulator schedule; all three default to acceleration-adapted
    values (T = 40/a, step = min(0.1/|omega|, 0.5/a),
    eps in {1e-2, 5e-3, 2.5e-3}/a).
    """

    omega: float
    window: float | None = None
    step: float | None = None
    epsilons: tuple | None = None
    order: int = 24


class ResponseConvergenceError(RuntimeError):
    """Regulator extrapolation failed to settle; residuals attached."""

    def __init__(self, message, values, residual):
        super().__init__(message)
        self.values = values
        self.residual = residual


@dataclass(frozen=True)
class ResponseResult:
    omega: float
    value: float
    epsilons: tuple
    epsilon_values: tuple
    residual: float
    imag_max: float
    prefactor_vs_quoted: float | None


def _resolve_config(cfg: ResponseConfig, a):
    window = cfg.window if cfg.window is not None else 40.0 / a
    if window * a < 5.0:
        raise ValueError(f"window {window} too small; need window >> 1/a")
    abs_omega = abs(cfg.omega)
    default_step = 0.5 / a if abs_omega == 0 else min(0.1 / abs_omega, 0.5 / a)
    step = cfg.step if cfg.step is not None else default_step
    if abs_omega > 0 and step > 0.1 / abs_omega * (1 + 1e-12):
        raise ValueError(f"step {step} too coarse to resolve oscillation at omega {cfg.omega}")
    eps = cfg.epsilons if cfg.epsilons is not None else (1e-2 / a, 5e-3 / a, 2.5e-3 / a)
    eps = tuple(float(e) for e in eps)
    if any(e <= 0 for e in eps):
        raise ValueError("epsilon schedule must be positive")
    for e0, e1 in zip(eps, eps[1:]):
        if abs(e1 / e0 - 0.5) > 1e-9:
            raise ValueError("epsilon schedule must halve between entries")
    return window, step, eps


def _fourier_value(omega, p: WightmanParams, eps, window, step, order, weight=None):
    wp = WightmanParams(p.acceleration, eps, p.form)

    def fn(tau):
        out = np.exp(-1j * omega * tau) * accelerated_wightman(tau, wp)
        if weight is not None:
            out = out * weight(tau)
        return out

    edges = _symmetric_edges(window, step, 0.5 * eps)
    return _panel_quadrature(fn, edges, order)


def _richardson_halving(values):
    """Extrapolate f(e) -> f(0) from a halving schedule, error model c1 e + c2 e^2."""
    if len(values) == 1:
        return values[0], float("nan")
    if len(values) == 2:
        u = 2.0 * values[1] - values[0]
        return u, abs(u - values[1])
    v0, v1, v2 = values[-3], values[-2], values[-1]
    u1 = 2.0 * v1 - v0
    u2 = 2.0 * v2 - v1
    out = (4.0 * u2 - u1) / 3.0
    return out, abs(out - u2)


def response_rate(cfg: ResponseConfig, p: WightmanParams):
    """Extrapolated Fourier transform of the worldline two-point function.

    Integrates e^(-i omega tau) W(tau) over [-T, T] for each regulator in the
    schedule and Richardson-extrapolates to eps -> 0+. The result is real up
    to quadrature noise; the ratio value(omega)/value(-omega) realizes the
    detailed-balance factor e^(-2 pi omega / a).

    The returned ``prefactor_vs_quoted`` compares the measured value against
    the quoted constant (omega / 4 pi) n(omega); it is reported, never
    asserted, and its sign follows the two-point convention above.
    """
    a = p.acceleration
    window, step, eps = _resolve_config(cfg, a)
    vals = [_fourier_value(cfg.omega, p, e, window, step, cfg.order) for e in eps]
    value_c, residual = _richardson_halving(vals)
    value = float(value_c.real)
    imag_max = max(abs(v.imag) for v in vals + [value_c])
    floor = 1e-9 * a
    if math.isfinite(residual) and abs(value_c) > floor:
        if residual / abs(value_c) > 0.02:
            raise ResponseConvergenceError(
                f"epsilon extrapolation residual {residual:.3e} vs value {abs(value_c):.3e}",
                tuple(vals),
                residual,
            )
    prefactor = None
    exponent = 2.0 * math.pi * cfg.omega / a
    if cfg.omega != 0 and exponent < 700.0:
        quoted = cfg.omega / (4.0 * math.pi) / math.expm1(exponent)
        prefactor = value / quoted
    return ResponseResult(
        omega=cfg.omega,
        value=value,
        epsilons=eps,
        epsilon_values=tuple(float(v.real) for v in vals),
        residual=float(residual),
        imag_max=float(imag_max),
        prefactor_vs_quoted=prefactor,
    )


def detailed_balance_ratio(a, omega, form=WightmanForm.SINH_SQUARED, **cfg_kwargs):
    """(measured ratio, expected e^(-2 pi omega / a)) for +-omega responses."""
    p = WightmanParams(a, form=form)
    pos = response_rate(ResponseConfig(omega, **cfg_kwargs), p)
    neg = response_rate(ResponseConfig(-omega, **cfg_kwargs), p)
    return pos.value / neg.value, math.exp(-2.0 * math.pi * omega / a)


def gaussian_test_function(width=1.0):
    def f(s):
        return np.exp(-0.5 * (np.asarray(s) / width) ** 2)

    return f


@dataclass(frozen=True)
class ConvergenceReport:
    lambdas: tuple
    values: tuple
    limit: float
    residual: float


def rescaled_twopoint_convergence(
    omega,
    p: WightmanParams,
    lambdas=(0.5, 0.25, 0.125, 0.0625),
    test_fn=None,
    window=None,
    step=None,
    epsilons=None,
    order=24,
):
    """Smear the van Hove-rescaled kernel against a test function per lambda.

    In the macroscopic lag variable s the rescaled kernel is
    (1/lambda^2) e^(-i omega s / lambda^2) W(s / lambda^2); substituting
    u = s / lambda^2 gives integral f(lambda^2 u) e^(-i omega u) W(u) du,
    which converges to f(0) times the response rate as lambda -> 0. The
    report carries the value sequence and a Richardson limit estimate
    (lambdas must halve).
    """
    lambdas = tuple(float(val) for val in lambdas)
    if any(val <= 0 for val in lambdas):
        raise ValueError("lambdas must be positive")
    for l0, l1 in zip(lambdas, lambdas[1:]):
        if abs(l1 / l0 - 0.5) > 1e-9:
            raise ValueError("lambda schedule must halve between entries")
    if test_fn is None:
        test_fn = gaussian_test_function()
    a = p.acceleration
    cfg = ResponseConfig(omega, window=window, step=step, epsilons=epsilons, order=order)
    window_r, step_r, eps = _resolve_config(cfg, a)
    values = []
    for lam in lambdas:
        lam2 = lam * lam

        def weight(u, _lam2=lam2):
            return test_fn(_lam2 * u)

        per_eps = [
            _fourier_value(omega, p, e, window_r, step_r, order, weight=weight) for e in eps
        ]
        v, _ = _richardson_halving(per_eps)
        values.append(float(v.real))
    if len(values) >= 3:
        r1a = (4.0 * values[-2] - values[-3]) / 3.0
        r1b = (4.0 * values[-1] - values[-2]) / 3.0
        limit = (16.0 * r1b - r1a) / 15.0
        residual = abs(limit - r1b)
    elif len(values) == 2:
        limit = (4.0 * values[-1] - values[-2]) / 3.0
        residual = abs(limit - values[-1])
    else:
        limit = values[-1]
        residual = float("nan")
    return ConvergenceReport(lambdas, tuple(values), float(limit), float(residual))


def vanhove_delta_check(g, f, lam, window=40.0, panels=400, order=16):
    """Integral of f(tau) (1/lam^2) g(tau/lam^2) dtau, evaluated after the
    substitution u = tau / lam^2 as integral f(lam^2 u) g(u) du.

    Converges to f(0) * integral(g) as lam -> 0. g must be integrable and
    effectively supported inside [-window, window]; f smooth.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    edges = np.linspace(-window, window, panels + 1)
    lam2 = lam * lam

    def fn(u):
        return np.asarray(f(lam2 * u)) * np.asarray(g(u))

    val = _panel_quadrature(fn, edges, order)
    return float(val.real)
