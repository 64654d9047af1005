"""Special-relativistic kinematics in 1+1 dimensions.

Units have c = 1; velocities are dimensionless fractions of c. The two
transverse space dimensions are dropped everywhere.
"""

import math
from dataclasses import dataclass


class InvalidVelocityError(ValueError):
    """Speed outside the allowed domain (|v| < 1, light speed only where noted)."""


class OutsideWedgeError(ValueError):
    """Event does not lie inside the right Rindler wedge 0 <= |t| < x."""


@dataclass(frozen=True)
class Event:
    """Spacetime event (t, x)."""

    t: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError("event components must be finite")

    def interval(self):
        """Invariant t^2 - x^2."""
        return self.t * self.t - self.x * self.x


@dataclass(frozen=True)
class RadarCoord:
    """Radar (Rindler) coordinates (eta, xi) adapted to proper acceleration a."""

    eta: float
    xi: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"proper acceleration must be positive, got {self.a}")


def _check_speed(v, name="v", allow_light=False):
    v = float(v)
    if not math.isfinite(v):
        raise InvalidVelocityError(f"{name} must be finite")
    if allow_light:
        if abs(v) > 1.0:
            raise InvalidVelocityError(f"|{name}| must be <= 1, got {v}")
    elif abs(v) >= 1.0:
        raise InvalidVelocityError(f"|{name}| must be < 1, got {v}")
    return v


def gamma(v):
    """Time-dilation factor 1/sqrt(1 - v^2)."""
    v = _check_speed(v)
    return 1.0 / math.sqrt(1.0 - v * v)


def velocity_add(v, u):
    """Velocity of a body moving at v, as seen from a frame moving at u.

    v may be +-1 (light propagation is frame independent); u must be subluminal.
    """
    v = _check_speed(v, "v", allow_light=True)
    u = _check_speed(u, "u")
    denom = 1.0 - u * v
    if denom == 0.0:
        raise InvalidVelocityError("velocity composition undefined for u*v = 1")
    return (v - u) / denom


def zeta(u, v):
    """Coordinate-time ratio dt'/dt between frames, gamma(u)(1 - u v).

    Equals gamma(v')/gamma(v) with v' = velocity_add(v, u); zeta(v, v) = 1/gamma(v).
    """
    u = _check_speed(u, "u")
    v = _check_speed(v, "v")
    return gamma(u) * (1.0 - u * v)


def proper_time(dt, v):
    """Proper time elapsed along a worldline of speed v during coordinate time dt."""
    return float(dt) / gamma(v)


def lorentz_boost(e, u):
    """Boost an event into the frame moving at velocity u along x."""
    u = _check_speed(u, "u")
    g = gamma(u)
    return Event(g * (e.t - u * e.x), g * (e.x - u * e.t))


def radar_to_minkowski(r):
    """Map radar coordinates to Minkowski coordinates.

    t = (1/a) e^(a xi) sinh(a eta),  x = (1/a) e^(a xi) cosh(a eta).
    """
    scale = math.exp(r.a * r.xi) / r.a
    return Event(scale * math.sinh(r.a * r.eta), scale * math.cosh(r.a * r.eta))


def in_rindler_wedge(e, tol=1e-12):
    """Whether an event lies strictly inside the right wedge |t| < x.

    tol is the margin used to classify points on or near the horizon as outside.
    """
    return e.x > tol and e.x - abs(e.t) > tol


def minkowski_to_radar(e, a, tol=1e-12):
    """Invert the radar map for an event inside the right wedge.

    eta = (1/a) artanh(t/x),  xi = (1/2a) ln(a^2 (x^2 - t^2)).
    """
    if not a > 0:
        raise ValueError(f"proper acceleration must be positive, got {a}")
    if not in_rindler_wedge(e, tol):
        raise OutsideWedgeError(f"event (t={e.t}, x={e.x}) is outside the right Rindler wedge")
    eta = math.atanh(e.t / e.x) / a
    xi = math.log(a * a * (e.x * e.x - e.t * e.t)) / (2.0 * a)
    return RadarCoord(eta, xi, a)


def accelerated_worldline(tau, a):
    """Event at proper time tau on the uniformly accelerated worldline.

    The trajectory ((1/a) sinh(a tau), (1/a) cosh(a tau)) satisfies
    x^2 - t^2 = 1/a^2 and corresponds to radar coordinates eta = tau, xi = 0.
    """
    if not a > 0:
        raise ValueError(f"proper acceleration must be positive, got {a}")
    return Event(math.sinh(a * tau) / a, math.cosh(a * tau) / a)


def unruh_beta(a):
    """Inverse temperature 2 pi / a experienced at proper acceleration a (c = hbar = 1)."""
    if not a > 0:
        raise ValueError(f"proper acceleration must be positive, got {a}")
    return 2.0 * math.pi / a
