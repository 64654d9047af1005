"""Symbolic algebra of quantum Ito increments with operator-valued coefficients.

An expression is a finite sum ``sum_m X_m * dM_m`` where each coefficient
``X_m`` is a d x d complex matrix on the system space (a plain scalar when
d = 1) and ``dM_m`` is a noise increment from one of two bases:

- Fock basis: ``dL`` (gauge/counting), ``dB`` (annihilation), ``dB+``
  (creation), ``dt``;
- thermal basis at occupation n: ``dA``, ``dA+``, ``dt``. A gauge increment
  does not exist in the thermal calculus and is rejected at construction.

Products of increments follow the Ito multiplication table. In the Fock
basis the nonzero products are ``dL dL = dL``, ``dB dL = dB``,
``dL dB+ = dB+`` and ``dB dB+ = dt``; in the thermal basis they are
``dA dA+ = (n+1) dt`` and ``dA+ dA = n dt``. Every unlisted product is zero.
Coefficients multiply left to right and commute with the increments.

Rendering grammar (used by ``render`` / ``str``, stable for golden files)::

    expression  := "0" | term (" + " term)*
    term        := coefficient "*" increment
    increment   := "dL" | "dB" | "dB+" | "dt" | "dA" | "dA+"
    coefficient := scalar | "[" row ("; " row)* "]"
    row         := scalar ("," scalar)*
    scalar      := %.10g float, or "(re+imj)" for complex values

Frame changes between inertial observers act diagonally on the increments:
the gauge increment is invariant, ``dB``/``dB+`` (and ``dA``/``dA+``) pick up
sqrt(zeta), and ``dt`` picks up zeta, where zeta is the coordinate-time ratio
of the two frames. The time multiplier is computed as sqrt(zeta)*sqrt(zeta)
so that scaling commutes with the Ito table bit-exactly, not just to
rounding. Bose and Fermi noises transform identically; the statistics tag
exists only to record which is meant.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .open_system import HPTriple
from .operators import dag


class BasisMismatchError(ValueError):
    """Operands live in different bases (or thermal bases with different n)."""


class GaugeInThermalError(ValueError):
    """A gauge increment was used in the thermal basis, where none exists."""


class Increment(Enum):
    GAUGE = "dL"
    ANNIH = "dB"
    CREAT = "dB+"
    TIME = "dt"
    T_ANNIH = "dA"
    T_CREAT = "dA+"

    def __str__(self):
        return self.value


FOCK_INCREMENTS = (Increment.GAUGE, Increment.ANNIH, Increment.CREAT, Increment.TIME)
THERMAL_INCREMENTS = (Increment.T_ANNIH, Increment.T_CREAT, Increment.TIME)


@dataclass(frozen=True)
class Basis:
    """Noise basis tag; thermal bases carry their occupation so that mixing
    different n is a type error."""

    kind: str
    occupation: float | None = None

    def __post_init__(self):
        if self.kind not in ("fock", "thermal"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.kind == "thermal":
            if self.occupation is None or self.occupation < 0:
                raise ValueError("thermal basis needs occupation n >= 0")
        elif self.occupation is not None:
            raise ValueError("fock basis carries no occupation")

    @property
    def increments(self):
        return FOCK_INCREMENTS if self.kind == "fock" else THERMAL_INCREMENTS

    def __str__(self):
        if self.kind == "fock":
            return "fock"
        return f"thermal(n={self.occupation:g})"


FOCK = Basis("fock")


def thermal(n):
    return Basis("thermal", float(n))


class Statistics(Enum):
    BOSE = "bose"
    FERMI = "fermi"


@dataclass(frozen=True)
class FrameScaling:
    """Diagonal frame action on increments for a coordinate-time ratio zeta > 0."""

    zeta: float
    statistics: Statistics = Statistics.BOSE
    sqrt_zeta: float = field(init=False)

    def __post_init__(self):
        if not self.zeta > 0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")
        object.__setattr__(self, "sqrt_zeta", float(np.sqrt(self.zeta)))

    def multiplier(self, inc):
        # dt multiplier is sqrt(zeta)**2 so that scale-then-multiply and
        # multiply-then-scale agree bit-exactly on the Ito table.
        if inc is Increment.GAUGE:
            return 1.0
        if inc is Increment.TIME:
            return self.sqrt_zeta * self.sqrt_zeta
        return self.sqrt_zeta


def _validate_increment(basis, inc):
    if inc in basis.increments:
        return
    if basis.kind == "thermal" and inc is Increment.GAUGE:
        raise GaugeInThermalError("the thermal calculus has no gauge increment")
    raise BasisMismatchError(f"increment {inc} does not belong to basis {basis}")


class ItoExpression:
    """Formal sum of increments with matrix coefficients on the system space."""

    def __init__(self, basis, terms, dim=None):
        self.basis = basis
        coerced = {}
        for inc, coeff in terms.items():
            _validate_increment(basis, inc)
            c = np.atleast_2d(np.asarray(coeff, dtype=complex))
            if c.ndim != 2 or c.shape[0] != c.shape[1]:
                raise ValueError(f"coefficient of {inc} must be square, got shape {c.shape}")
            if dim is None:
                dim = c.shape[0]
            elif c.shape[0] != dim:
                raise ValueError(
                    f"coefficient of {inc} has dimension {c.shape[0]}, expected {dim}"
                )
            c = c.copy()
            c.setflags(write=False)
            coerced[inc] = c
        self.dim = 1 if dim is None else dim
        self._terms = coerced

    @property
    def terms(self):
        return dict(self._terms)

    def coefficient(self, inc):
        _validate_increment(self.basis, inc)
        if inc in self._terms:
            return self._terms[inc]
        return np.zeros((self.dim, self.dim), dtype=complex)

    def max_abs(self):
        if not self._terms:
            return 0.0
        return max(float(np.max(np.abs(c))) for c in self._terms.values())

    def is_zero(self, tol=1e-12):
        return self.max_abs() < tol

    def _require_compatible(self, other):
        if self.basis != other.basis:
            raise BasisMismatchError(f"bases differ: {self.basis} vs {other.basis}")
        if self.dim != other.dim:
            raise ValueError(f"coefficient dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._require_compatible(other)
        out = {}
        for inc in self.basis.increments:
            if inc in self._terms or inc in other._terms:
                out[inc] = self.coefficient(inc) + other.coefficient(inc)
        return ItoExpression(self.basis, out, dim=self.dim)

    def __mul__(self, scalar):
        return ItoExpression(
            self.basis,
            {inc: c * complex(scalar) for inc, c in self._terms.items()},
            dim=self.dim,
        )

    __rmul__ = __mul__

    def dagger(self):
        """Adjoint: conjugate-transpose coefficients, swap annihilation and creation."""
        swap = {
            Increment.ANNIH: Increment.CREAT,
            Increment.CREAT: Increment.ANNIH,
            Increment.T_ANNIH: Increment.T_CREAT,
            Increment.T_CREAT: Increment.T_ANNIH,
        }
        out = {swap.get(inc, inc): dag(c) for inc, c in self._terms.items()}
        return ItoExpression(self.basis, out, dim=self.dim)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"ItoExpression({self.basis}, {render(self)})"


def monomial(basis, inc, coeff=1.0, dim=1):
    """Single-increment expression; scalar coefficients live on a 1-dim system."""
    c = np.asarray(coeff, dtype=complex)
    if c.ndim == 0:
        c = c * np.eye(dim, dtype=complex) if dim > 1 else c.reshape(1, 1)
    return ItoExpression(basis, {inc: c})


_FOCK_TABLE = {
    (Increment.GAUGE, Increment.GAUGE): (Increment.GAUGE, 1.0),
    (Increment.ANNIH, Increment.GAUGE): (Increment.ANNIH, 1.0),
    (Increment.GAUGE, Increment.CREAT): (Increment.CREAT, 1.0),
    (Increment.ANNIH, Increment.CREAT): (Increment.TIME, 1.0),
}


def ito_table(basis):
    """Nonzero increment products for a basis, as {(m1, m2): (m3, multiplier)}."""
    if basis.kind == "fock":
        return dict(_FOCK_TABLE)
    n = basis.occupation
    return {
        (Increment.T_ANNIH, Increment.T_CREAT): (Increment.TIME, n + 1.0),
        (Increment.T_CREAT, Increment.T_ANNIH): (Increment.TIME, n),
    }


def ito_product(e1, e2):
    """Bilinear extension of the Ito table; coefficients multiply left to right."""
    e1._require_compatible(e2)
    table = ito_table(e1.basis)
    out = {}
    for (m1, c1) in e1._terms.items():
        for (m2, c2) in e2._terms.items():
            hit = table.get((m1, m2))
            if hit is None:
                continue
            m3, mult = hit
            contrib = (c1 @ c2) * mult
            if m3 in out:
                out[m3] = out[m3] + contrib
            else:
                out[m3] = contrib
    return ItoExpression(e1.basis, out, dim=e1.dim)


def frame_scale(e, f):
    """Rescale an expression into another inertial frame.

    Multipliers: gauge 1, annihilation/creation sqrt(zeta), time zeta. The
    same multipliers apply in the Fock and thermal bases, and to Bose and
    Fermi statistics alike.
    """
    out = {inc: c * f.multiplier(inc) for inc, c in e._terms.items()}
    return ItoExpression(e.basis, out, dim=e.dim)


def hp_generator(tr: HPTriple):
    """Generator of a unitary quantum stochastic evolution from an (S, L, H) triple.

    Returns (S - I) dL + L dB+ - L*S dB - (L*L/2 + iH) dt in the Fock basis.
    """
    d = tr.dim
    eye = np.eye(d, dtype=complex)
    return ItoExpression(
        FOCK,
        {
            Increment.GAUGE: tr.S - eye,
            Increment.CREAT: tr.L,
            Increment.ANNIH: -dag(tr.L) @ tr.S,
            Increment.TIME: -(0.5 * dag(tr.L) @ tr.L + 1j * tr.H),
        },
        dim=d,
    )


def unitarity_defect(g):
    """Left-unitarity defect G + G* + G*G of a Fock-basis generator.

    Vanishes identically when G comes from hp_generator with S unitary and H
    self-adjoint; the expansion mirrors d(U*U) for dU = (dG)U.
    """
    if g.basis.kind != "fock":
        raise BasisMismatchError("unitarity defect is defined for Fock-basis generators")
    gd = g.dagger()
    return g + gd + ito_product(gd, g)


def validate_basis(e):
    """Check every increment of an expression against its declared basis.

    Construction already enforces this; the function re-asserts it for
    expressions arriving from elsewhere and returns the expression unchanged.
    """
    for inc in e._terms:
        _validate_increment(e.basis, inc)
    return e


def _format_scalar(z):
    re = z.real + 0.0  # drop negative-zero signs
    im = z.imag + 0.0
    if im == 0.0:
        return "%.10g" % re
    return "(%.10g%+.10gj)" % (re, im)


def _format_coefficient(c):
    if c.shape == (1, 1):
        return _format_scalar(c[0, 0])
    rows = [",".join(_format_scalar(z) for z in row) for row in c]
    return "[" + "; ".join(rows) + "]"


def render(e):
    """Deterministic plain-text rendering, increments in canonical basis order."""
    parts = []
    for inc in e.basis.increments:
        if inc in e._terms:
            parts.append(f"{_format_coefficient(e._terms[inc])}*{inc.value}")
    return " + ".join(parts) if parts else "0"
