"""Quantum stochastic calculus for inertial and uniformly accelerated observers.

Subpackages:

- ``kinematics``: special-relativistic kinematics, radar coordinates, wedge geometry
- ``ito``: symbolic quantum Ito algebra (Fock and thermal bases), frame scaling
- ``open_system``: Lindblad generators, master-equation integration, exact detector solution
- ``noise``: truncated-Fock noise slices, doubled thermal increments, collision-model QSDE
- ``unruh``: two-point functions, van Hove rescaling, detector response rates
- ``cli``: the ``qsc`` command-line interface
- ``kernels``: stepping loops with an optional compiled backend
"""

from . import ito, kinematics, noise, open_system, unruh  # noqa: F401

__version__ = "0.1.0"
