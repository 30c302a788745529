"""Chiral coupling of two atoms through the guided and radiation modes of a nanofiber."""

__version__ = "0.1.0"

from .coupling import AtomSpec, CouplingCoefficients, Numerics, compute_coefficients  # noqa: E402
from .dynamics import Trajectory, TwoAtomState, build_initial_state, evolve  # noqa: E402
from .guided import FiberSpec, GuidedModeIndex, omega_from_wavelength, solve_mode  # noqa: E402

__all__ = [
    "AtomSpec",
    "CouplingCoefficients",
    "FiberSpec",
    "GuidedModeIndex",
    "Numerics",
    "Trajectory",
    "TwoAtomState",
    "build_initial_state",
    "compute_coefficients",
    "evolve",
    "omega_from_wavelength",
    "solve_mode",
]
