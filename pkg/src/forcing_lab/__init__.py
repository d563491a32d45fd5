"""Desk-scale forcing theory: subshifts of finite type, interval forcing,
rotation sets of torus lifts, and a planar forcing calculus."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DeductionError,
    DomainError,
    ForcingError,
    GuardError,
    IndeterminateBoundary,
    InputError,
    PreconditionError,
    ScenarioError,
    WitnessNotFound,
)

__all__ = [
    "DeductionError", "DomainError", "ForcingError", "GuardError", "IndeterminateBoundary",
    "InputError", "PreconditionError", "ScenarioError", "WitnessNotFound", "__version__",
]
