"""Exception hierarchy shared by all modules.

The CLI maps :class:`InputError` (and its subclasses raised while loading a
scenario) to exit status 2 and every other :class:`ForcingError` to 1.
"""


class ForcingError(Exception):
    """Base class for every error raised by forcing_lab."""


class InputError(ForcingError, ValueError):
    """Malformed or out-of-range input."""


class DomainError(ForcingError, ArithmeticError):
    """The operation is undefined for this (otherwise well-formed) input."""


class GuardError(ForcingError):
    """An exhaustive enumeration was refused because it exceeds its guard."""


class DeductionError(ForcingError):
    """A forcing deduction was requested on data that does not support it."""


class PreconditionError(ForcingError):
    """A geometric precondition failed; ``condition`` names which one."""

    def __init__(self, condition, message):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class WitnessNotFound(ForcingError):
    """No disjoint pair of witness arcs exists in the restricted arc family."""


class IndeterminateBoundary(ForcingError):
    """The displacement field (nearly) vanishes on a box boundary.

    ``point`` is the offending boundary sample and ``norm`` the field norm
    there; such a point is itself an approximate solution.
    """

    def __init__(self, message, point=None, norm=None):
        super().__init__(message)
        self.point = point
        self.norm = norm


class ScenarioError(InputError):
    """A scenario file failed schema validation."""

    def __init__(self, message, path=()):
        loc = "/".join(str(p) for p in path)
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = tuple(path)
