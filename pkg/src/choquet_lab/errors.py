"""Exception hierarchy shared by all modules."""


class ChoquetError(Exception):
    """Base class for every error raised by the package."""


class DimensionMismatch(ChoquetError, ValueError):
    pass


class UnboundedPolyhedron(ChoquetError):
    pass


class PointNotInHull(ChoquetError):
    pass


class DegenerateInput(ChoquetError, ValueError):
    pass


class SmoothNormUnsupported(ChoquetError):
    """An exact polytope path was asked to handle a smooth l_p norm."""

    def __init__(self, operation: str):
        super().__init__(f"{operation}: smooth l_p norms have no exact polytope path")
        self.operation = operation


class NotOnSphere(ChoquetError, ValueError):
    pass


class SamePoint(ChoquetError, ValueError):
    pass


class NoConstants(ChoquetError):
    pass


class NoConstantsInHw(NoConstants):
    pass


class NotWeaklySimplicial(ChoquetError):
    pass


class NegativeMeasure(ChoquetError, ValueError):
    pass


class BarycenterMismatch(ChoquetError, ValueError):
    pass


class NotInNMu(ChoquetError, ValueError):
    pass


class NotMaximal(ChoquetError, ValueError):
    pass


class MassMismatch(ChoquetError):
    """Two quantities that must agree by theory did not; an implementation fault."""


class InvariantViolation(ChoquetError):
    """A cross-check between independent computations failed."""


class InputError(ChoquetError, ValueError):
    """Malformed problem file or command-line input."""
