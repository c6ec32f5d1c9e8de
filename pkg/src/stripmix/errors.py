"""Exception types shared across modules.

The CLI maps :class:`DomainError` subclasses to exit code 3 and
:class:`ResourceCap` subclasses to exit code 4.
"""


class StripmixError(Exception):
    pass


class DomainError(StripmixError, ValueError):
    """An input outside an operation's precondition."""


class ResourceCap(StripmixError):
    """A requested computation exceeds a fixed size cap."""


class ExcludedPoint(DomainError):
    """Evaluation point is (numerically) a root of the discriminant."""


class DegenerateRoot(StripmixError, ArithmeticError):
    """Q'(1/r) vanished to working precision at the Perron root."""


class AxiomViolation(StripmixError, AssertionError):
    """A constructed PIP failed one of its axioms; this is a bug, not bad input."""


class TooSmall(DomainError):
    """Strip or path too small for the low inconsistent pair to exist."""


class SeparationFailure(StripmixError, AssertionError):
    """Removing the separator did not split the kernel graph as predicted."""


class IsolatedVertex(DomainError):
    """A vertex with no local moves; the lazy simple chain is undefined."""


class ConvergenceFailure(StripmixError, ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class HeavySide(DomainError):
    """The cut set has stationary mass above 1/2."""


class TooLarge(ResourceCap):
    pass
