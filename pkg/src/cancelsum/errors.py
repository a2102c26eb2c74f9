"""Exception taxonomy shared by all cancelsum modules.

The CLI maps these onto its exit-code contract: domain/usage problems
exit 2, violated identities exit 1, resource limits exit 3.
"""


class CancelsumError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CancelsumError, ValueError):
    """Invalid parameters or an argument outside an operation's domain."""


class EmptyRangeError(DomainError):
    """An alternating sum was requested over an empty index range."""


class PrecisionError(CancelsumError):
    """The precision context is insufficient for the requested evaluation."""


class QuadratureError(CancelsumError):
    """Contour quadrature failed: pole too close, branch cut touched, or
    refinement did not converge within the level budget."""


class ResourceError(CancelsumError):
    """A computation exceeds the configured memory/size budget."""


class DegreeMismatchError(CancelsumError):
    """Finite differences of f_r samples did not stabilize to the expected
    degree; signals an implementation bug, not a mathematical failure."""


class DegenerateFitError(DomainError):
    """Least-squares exponent fit has no spread in sqrt(x)."""
