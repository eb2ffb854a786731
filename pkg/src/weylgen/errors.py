"""Exception types shared across the package.

The CLI maps these onto exit codes: input/validation problems exit 2,
verification failures exit 1.
"""


class WeylgenError(Exception):
    """Base class for all package-specific errors."""


class ConductorMismatchError(WeylgenError, ValueError):
    """Arithmetic between cyclotomic numbers of incompatible conductors."""


class ArityMismatchError(WeylgenError, ValueError):
    """Operands disagree on the number of variables."""


class InexactDivisionError(WeylgenError, ArithmeticError):
    """Exact polynomial division was requested but the divisor does not divide."""


class SingularMatrixError(WeylgenError, ArithmeticError):
    """A matrix required to be invertible has zero determinant."""


class ClosureBoundExceededError(WeylgenError, RuntimeError):
    """Group closure enumeration passed the configured element bound."""


class NotReflectionGroupError(WeylgenError, ValueError):
    """The group is not generated by its pseudo-reflections."""


class InvalidInvariantsError(WeylgenError, ValueError):
    """Candidate fundamental invariants fail invariance or independence."""


class NotScalarMultipleError(WeylgenError, ValueError):
    """Two polynomials expected to agree up to a nonzero scalar do not."""


class OperatorOrderError(WeylgenError, RuntimeError):
    """Operator composition rejected: an operand exceeds the order cap."""


class GroupSpecError(WeylgenError, ValueError):
    """A group specification document is malformed."""


class VerificationError(WeylgenError):
    """A generator verification suite reported a failing check.

    Carries the full report so callers can inspect the failing check and
    its witness.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(f"verification failed: {report.summary()}")
