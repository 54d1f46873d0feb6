"""Exception hierarchy shared by all subspectral modules.

Every error that a public operation can raise is defined here so that the CLI
can map them onto stable exit codes and callers can catch a single base class.
"""

from __future__ import annotations


class SubspectralError(Exception):
    """Base class for all library-specific errors."""


class ConfigError(SubspectralError):
    """Malformed or inconsistent configuration input."""


class BudgetExceeded(SubspectralError):
    """A guarded expansion would exceed the caller-supplied length budget."""


class NotPrimitive(SubspectralError):
    """The substitution matrix is not primitive (no strictly positive power)."""


class NotFound(SubspectralError):
    """A bounded search exhausted its budget without finding the object."""


class NotInLanguage(SubspectralError):
    """The given word is not a factor of the substitution language."""


class NotSquarefree(SubspectralError):
    """The polynomial has repeated roots; certified isolation is impossible."""


class PrecisionExhausted(SubspectralError):
    """Escalating precision hit the configured cap before certification."""


class WrongClass(SubspectralError):
    """An algebraic hypothesis (e.g. a conjugate outside the unit circle) fails."""


class HalfIntegerAmbiguity(SubspectralError):
    """A nearest-integer rounding landed exactly on a half integer."""


class RepeatedEigenvalue(SubspectralError):
    """The matrix has a repeated eigenvalue where distinct ones are required."""


class ZeroEigenvalue(SubspectralError):
    """The matrix has a zero eigenvalue where invertibility is required."""


class RadiusTooLarge(SubspectralError):
    """A ball radius exceeds the admissible range of the kernel bound."""


class NotMeanZero(SubspectralError):
    """The test function has nonzero mean where mean zero is required."""


class TailNotConverged(SubspectralError):
    """An infinite-product/series tail failed to meet its tolerance."""


class DegenerateF(SubspectralError):
    """The observable is degenerate (identically zero or constant)."""
