"""Exception hierarchy for the workbench.

User-facing errors derive from :class:`NcvxError` and map to CLI exit code 1.
:class:`InternalCheckError` signals a violated internal certificate or
invariant and maps to exit code 2; it should never fire on valid input.
"""


class NcvxError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(NcvxError):
    """Operands have incompatible ambient dimensions or shapes."""


class EmptySetError(NcvxError):
    """Operation requires a nonempty set."""


class EmptyInputError(NcvxError):
    """Operation requires a nonempty collection of operands."""


class FidelityError(NcvxError):
    """Pointwise query on an object that only carries its near-equality class."""


class NotNearlyConvexError(NcvxError):
    """Operation requires a nearly convex operand."""


class UnsupportedClosureError(NcvxError):
    """Closure undecidable: a removed piece is full-dimensional in the carrier."""


class PointNotInSetError(NcvxError):
    """Base point does not belong to the set."""


class PointNotInGraphError(NcvxError):
    """Base pair does not belong to the mapping's graph."""


class PointNotInDomainError(NcvxError):
    """Base point does not belong to the function's domain."""


class QualificationFailedError(NcvxError):
    """A relative-interior qualification condition does not hold."""


class MalformedEpigraphError(NcvxError):
    """Set in epigraph position is not upward closed in the last coordinate."""


class UnknownTheoremIdError(NcvxError):
    """Requested theorem id is not part of the battery."""


class DefinitionSyntaxError(NcvxError):
    """Syntax error in a workbench definition file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateNameError(NcvxError):
    """Two definitions of the same kind share a name."""


class UnresolvedReferenceError(NcvxError):
    """A definition or command refers to a name that was never defined."""


class InternalCheckError(NcvxError):
    """An exact self-check failed; indicates a bug, not a user error."""
