"""Exception types shared across the package."""


class ObcError(Exception):
    """Base class for all domain errors raised by this package."""


class ConductorMismatchError(ObcError):
    """Two field elements with different conductors were combined."""


class NotRealError(ObcError):
    """A real-only operation was applied to a non-real field element."""


class GeometryError(ObcError):
    """Invalid geometric input (degenerate polygon, empty input, ...)."""


class StepDomainError(ObcError):
    """The billiard step was applied at a point where it is undefined.

    ``kind`` is "singular" (point on a singular ray) or "inside" (point in
    the closed polygon).
    """

    def __init__(self, kind, message=None):
        self.kind = kind
        super().__init__(message or f"step undefined here: {kind}")


class IndeterminateFixedPointError(ObcError):
    """The fixed-point formula degenerates (0/0); use stability_limit."""


class CodeNotRealizableError(ObcError):
    """No open tile realizes the given code."""


class StabilityPreconditionError(ObcError):
    """The code fails the vanishing condition required for the limit point."""


class AtlasFormatError(ObcError):
    """An atlas file violates the line format."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
