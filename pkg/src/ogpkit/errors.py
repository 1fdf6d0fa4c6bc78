"""Exception hierarchy shared across the package.

Every domain error derives from ShapeError so the CLI can map any of them
to a single exit code.
"""


class ShapeError(Exception):
    """Base class for all domain errors raised by shape operations."""


# poset construction / queries

class DanglingFace(ShapeError):
    pass


class BadGrading(ShapeError):
    pass


class EmptySide(ShapeError):
    pass


class Overlap(ShapeError):
    pass


class UnknownElement(ShapeError):
    pass


# molecule constructors

class BoundaryMismatch(ShapeError):
    pass


class NotRewritable(ShapeError):
    pass


class LevelOutOfRange(ShapeError):
    pass


class NotRound(ShapeError):
    pass


class ZeroDimensional(ShapeError):
    pass


class DimMismatch(ShapeError):
    pass


# cylinders

class KNotClosed(ShapeError):
    pass


class BadCollapseSet(ShapeError):
    pass


# marked structures

class NotEntire(ShapeError):
    pass


# horns and contexts

class NotAFacet(ShapeError):
    pass


class NotAContext(ShapeError):
    pass


class ClauseViolation(ShapeError):
    pass


class IdentityFailed(ShapeError):
    """A checked identity between inclusions failed; carries a certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate or {}


class RecognitionFailed(ShapeError):
    """Re-recognition of a constructed object failed; carries a certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate or {}


# harness

class UnknownLemma(ShapeError):
    pass


class BoundExceeded(ShapeError):
    """A bounded search was asked to run past its configured size cap."""


# expression language

class ExprSyntaxError(Exception):
    """Parse error with position information. Not a ShapeError: the CLI
    maps it to a distinct exit code."""

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class EvalError(ShapeError):
    """Domain error during expression evaluation, annotated with the
    expression path at which it occurred."""

    def __init__(self, path, cause):
        super().__init__(f"at {path}: {cause}")
        self.path = path
        self.cause = cause
