"""Exception hierarchy.

``InvalidInputError`` and its subclasses signal bad user input (CLI exit
status 1).  ``InternalInvariantError`` and ``ContradictionError`` signal that
an assumption the algorithms rely on was violated at runtime (exit status 2).
"""


class NFBasisError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(NFBasisError, ValueError):
    pass


class NotFullColumnRankError(InvalidInputError):
    pass


class UnsupportedDimensionError(InvalidInputError):
    pass


class SingularConfigurationError(InvalidInputError):
    """Two bodies at the same position (the 1/r potential is singular)."""


class MatrixParseError(InvalidInputError):
    def __init__(self, message, line=None, token=None):
        self.line = line
        self.token = token
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalInvariantError(NFBasisError, RuntimeError):
    pass


class ContradictionError(InternalInvariantError):
    """A computed quantity contradicts a proven property, e.g. ``A s == 0``
    for ``s != 0`` although ``A`` was accepted as full column rank."""


class CloseApproachError(NFBasisError, RuntimeError):
    pass
