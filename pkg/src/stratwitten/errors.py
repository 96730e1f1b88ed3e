"""Exception hierarchy shared by all modules."""


class StratWittenError(Exception):
    """Base class for every error raised by the package."""


class InadmissibleDomainError(StratWittenError, ValueError):
    """A boundary exponent or core has sigma <= -1/2."""


class BasisDepthError(StratWittenError, ValueError):
    """Requested polynomial index exceeds the recurrence depth cap."""


class QuadratureError(StratWittenError, ArithmeticError):
    """A quadrature produced a non-finite value."""


class DegreeRangeError(StratWittenError, ValueError):
    """A form degree lies outside the admissible range."""


class MismatchedSError(StratWittenError, ValueError):
    """Spectrum tables built with different deformation parameters."""


class MissingDataError(StratWittenError, ValueError):
    """Betti numbers or sphere data needed for a computation are absent."""


class InsufficientDataError(StratWittenError, ValueError):
    """Too few eigenvalues for a statistical fit."""


class EigensolverError(StratWittenError, RuntimeError):
    """The finite-difference eigensolver did not return the requested modes."""


class SchemaError(StratWittenError, ValueError):
    """Input document violates the expected schema.

    Parameters
    ----------
    message : str
        Human readable description.
    pointer : str
        JSON pointer to the offending location ("" for the root).
    """

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.detail = message
