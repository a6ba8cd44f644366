"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class TensorRhoError(Exception):
    exit_code = 1


class InputError(TensorRhoError, ValueError):
    """Malformed or inconsistent problem data."""

    exit_code = 2


class UnsupportedError(InputError):
    """A valid object outside the supported class (degree, exponent, quasi data)."""


class CoercivityError(InputError):
    """The objective is not coercive; ``witness`` is a recession direction."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ReducibilityError(TensorRhoError):
    """The polynomial map is not weakly irreducible."""

    exit_code = 3

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components


class PrecisionError(TensorRhoError, ArithmeticError):
    """The ellipsoid run lost its certificate; retry with higher precision."""

    exit_code = 4
