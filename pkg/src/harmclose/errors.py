"""Exception types raised by the library."""


class HarmcloseError(Exception):
    """Base class for all library errors."""


class DomainError(HarmcloseError, ValueError):
    """A point or radius lies outside the region where an operation is defined."""


class ParameterError(HarmcloseError, ValueError):
    """A family or checker parameter is out of its admissible range."""


class ConstraintError(HarmcloseError, ValueError):
    """A constructor precondition (|b| < 1, c_0 = 2, valid sequence) is violated."""


class SingularDerivativeError(HarmcloseError, ArithmeticError):
    """h'(z) is numerically zero at a sampled point."""

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = list(points)


class CuspProximityError(HarmcloseError, ArithmeticError):
    """The traced tangent w'(t) nearly vanishes at sampled parameters."""

    def __init__(self, message, t_values=()):
        super().__init__(message)
        self.t_values = list(t_values)


class SpecParseError(HarmcloseError, ValueError):
    """A map specification document is malformed."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class SpecValidationError(HarmcloseError, ValueError):
    """A map specification is well formed but violates an invariant."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
