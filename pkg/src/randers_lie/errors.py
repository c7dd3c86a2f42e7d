"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for every error raised by this package."""


class InputError(GeometryError):
    """Malformed or invalid input: shapes, symmetry, Jacobi, definiteness."""


class DegenerateFieldError(GeometryError):
    """The deforming vector field is (numerically) zero."""


class ValidityError(GeometryError):
    """A Randers validity bound on the deforming field is violated."""


class PreconditionError(GeometryError):
    """A Douglas or Berwald precondition of a closed form does not hold."""


class ParameterError(GeometryError):
    """Catalog parameters outside their admissible range."""
