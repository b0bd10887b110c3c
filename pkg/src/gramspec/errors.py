"""Exception types shared across the package."""


class GramspecError(Exception):
    """Base class for all library errors."""


class ScalarModeError(GramspecError, TypeError):
    """Mixed or unsupported scalar modes in an arithmetic operation."""


class NvarsMismatch(GramspecError, ValueError):
    """Operands are polynomials in different numbers of variables."""


class NewtonPolytopeViolation(GramspecError, ValueError):
    """A monomial of f cannot be produced by products over the basis polytope.

    Carries the offending exponent vector in ``exponent``.
    """

    def __init__(self, exponent, message=None):
        self.exponent = tuple(exponent)
        super().__init__(message or f"monomial with exponent {self.exponent} "
                         "is not a sum of two lattice points of the basis polytope")


class NotPSD(GramspecError, ValueError):
    """A matrix required to be positive semidefinite is not."""


class RealRoot(GramspecError, ValueError):
    """A binary form required to be strictly positive has a real projective zero."""


class RepeatedRoot(GramspecError, ValueError):
    """A binary form required to have distinct roots has a (near-)repeated root."""


class Infeasible(GramspecError, ValueError):
    """The semidefinite problem has no feasible point."""


class NumericalFailure(GramspecError, RuntimeError):
    """An iterative routine failed to reach its tolerance."""
