"""Exception types shared across the package."""


class StokesOutflowError(Exception):
    """Base class for all package-specific errors."""


class CPViolation(StokesOutflowError):
    """Parameter set violates alpha*V + 1/Re > 0."""


class BranchCut(StokesOutflowError):
    """Shifted Laplace variable lies on the closed negative real axis."""


class SingularSymbol(StokesOutflowError):
    """A boundary-symbol denominator is numerically zero."""


class SingularBoundarySystem(StokesOutflowError):
    """The assembled per-mode boundary system is numerically singular."""


class ZeroTangentialMode(StokesOutflowError):
    """Operation requires a nonzero tangential wave vector."""


class ZeroModeIncompatible(StokesOutflowError):
    """Mean of the prescribed normal trace must vanish for this condition."""


class SingularDiscreteSystem(StokesOutflowError):
    """Factorization of a discrete (banded) system failed."""


class ParityIncompatible(StokesOutflowError):
    """Odd extension requested for data with nonvanishing plane trace."""


class EdgeCompatibilityViolated(StokesOutflowError):
    """Boundary data fails an edge compatibility condition."""


class MissingTrace(StokesOutflowError):
    """A required trace or derivative field was not supplied."""


class NonSolenoidal(StokesOutflowError):
    """Velocity field fails the discrete divergence-free precondition."""


class ParseError(StokesOutflowError):
    """Scenario text could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKey(ParseError):
    """Scenario contains a key that is not recognized."""
