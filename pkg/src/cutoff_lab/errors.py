"""Exception hierarchy shared by all modules."""


class CutoffLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CutoffLabError, ValueError):
    """An input violates a documented invariant."""


class DomainError(CutoffLabError, ValueError):
    """A quantity is requested outside the domain where it is defined."""


class Unstable(CutoffLabError, ValueError):
    """Some characteristic root has modulus >= 1."""


class OutOfRange(CutoffLabError, ValueError):
    """A discretization step lies outside the stability range."""


class ZeroSolution(CutoffLabError, ValueError):
    """The initial data are identically zero, so no asymptotic profile exists."""


class NumericalError(CutoffLabError, ArithmeticError):
    """Base class for floating point failures (CLI exit code 2)."""


class NonConvergence(NumericalError):
    """Root polishing did not reach the residual tolerance."""


class IllConditioned(NumericalError):
    """A linear solve is too ill-conditioned to trust."""
