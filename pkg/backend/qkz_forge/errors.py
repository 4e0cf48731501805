"""Exception hierarchy for the engine.

Failures of a mathematical check derive from CheckFailed; the CLI turns those
into exit code 1. Everything else signals bad input or an internal bug.
"""


class QkzForgeError(Exception):
    """Root of every error raised by the engine."""


class UsageError(QkzForgeError):
    """Invalid command-line or library input."""


# Arithmetic

class DivisionByZero(QkzForgeError, ZeroDivisionError):
    """Division by the zero field element."""


class SubstitutionPole(QkzForgeError):
    """A denominator vanishes identically under a substitution."""


class UnsupportedVariable(QkzForgeError):
    """An element mentions a variable the operation cannot handle."""


class SamplePole(QkzForgeError):
    """No pole-free sample point was found."""


# Laurent polynomials and weights

class AmbiguousLeading(QkzForgeError):
    """The support has no unique maximal element for the partial order."""


class OddOnly(QkzForgeError):
    """The weight family only exists for odd N."""


class NotAdmissible(QkzForgeError):
    """The weight contains a neighbourhood pair."""


# Hecke operators and Koornwinder polynomials

class NonPolynomialResult(QkzForgeError):
    """An exact division left a remainder."""


class DegenerateEigenvalue(QkzForgeError):
    """An intertwiner denominator vanishes on the given eigenvalues."""


class SolveAmbiguous(QkzForgeError):
    """The triangular eigen-solve hit a repeated eigenvalue."""


class VerifyFailed(QkzForgeError):
    """A computed polynomial failed its eigen-equations."""


class SpecializationPole(QkzForgeError):
    """A Koornwinder polynomial is singular at the specialization."""


class NotInSpan(QkzForgeError):
    """A polynomial is not a combination of the given Koornwinder basis."""


# Mathematical checks

class CheckFailed(QkzForgeError):
    """A verified identity does not hold."""

    def __init__(self, relation: str, detail: str = ""):
        self.relation = relation
        message = f"Check failed: {relation}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class RelationFailed(CheckFailed):
    """An algebra relation does not hold in the matrix representation."""


class IdentityFailed(CheckFailed):
    """A Yang-Baxter, reflection or unitarity identity does not hold."""


class KLViolation(CheckFailed):
    """A Kazhdan-Lusztig vector breaks triangularity or coefficient rules."""


class EquationFailed(CheckFailed):
    """A qKZ equation does not hold on a state."""


class VanishingFailed(CheckFailed):
    """A component does not vanish on a required line."""


class NoSolution(CheckFailed):
    """The qKZ linear system has only the zero solution."""


class NonUniqueSolution(CheckFailed):
    """The qKZ solution space has dimension greater than one."""
