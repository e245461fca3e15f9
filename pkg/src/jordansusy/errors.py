"""Exception types raised by the numerical kernels."""


class JordanSusyError(Exception):
    """Base class for all library errors."""


class NonConvergence(JordanSusyError):
    """A series did not meet its tolerance within the term budget."""


class PoleError(JordanSusyError):
    """A series parameter hit a pole (non-positive integer denominator)."""


class SingularIntegrand(JordanSusyError):
    """The solution vanishes on an integration path where it is inverted."""


class QuadFailure(JordanSusyError):
    """Adaptive quadrature could not reach its tolerance."""


class WronskianNotUnit(JordanSusyError):
    """The fundamental pair handed to a routine is not normalised to W = 1."""


class WronskianZero(JordanSusyError):
    """The transformation Wronskian vanishes; the partner potential is singular."""


class LimitNotResolved(JordanSusyError):
    """An endpoint limit did not stabilise under refinement."""


class StepFailure(JordanSusyError):
    """ODE integration produced non-finite values."""
