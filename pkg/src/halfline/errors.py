"""Exception types shared across the package.

Input/precondition violations raise plain ValueError; everything that can
fail *numerically* (quadrature not converging, Newton stalling, a branch
cut getting hit, ...) derives from NumericsError so callers can tell the
two failure classes apart.
"""


class NumericsError(RuntimeError):
    """A numerical procedure failed to reach its accuracy contract."""


class QuadratureError(NumericsError):
    """Adaptive quadrature did not reach the requested tolerance."""


class BranchCrossingError(NumericsError):
    """A square-root argument hit the branch cut (-inf, 0]."""


class ConvergenceError(NumericsError):
    """An iteration (Newton, ODE stepper) failed to converge."""


class HypothesisViolationError(NumericsError):
    """A formula was evaluated outside its validity hypothesis
    (e.g. counting function with non-real phase constants)."""


class IllConditionedError(NumericsError):
    """A least-squares system is too ill-conditioned to trust."""


class IndexCollisionError(NumericsError):
    """Two distinct eigenvalues were assigned the same index, or the
    inferred indices are not consecutive (seeds outside the asymptotic
    regime)."""


class CoverageWarning(UserWarning):
    """A count was requested beyond the scanned spectral window."""
