"""Exception types shared across the package."""


class BiwhithamError(Exception):
    """Base class for all package-specific failures."""


class ShapeError(BiwhithamError, ValueError):
    """Input array length inconsistent with the grid."""


class SingularInputError(BiwhithamError, ValueError):
    """Profile values hit a pole of the model nonlinearity."""


class SeedDegenerateError(BiwhithamError, ValueError):
    """Local bifurcation expansion is degenerate at this wavenumber."""


class RootFindError(BiwhithamError, RuntimeError):
    """Scalar/low-dimensional Newton failed to converge."""


class CorrectorError(BiwhithamError, RuntimeError):
    """Newton corrector diverged or hit the iteration cap.

    Carries the last iterate and residual history for diagnostics.
    """

    def __init__(self, message, last_iterate=None, residual_history=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual_history = residual_history or []


class TangentError(BiwhithamError, RuntimeError):
    """Augmented tangent system is singular (fold mishandled)."""


class ResolutionError(BiwhithamError, ValueError):
    """Requested more Fourier modes than the collocation data resolves."""


class TargetRangeError(BiwhithamError, ValueError):
    """Requested waveheight outside the computed branch range."""

    def __init__(self, message, attainable=None):
        super().__init__(message)
        self.attainable = attainable


class BlowUpError(BiwhithamError, RuntimeError):
    """Time evolution produced NaN/Inf or exceeded the max-norm cap."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class EigenError(BiwhithamError, RuntimeError):
    """Dense eigensolver failed to converge for one Bloch slice."""

    def __init__(self, message, mu=None):
        super().__init__(message)
        self.mu = mu
