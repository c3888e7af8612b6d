"""Exception types shared across the toolkit."""


class JitterLabError(Exception):
    """Base class for all jitterlab errors."""


class IndefiniteMatrix(JitterLabError):
    """A matrix required to be positive (semi)definite failed its pivot or
    eigenvalue check."""


class UnstableModel(JitterLabError):
    """A VAR(1) transition matrix violates the spectral-radius stability
    condition."""


class SingularSystem(JitterLabError):
    """A dense linear solve failed (numerically singular system)."""


class SingularCovariance(JitterLabError):
    """A covariance matrix required to be strictly positive definite is not."""


class EmptyPassband(JitterLabError):
    """A band-pass specification selects no DFT bins."""


class SingularInnovation(JitterLabError):
    """The Kalman innovation covariance is singular or too ill-conditioned to
    invert (usually a vanishing pilot amplitude)."""


class SingularPrediction(JitterLabError):
    """A predicted state covariance in the smoother backward pass is singular
    or too ill-conditioned to invert."""
