class KickedTopsError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(KickedTopsError, ValueError):
    """Invalid physical or numerical parameter."""


class DimensionError(KickedTopsError, ValueError):
    """State or operator dimensions do not match."""


class ResourceError(KickedTopsError):
    """Requested computation exceeds a configured size cap."""


class DegenerateSpectrumError(KickedTopsError):
    """Eigenphase spacing fell below the degeneracy tolerance."""


class ConvergenceError(KickedTopsError):
    """A numerical routine failed to reach its accuracy target."""
