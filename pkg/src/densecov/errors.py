"""Exception types shared across the package."""


class DensecovError(Exception):
    """Base class for all densecov errors."""


class InvalidScalar(DensecovError):
    """A numeric input is out of its allowed range (e.g. lambda <= 0)."""


class InvalidExponents(DensecovError):
    """Path loss exponents violate 0 <= alpha0 <= alpha1."""


class DivergentInterference(DensecovError):
    """alpha1 <= d: mean interference diverges, model rejected."""


class SingularParameter(DensecovError):
    """Hypergeometric kernel parameter hits a pole (e.g. alpha0 = 0)."""


class NoConvergence(DensecovError):
    """A series or adaptive quadrature failed to meet its tolerance."""


class DegenerateFit(DensecovError):
    """A log-log slope fit was requested on non-positive values."""
