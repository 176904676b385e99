"""Exception types raised by the library."""


class LegendrePhaseError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(LegendrePhaseError, ValueError):
    pass


class ExcludedBranchError(LegendrePhaseError, ValueError):
    """Indicial exponent nu = -1/2, where the series is singular at tau = 0."""


class DegenerateBranchError(LegendrePhaseError, ValueError):
    """A recurrence denominator s + nu + 1 vanishes."""


class SeriesTruncationError(LegendrePhaseError, RuntimeError):
    """The tail bound was not met within ``max_terms`` coefficients."""


class SingularPointError(LegendrePhaseError, ValueError):
    """Evaluation at tau = 0 of a representation that is singular there."""


class UnmappableModeError(LegendrePhaseError, ValueError):
    """The hodograph Hessian vanishes identically (plane or degenerate mode)."""


class InversionError(LegendrePhaseError, RuntimeError):
    """Newton inversion of the coordinate map did not converge."""


class NearFoldError(LegendrePhaseError, RuntimeError):
    """The Jacobian of the map is too small to continue."""


class SingularPotentialError(LegendrePhaseError, RuntimeError):
    """Quantum potential requested where the Legendre Jacobian blows up."""
