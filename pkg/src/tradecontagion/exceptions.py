"""Exception and warning taxonomy for tradecontagion."""


class TradeContagionError(Exception):
    """Base class for all domain errors raised by this package."""


class CycleDetectedError(TradeContagionError):
    """The supplied trade graph contains a directed cycle."""


class NegativeWeightError(TradeContagionError):
    """An edge weight or intrinsic weight is negative."""


class UnknownBuiltinError(TradeContagionError):
    """Requested builtin network name does not exist."""


class IndexOutOfRangeError(TradeContagionError, IndexError):
    """A node or player index is outside the network's range."""


class DimensionMismatchError(TradeContagionError, ValueError):
    """Vector or matrix dimensions do not match the system."""


class DegenerateNodeError(TradeContagionError):
    """Fixed-point numerator and denominator are both zero and the
    start-susceptible convention is disabled."""


class StaleProbabilityError(TradeContagionError):
    """A probability vector does not belong to the given system or profile."""


class TooLargeError(TradeContagionError):
    """Exact joint-chain enumeration requested for too many players."""


class ConfigInvalidError(TradeContagionError):
    """A scenario configuration failed validation."""


class UnknownParameterError(TradeContagionError):
    """A sweep parameter path does not name a scalar scenario parameter."""


class NotConvergedError(TradeContagionError):
    """Raised only in strict mode when a solve does not converge."""


class WeightRowOverflowWarning(UserWarning):
    """A player's purchase weights over player-sellers exceed 1."""


class DegenerateNodeWarning(UserWarning):
    """A node with zero inflow and zero recovery was assigned the
    start-susceptible fixed point p* = 0."""


class ProbabilityClampedWarning(UserWarning):
    """Per-step infection probability exceeded 1 and was clamped."""
