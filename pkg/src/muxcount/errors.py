"""Semantic exception hierarchy shared by all modules."""


class MuxError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MuxError):
    """Malformed multiplex input: self-loop, out-of-range vertex, duplicate edge."""


class NoEdgesError(MuxError):
    """An operation that minimizes over edge-bearing submultiplexes got an edgeless host."""


class ScaleCapExceeded(MuxError):
    """An exact enumeration would exceed its documented size cap."""


class InfeasibleProbability(MuxError):
    """(p1, p2, p12) violates max(0, p1 + p2 - 1) <= p12 <= min(p1, p2) on (0, 1)."""


class InfeasibleTheta(MuxError):
    """Exponent triple outside {theta1, theta2 > 0, theta12 >= max(theta1, theta2)}."""


class NotOnThresholdSurface(MuxError):
    """The operation requires an exponent triple with delta(H, theta) == 0."""


class CoreInvariantError(MuxError):
    """The constructed core violated its postconditions; indicates a bug."""


class MissingPlantedCore(MuxError):
    """Extension counting requires the placed core's edges to be present in the graph."""
