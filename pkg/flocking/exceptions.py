"""
Exceptions raised by the flocking services.

Library code raises these; the management command turns any of them into a
CommandError so the process exits with a one-line diagnostic.
"""


class FlockingError(Exception):
    """Base class for all simulator errors."""


class GeometryError(FlockingError, ValueError):
    """Invalid geometric input: non-finite angle, non-positive length."""


class CoincidentAgentsError(GeometryError):
    """Two agents occupy the same position, so their distance is zero."""

    def __init__(self, i: int = None, j: int = None, message: str = None):
        self.i = i
        self.j = j
        if message is None:
            if i is None or j is None:
                message = "Agents coincide (distance is zero)"
            else:
                message = f"Agents {i} and {j} coincide (distance is zero)"
        super().__init__(message)


class ConfigError(FlockingError, ValueError):
    """Unknown key, malformed value or violated invariant in a scenario."""


class SimulationError(FlockingError):
    """A scenario run was aborted."""
