"""Exception hierarchy shared by every layer of the engine."""


class EllschubError(Exception):
    """Base class for all engine errors."""


class InvalidArgumentError(EllschubError, ValueError):
    """A value passed to an operation is malformed (non-finite, wrong shape, foreign datum)."""


class InvalidParamsError(EllschubError, ValueError):
    """Modular parameters violate their invariants."""


class ConfigurationError(EllschubError, ValueError):
    """Unsupported root system or malformed run configuration."""


class PoleError(EllschubError, ArithmeticError):
    """A denominator vanished at an evaluation point.

    ``point`` is ``(panel_index, weyl_index, dyn_index)`` when known.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class PanelConstructionError(EllschubError, RuntimeError):
    """The sampler could not find enough generic points."""


class ConsistencyError(EllschubError, RuntimeError):
    """An internal structural invariant was violated."""
