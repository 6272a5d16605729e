"""Exception types shared across the package."""


class RectifiError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RectifiError, ValueError):
    """An input lies outside the physically meaningful domain."""


class DegenerateSteadyStateError(RectifiError):
    """The generator kernel is not one-dimensional (or is empty).

    Raised when the rate graph is disconnected or a total rate vanishes,
    so no unique stationary distribution exists.
    """


class SmallProbabilityError(RectifiError):
    """A population fell below the positivity floor of a Fisher quotient.

    Attributes
    ----------
    state_index : int
        Index of the offending population component.
    probability : float
        Its value at the evaluation point.
    """

    def __init__(self, state_index, probability, floor):
        self.state_index = state_index
        self.probability = probability
        self.floor = floor
        super().__init__(
            f"population p[{state_index}] = {probability:.3e} is below the "
            f"positivity floor {floor:.1e}; the Fisher quotient would diverge"
        )


class ConfigError(RectifiError, ValueError):
    """A configuration file or sweep specification is invalid."""
