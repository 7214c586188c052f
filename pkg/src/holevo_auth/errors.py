"""Exception types raised across the package."""


class HolevoAuthError(Exception):
    """Base class for all package errors."""


class InvalidState(HolevoAuthError, ValueError):
    pass


class InvalidChannel(HolevoAuthError, ValueError):
    pass


class DimensionMismatch(HolevoAuthError, ValueError):
    pass


class InvalidPrior(HolevoAuthError, ValueError):
    pass


class InvalidProbability(HolevoAuthError, ValueError):
    pass


class InvalidArgument(HolevoAuthError, ValueError):
    pass


class LengthMismatch(HolevoAuthError, ValueError):
    pass


class DegenerateEnsemble(HolevoAuthError, ValueError):
    pass


class InfeasibleScale(HolevoAuthError, ValueError):
    pass


class EmptyMessageSpace(HolevoAuthError, ValueError):
    pass


class DecodingFailure(HolevoAuthError):
    """Syndrome has no coset leader within the decoding radius."""


class KeyLengthNonpositive(HolevoAuthError):
    """Privacy amplification would produce a key of length < 1."""


class HypothesisViolated(HolevoAuthError, ValueError):
    """A bound check was handed an instance that fails its hypothesis."""


class ConfigError(HolevoAuthError, ValueError):
    pass
