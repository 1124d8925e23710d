"""Exception hierarchy."""


class OrliczDynamicsError(Exception):
    """Base class for all library errors."""


class DomainExceeded(OrliczDynamicsError, ValueError):
    """Argument lies beyond the Young function's finite domain."""


class NotAttained(OrliczDynamicsError, ValueError):
    """Requested level exceeds the largest value of a tabulated Young function."""


class UnboundedConjugate(OrliczDynamicsError, ValueError):
    """Complementary function is infinite at a requested grid point."""


class InvalidYoungFunction(OrliczDynamicsError, ValueError):
    pass


class InvalidConfig(OrliczDynamicsError, ValueError):
    """Configuration failed validation; ``errors`` lists field diagnostics."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class WeightUnbounded(OrliczDynamicsError, ValueError):
    pass


class UnboundedDistortion(OrliczDynamicsError, ValueError):
    pass


class NotHyperbolic(OrliczDynamicsError, ValueError):
    """No HC/HD/GH certificate: shadowing construction unavailable."""


class SplitLeak(OrliczDynamicsError, RuntimeError):
    """A correction term left its invariant half of the splitting."""


class WindowOverflow(OrliczDynamicsError, ValueError):
    """Support left the materialized level window."""
