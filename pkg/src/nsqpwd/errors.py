"""Exception hierarchy shared by all modules."""


class NSQPWDError(Exception):
    """Base class for library errors."""


class DomainError(NSQPWDError):
    """Numeric-domain failure (bad parameters, off-grid points, ...)."""


class SingularB(DomainError):
    pass


class AsymmetricB(DomainError):
    pass


class DegenerateAngle(DomainError):
    pass


class EmptyGrid(DomainError):
    pass


class GridMismatch(DomainError):
    pass


class OffGridCenter(DomainError):
    pass


class AnalyticExtensionUnavailable(DomainError):
    pass


class GridTooSmall(DomainError):
    pass


class ZeroSignal(DomainError):
    pass


class CoeffMismatch(DomainError):
    pass


class ChirpRateMismatch(DomainError):
    pass


class EmptySlice(DomainError):
    pass


class ParseError(NSQPWDError):
    """Malformed data file."""


class ConfigError(NSQPWDError):
    """Invalid run configuration."""
