"""Quadratic-phase Fourier transform and Wigner distribution toolkit for 2D fields."""

from .errors import ConfigError, DomainError, NSQPWDError, ParseError
from .params import ParamTuple, derive_coeffs, omega0, omega1, validate
from .qpft import ComplexField, Grid2D, forward, gaussian, inverse
from .wigner import PaperRange, SupportClipped, WignerEvaluator, cross_wd, wd_point, wd_slice

__all__ = [
    "ComplexField",
    "ConfigError",
    "DomainError",
    "Grid2D",
    "NSQPWDError",
    "PaperRange",
    "ParamTuple",
    "ParseError",
    "SupportClipped",
    "WignerEvaluator",
    "cross_wd",
    "derive_coeffs",
    "forward",
    "gaussian",
    "inverse",
    "omega0",
    "omega1",
    "validate",
    "wd_point",
    "wd_slice",
]
