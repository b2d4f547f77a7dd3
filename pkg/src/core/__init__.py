# Fueter Mapping Core Module

from .clifford import MAX_DIMENSION, Multivector, Paravector, paravector_inverse, paravector_pow
from .constants import DimensionConstants
from .error_handler import ErrorHandler, create_success_response
from .errors import (
    AxialRepresentationError, ConfigError, DimensionMismatchError, DomainError, FueterError,
    NonIntrinsicError, ParseError, RegionError, ToleranceViolation,
)

__all__ = [
    'MAX_DIMENSION',
    'Multivector',
    'Paravector',
    'paravector_inverse',
    'paravector_pow',
    'DimensionConstants',
    'ErrorHandler',
    'create_success_response',
    'FueterError',
    'ConfigError',
    'ParseError',
    'DimensionMismatchError',
    'DomainError',
    'RegionError',
    'AxialRepresentationError',
    'NonIntrinsicError',
    'ToleranceViolation',
]
