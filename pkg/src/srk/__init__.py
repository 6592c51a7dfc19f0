"""Slice regular functions on the quaternionic unit ball and Schwarz-Pick checks."""

from .errors import SRKError
from .quaternion import I, J, K, ONE, ZERO, Quaternion, format_quaternion, parse_quaternion
from .rational import RegularQuotient
from .series import StarSeries

__version__ = "0.1.0"

__all__ = [
    "I", "J", "K", "ONE", "ZERO",
    "Quaternion", "RegularQuotient", "SRKError", "StarSeries",
    "format_quaternion", "parse_quaternion",
]
