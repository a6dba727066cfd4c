"""Dual-mode scalars: exact rationals and binary floats.

The mode of a scalar is its Python type. ``Fraction`` is the exact mode and
``float`` the float mode; mixing them follows the numeric tower, so anything
touching a float becomes a float. Integers are promoted to ``Fraction`` on
entry so that ``1`` and ``Fraction(1)`` never diverge.
"""

import math
import re
from fractions import Fraction

from .errors import DomainError, RationalOverflowError

Scalar = Fraction | float

INT64_MAX = 2**63 - 1

# Canonical rational text: lowest terms, positive denominator, no "/1", no "-0"
_RATIONAL_RE = re.compile(r"^(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")


def checked(value: Scalar) -> Scalar:
    """Return ``value`` unchanged, raising if an exact rational overflows 64 bits."""
    if isinstance(value, Fraction) and (
        abs(value.numerator) > INT64_MAX or value.denominator > INT64_MAX
    ):
        raise RationalOverflowError(f"rational {value} does not fit in 64-bit components")
    return value


def to_scalar(value: object) -> Scalar:
    """Coerce ints, Fractions, floats and canonical strings to a Scalar."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return checked(value)
    if isinstance(value, int):
        return checked(Fraction(value))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite scalar: {value}")
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a scalar")


def is_exact(value: Scalar) -> bool:
    return isinstance(value, Fraction)


def parse_scalar(text: str) -> Fraction:
    """Parse the canonical ``p/q`` form of an exact rational.

    Raises:
        DomainError: for non-canonical forms such as ``2/4``, ``1/-3``,
            ``3/1`` or ``-0``
    """
    match = _RATIONAL_RE.match(text)
    if not match:
        raise DomainError(f"not a canonical rational: {text!r}")
    sign, numerator, denominator = match.groups()
    if sign and numerator == "0":
        raise DomainError(f"not a canonical rational: {text!r}")
    if denominator is None:
        return checked(Fraction(int(sign + numerator)))
    num, den = int(numerator), int(denominator)
    if den == 1 or math.gcd(num, den) != 1:
        raise DomainError(f"rational not in lowest terms: {text!r}")
    return checked(Fraction(int(sign + numerator), den))


def format_scalar(value: Scalar) -> str | float:
    """Render a scalar for JSON: ``"p/q"`` strings for rationals, floats as-is."""
    if isinstance(value, Fraction):
        checked(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return float(value)
