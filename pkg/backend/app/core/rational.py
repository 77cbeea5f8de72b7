"""
Exact time arithmetic.

Every time value in the scheduling logic is a fractions.Fraction; there is no
floating point anywhere between an instance file and a verified schedule.
"""

from fractions import Fraction
from typing import Annotated, Union

from pydantic import PlainSerializer, PlainValidator

TimePoint = Fraction

RationalLike = Union[int, str, Fraction]


def as_time(value: RationalLike) -> Fraction:
    """Coerce an int, a "p/q" string or a Fraction into a canonical Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not time values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValueError(f"not a rational value: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p". Decimal notation is rejected to keep inputs exact."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"decimal notation is not accepted for exact values: {text!r}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational value: {text!r}") from e
    return value


def format_rational(value: Fraction) -> str:
    """Render as "p/q", or "p" when the value is integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    PlainValidator(as_time),
    PlainSerializer(format_rational, return_type=str),
]
