"""
Canonical text form of exact rationals
"""

import math
import re
from fractions import Fraction

from models.errors import ParseError

_RATIONAL_RE = re.compile(r"(-?(?:0|[1-9]\d*))/([1-9]\d*)")


def parse_rational(text: str) -> Fraction:
    """
    Parse a canonical rational string

    Args:
        text: "p/q" with no surrounding whitespace or leading zeros; q > 0,
            gcd(p, q) = 1 and zero written as "0/1"

    Returns:
        The exact Fraction
    """
    if not isinstance(text, str):
        raise ParseError(f"malformed document: rational expected, got {text!r}")
    match = _RATIONAL_RE.fullmatch(text)
    if not match or match.group(1) == "-0":
        raise ParseError(f"malformed document: bad rational {text!r}")
    numerator, denominator = int(match.group(1)), int(match.group(2))
    if math.gcd(numerator, denominator) != 1:
        raise ParseError(f"non-reduced fraction {text!r}")
    return Fraction(numerator, denominator)


def ceil_fraction(value: Fraction) -> int:
    """Exact ceiling"""
    value = Fraction(value)
    return -((-value.numerator) // value.denominator)
