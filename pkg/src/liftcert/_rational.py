"""Parsing and formatting of exact rationals."""

from __future__ import annotations

import math
import os
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str, Decimal]

DEFAULT_PRECISION = Fraction(1, 10**12)
PRECISION_ENV = "LIFTCERT_PRECISION"


def to_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to a Fraction without ever passing through a float.

    Strings may be ``"3/10"``, ``"0.3"``, ``"1e-12"`` or integers.  Floats are
    rejected because ``0.3`` as a float is not 3/10.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                return Fraction(int(num), int(den))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"malformed rational {value!r}") from exc
        try:
            return Fraction(Decimal(text))
        except (InvalidOperation, ValueError) as exc:
            raise ValueError(f"malformed rational {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_fraction(q: Fraction) -> str:
    """Canonical text form: ``num/den`` in lowest terms, bare integer if den is 1."""
    return str(Fraction(q))


def exact_decimal(q: Fraction) -> str:
    """Exact decimal text when ``q`` terminates in base 10, else ``num/den``."""
    q = Fraction(q)
    for k in range(65):
        if (10**k) % q.denominator == 0:
            return decimal_string(q, k)
    return format_fraction(q)


def display(q: Fraction, digits: int = 12) -> str:
    """Human form showing both the rational and a decimal, e.g. ``1/4 (= 0.25)``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q} (= {decimal_string(q, digits)})"


def decimal_string(q: Fraction, digits: int = 12) -> str:
    """Round-half-even decimal rendering with at most ``digits`` fractional digits."""
    scaled = round(Fraction(q) * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    frac_text = str(frac).rjust(digits, "0").rstrip("0")
    return f"{sign}{whole}.{frac_text}" if frac_text else f"{sign}{whole}"


def ceil_decimal(q: Fraction, digits: int) -> Fraction:
    """Smallest multiple of 10^-digits that is >= q."""
    scale = 10**digits
    return Fraction(math.ceil(Fraction(q) * scale), scale)


def bits_for_width(width: Fraction) -> int:
    """Number of binary digits m such that 2^-m <= width."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("precision must be positive")
    m = 0
    while Fraction(1, 2**m) > width:
        m += 1
    return m


def precision_from_env(default: Fraction = DEFAULT_PRECISION) -> Fraction:
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return default
    value = to_fraction(raw)
    if not 0 < value < 1:
        raise ValueError(f"{PRECISION_ENV} must lie in (0, 1), got {raw!r}")
    return value
