"""Exactly comparable nonnegative reals of the form ``r ** (1/n)``.

Every value produced by the four lifting operators is such a root of a
rational: the power-mean of order k is ``S ** (1/k)`` with ``S`` rational, and
the weighted geometric mean with rational weights is ``P ** (1/D)`` where
``D`` is a common denominator of the weights.  Keeping values in this form
makes ``<=`` decidable without floating point; decimal or interval views are
derived on demand with certified dyadic enclosures.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import gmpy2

from ._rational import bits_for_width, decimal_string, format_fraction, to_fraction

Number = Union[Fraction, int]

# size budget (in bits) below which comparisons raise both sides to a common power
EXACT_COMPARE_BITS = 1 << 16


def _bits(q: Fraction) -> int:
    return q.numerator.bit_length() + q.denominator.bit_length()


def _iroot(n: int, k: int) -> Tuple[int, bool]:
    r, exact = gmpy2.iroot(gmpy2.mpz(n), k)
    return int(r), bool(exact)


def rational_root(q: Fraction, k: int) -> Optional[Fraction]:
    """``q ** (1/k)`` if it is rational, else None."""
    if q < 0:
        raise ValueError("negative radicand")
    if k == 1 or q in (0, 1):
        return Fraction(q)
    num, ok_num = _iroot(q.numerator, k)
    if not ok_num:
        return None
    den, ok_den = _iroot(q.denominator, k)
    if not ok_den:
        return None
    return Fraction(num, den)


def root_enclosure(q: Fraction, k: int, bits: int) -> Tuple[Fraction, Fraction]:
    """Dyadic ``lo <= q**(1/k) <= hi`` with ``hi - lo <= 2**-bits``."""
    exact = rational_root(q, k)
    if exact is not None:
        return exact, exact
    scale = 1 << (bits * k)
    floor_val = q.numerator * scale // q.denominator
    r, _ = _iroot(floor_val, k)
    # r**k <= floor(q * 2**(bits k)) < (r+1)**k, and q is not a perfect k-th power
    return Fraction(r, 1 << bits), Fraction(r + 1, 1 << bits)


@functools.total_ordering
@dataclass(frozen=True)
class Magnitude:
    """The nonnegative real ``radicand ** (1/index)``."""

    radicand: Fraction
    index: int = 1

    def __post_init__(self) -> None:
        r = Fraction(self.radicand)
        if r < 0:
            raise ValueError("magnitudes are nonnegative")
        if self.index < 1:
            raise ValueError("root index must be >= 1")
        k = self.index
        exact = rational_root(r, k) if k > 1 else r
        if exact is not None:
            r, k = exact, 1
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "index", k)

    @classmethod
    def of(cls, x: Union["Magnitude", Number]) -> "Magnitude":
        return x if isinstance(x, Magnitude) else cls(Fraction(x))

    @property
    def exact(self) -> Optional[Fraction]:
        """The value as a Fraction when it is rational."""
        return self.radicand if self.index == 1 else None

    def enclosure(self, bits: int = 64) -> Tuple[Fraction, Fraction]:
        return root_enclosure(self.radicand, self.index, bits)

    def interval(self, width: Fraction) -> Tuple[Fraction, Fraction]:
        return self.enclosure(bits_for_width(width))

    def __float__(self) -> float:
        lo, hi = self.enclosure(60)
        return float((lo + hi) / 2)

    def decimal(self, digits: int = 12) -> str:
        lo, hi = self.enclosure(4 * digits + 8)
        return decimal_string((lo + hi) / 2, digits)

    def __str__(self) -> str:
        if self.index == 1:
            return str(self.radicand)
        return f"({self.radicand})^(1/{self.index}) ~ {self.decimal()}"

    def compare(self, other: Union["Magnitude", Number]) -> int:
        """Exact three-way comparison: -1, 0 or 1."""
        other = Magnitude.of(other)
        a, m = self.radicand, self.index
        b, n = other.radicand, other.index
        if m == n:
            return (a > b) - (a < b)
        # a^(1/m) vs b^(1/n)  <=>  a^(n/g) vs b^(m/g); cheap when the powers stay small
        g = math.gcd(m, n)
        if _bits(a) * (n // g) + _bits(b) * (m // g) <= EXACT_COMPARE_BITS:
            lhs, rhs = a ** (n // g), b ** (m // g)
            return (lhs > rhs) - (lhs < rhs)
        for bits in (64, 256, 1024):
            lo1, hi1 = self.enclosure(bits)
            lo2, hi2 = other.enclosure(bits)
            if hi1 < lo2:
                return -1
            if hi2 < lo1:
                return 1
        lhs, rhs = a ** (n // g), b ** (m // g)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Magnitude, Fraction, int)) and not isinstance(other, bool):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (Magnitude, Fraction, int)):
            return self.compare(other) < 0
        return NotImplemented

    def __hash__(self) -> int:
        # equal magnitudes share the normalised (radicand, index) form only when
        # the index matches; hash on a coarse rounding to stay consistent.
        lo, _ = self.enclosure(20)
        return hash(math.floor(lo * 1024))


ZERO = Magnitude(Fraction(0))
ONE = Magnitude(Fraction(1))


Real = Union[Fraction, Magnitude]


def to_real(value) -> Real:
    """Normalise to a Fraction, or to a Magnitude when the value is irrational.

    Accepts rational-like input, a Magnitude, or text ``"q^(1/k)"``.
    """
    if isinstance(value, Magnitude):
        return value.exact if value.exact is not None else value
    if isinstance(value, str) and "^(1/" in value:
        base, _, rest = value.strip().partition("^(1/")
        if not rest.endswith(")"):
            raise ValueError(f"malformed root {value!r}")
        try:
            index = int(rest[:-1])
        except ValueError:
            raise ValueError(f"malformed root {value!r}") from None
        return to_real(Magnitude(to_fraction(base), index))
    return to_fraction(value)


def format_real(x: Real) -> str:
    """``num/den`` for rationals, ``q^(1/k)`` for irrational roots."""
    x = to_real(x)
    if isinstance(x, Magnitude):
        return f"{format_fraction(x.radicand)}^(1/{x.index})"
    return format_fraction(x)


def power_of(x: Real, e: Fraction) -> Magnitude:
    """``x ** e`` for a nonnegative rational exponent."""
    m = Magnitude.of(x)
    e = Fraction(e)
    if e < 0:
        raise ValueError("negative exponent")
    return Magnitude(m.radicand ** e.numerator, m.index * e.denominator)
