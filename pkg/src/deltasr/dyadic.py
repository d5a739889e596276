"""Exact dyadic rationals ``numerator / 2**exponent``.

Every probability produced by evaluating a decision tree on a partial input
has this form, so we keep them exact instead of going through floats.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _canonical(num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    shift = min((num & -num).bit_length() - 1, exp)
    return num >> shift, exp - shift


class Dyadic:
    """Immutable dyadic rational in canonical form (odd numerator or zero)."""

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        n, e = _canonical(int(numerator), int(exponent))
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def from_fraction(cls, q) -> "Dyadic":
        q = Fraction(q)
        d = q.denominator
        if d & (d - 1):
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, d.bit_length() - 1)

    # arithmetic ----------------------------------------------------------

    def _aligned(self, other: "Dyadic") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return (self.numerator << (e - self.exponent),
                other.numerator << (e - other.exponent), e)

    def __add__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._aligned(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        if isinstance(other, int):
            return Dyadic(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.numerator * other.numerator,
                      self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        raise ValueError("negative dyadics are not supported")

    def half(self) -> "Dyadic":
        return Dyadic(self.numerator, self.exponent + 1)

    def average(self, other: "Dyadic") -> "Dyadic":
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e + 1)

    def complement(self) -> "Dyadic":
        """``1 - self``; only meaningful for probabilities."""
        return Dyadic((1 << self.exponent) - self.numerator, self.exponent)

    # comparison ----------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self):
        return float(self.to_fraction())

    def _cmp_key(self, other):
        if isinstance(other, Dyadic):
            return other.to_fraction()
        if isinstance(other, (int, Rational)):
            return Fraction(other)
        return None

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return (self.numerator, self.exponent) == (other.numerator, other.exponent)
        o = self._cmp_key(other)
        return NotImplemented if o is None else self.to_fraction() == o

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        o = self._cmp_key(other)
        return NotImplemented if o is None else self.to_fraction() < o

    def __le__(self, other):
        o = self._cmp_key(other)
        return NotImplemented if o is None else self.to_fraction() <= o

    def __gt__(self, other):
        o = self._cmp_key(other)
        return NotImplemented if o is None else self.to_fraction() > o

    def __ge__(self, other):
        o = self._cmp_key(other)
        return NotImplemented if o is None else self.to_fraction() >= o

    # formatting ----------------------------------------------------------

    def __repr__(self):
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.exponent}"

    def pow2_form(self) -> str:
        """``num/2^e`` notation used by the CLI."""
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)
