"""Exact coefficient fields: the rationals and prime fields.

Rationals are represented by :class:`fractions.Fraction`; elements of F_p by
:class:`ModP` instances that remember their modulus.  Both support the usual
arithmetic operators so polynomial code can stay generic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ModP:
    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, ModP):
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pow__(self, e):
        if e < 0:
            return ModP(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class ScalarField:
    """Either the rationals (characteristic 0) or F_p for a prime p."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic=0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        self.characteristic = characteristic

    @property
    def kind(self):
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    def __call__(self, x):
        p = self.characteristic
        if p == 0:
            if isinstance(x, ModP):
                raise TypeError("cannot coerce an F_p element into Q")
            return Fraction(x)
        if isinstance(x, ModP):
            if x.p != p:
                raise TypeError("mismatched prime fields")
            return x
        if isinstance(x, Fraction):
            return ModP(x.numerator * pow(x.denominator, -1, p), p)
        return ModP(int(x), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_int(self, x):
        """Integer representative (F_p) or raise (Q elements that are not integral)."""
        if self.characteristic:
            return x.v if isinstance(x, ModP) else int(x) % self.characteristic
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError("not an integer")
        return x.numerator

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("ScalarField", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


@lru_cache(maxsize=None)
def field(characteristic=0):
    return ScalarField(characteristic)


QQ = field(0)
