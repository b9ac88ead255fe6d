"""Exact scalars over the rationals and over prime fields.

Rationals are :class:`fractions.Fraction`; prime-field elements are
:class:`Fp`.  A :class:`Field` descriptor travels with every algebra and
converts integers, fractions and text into its own scalars.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

__all__ = [
    "FieldMismatch",
    "FactorialNotInvertible",
    "Field",
    "RationalField",
    "PrimeField",
    "Fp",
    "QQ",
    "GF",
    "inv_factorial",
    "field_from_spec",
]


class FieldMismatch(ValueError):
    """Objects over different coefficient fields were combined."""


class FactorialNotInvertible(ZeroDivisionError):
    """1/n! requested in F_p with n >= p."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


class Fp:
    """Residue class modulo a prime, kept in ``[0, p)``."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: int):
        self.residue = residue % modulus
        self.modulus = modulus

    def _coerce(self, other) -> int | None:
        if isinstance(other, Fp):
            if other.modulus != self.modulus:
                raise FieldMismatch(f"F_{self.modulus} vs F_{other.modulus}")
            return other.residue
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.modulus == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.modulus}")
            return other.numerator * pow(other.denominator, -1, self.modulus)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.residue + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.residue - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(o - self.residue, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.residue * o, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o % self.modulus == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.modulus)
        return Fp(self.residue * pow(o, -1, self.modulus), self.modulus)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(o, self.modulus) / self

    def __neg__(self):
        return Fp(-self.residue, self.modulus)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return Fp(1, self.modulus) / Fp(pow(self.residue, -k, self.modulus), self.modulus)
        return Fp(pow(self.residue, k, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, int):
            return (other - self.residue) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"Fp({self.residue}, {self.modulus})"

    def __str__(self):
        return str(self.residue)


Scalar = Union[Fraction, Fp]


class Field:
    """Common interface of the two coefficient fields."""

    characteristic: int = 0
    name: str = ""

    def __call__(self, value) -> Scalar:
        raise NotImplementedError

    @cached_property
    def zero(self) -> Scalar:
        return self(0)

    @cached_property
    def one(self) -> Scalar:
        return self(1)

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def parse(self, text: str) -> Scalar:
        raise NotImplementedError

    def format(self, x: Scalar) -> str:
        raise NotImplementedError

    def to_spec(self):
        raise NotImplementedError

    def check(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatch(f"{self} vs {other}")

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "Q"
    characteristic = 0

    def __call__(self, value) -> Fraction:
        if type(value) is Fraction:
            return value
        if isinstance(value, Fp):
            raise FieldMismatch("cannot coerce F_p element into Q")
        return Fraction(value)

    def parse(self, text: str) -> Fraction:
        text = text.strip()
        if "mod" in text:
            raise FieldMismatch(f"{text!r} is an F_p literal")
        return Fraction(text)

    def format(self, x) -> str:
        return str(Fraction(x))

    def to_spec(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.name = f"F_{p}"

    @property
    def p(self) -> int:
        return self.characteristic

    def __call__(self, value) -> Fp:
        p = self.characteristic
        if type(value) is Fp and value.modulus == p:
            return value
        if isinstance(value, Fp):
            if value.modulus != p:
                raise FieldMismatch(f"F_{value.modulus} vs F_{p}")
            return value
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{p}")
            return Fp(value.numerator * pow(value.denominator, -1, p), p)
        return Fp(int(value), p)

    def parse(self, text: str) -> Fp:
        text = text.strip()
        if "mod" in text:
            r, _, m = text.partition("mod")
            if int(m) != self.characteristic:
                raise FieldMismatch(f"{text!r} is not over F_{self.characteristic}")
            return self(int(r))
        # plain integers and fractions are reduced into the field
        return self(Fraction(text))

    def format(self, x) -> str:
        return f"{self(x).residue} mod {self.characteristic}"

    def elements(self):
        return [Fp(r, self.characteristic) for r in range(self.characteristic)]

    def to_spec(self):
        return {"Fp": self.characteristic}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Fp", self.characteristic))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec) -> Field:
    """Decode the ``"field"`` entry of an algebra file."""
    if spec == "Q":
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return GF(int(spec["Fp"]))
    raise ValueError(f"unknown field descriptor {spec!r}")


def inv_factorial(n: int, field: Field) -> Scalar:
    """Return ``1/n!`` in ``field``.

    Raises :class:`FactorialNotInvertible` over F_p when ``n >= p``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if field.is_finite and n >= field.characteristic:
        raise FactorialNotInvertible(
            f"{n}! is divisible by {field.characteristic}; nilpotency class too large"
        )
    return field(Fraction(1, math.factorial(n)))
