"""Exact scalar arithmetic over the rationals or a prime field.

A scalar is either a :class:`fractions.Fraction` (rationals) or a plain
``int`` in ``[0, p)`` (prime field).  All arithmetic goes through a
:class:`FieldSpec`, which also guards against mixing fields.  No floating
point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import FieldMismatch, ZdinftyError

Scalar = Union[Fraction, int]

RATIONALS = "Q"
PRIME_FIELD = "Fp"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The base field k: rationals, or integers modulo a prime."""

    kind: str = RATIONALS
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.p is not None:
                raise ZdinftyError("rationals carry no characteristic parameter")
        elif self.kind == PRIME_FIELD:
            if self.p is None or not _is_prime(self.p):
                raise ZdinftyError(f"prime field needs a prime modulus, got {self.p}")
        else:
            raise ZdinftyError(f"unknown field kind {self.kind!r}")

    # -- element constructors ------------------------------------------

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.kind == RATIONALS else 1

    def of_int(self, n: int) -> Scalar:
        if self.kind == RATIONALS:
            return Fraction(n)
        return n % self.p

    def of_fraction(self, num: int, den: int) -> Scalar:
        if self.kind == RATIONALS:
            return Fraction(num, den)
        return (num % self.p) * self.inv(den % self.p) % self.p

    # -- arithmetic ----------------------------------------------------

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == RATIONALS:
            return a + b
        return (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == RATIONALS:
            return a - b
        return (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == RATIONALS:
            return a * b
        return (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        if self.kind == RATIONALS:
            return -a
        return (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroDivisionError("field inverse of zero")
        if self.kind == RATIONALS:
            return 1 / a
        return pow(a, self.p - 2, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    # -- formatting ----------------------------------------------------

    def fmt(self, a: Scalar) -> str:
        return str(a)

    def parse_scalar(self, text: str) -> Scalar:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.of_fraction(int(num), int(den))
        return self.of_int(int(text))

    def __str__(self) -> str:
        return "Q" if self.kind == RATIONALS else f"F{self.p}"


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(PRIME_FIELD, p)


def check_same_field(a: FieldSpec, b: FieldSpec) -> None:
    """Mixed-field operations are errors, never coercions."""
    if a != b:
        raise FieldMismatch(f"cannot mix {a} and {b}")


def parse_field(text: str) -> FieldSpec:
    """Parse a field name: ``Q`` or ``Fp:<prime>``."""
    if text == "Q":
        return QQ
    if text.startswith("Fp:"):
        return GF(int(text[3:]))
    raise ZdinftyError(f"unknown field {text!r}; expected Q or Fp:<p>")
