"""Polynomials in one variable over an exact field.

Coefficients are stored ascending; the zero polynomial has an empty
coefficient tuple and degree -1 by convention.  Only what the graded ring
arithmetic and the presentation machinery need: ring operations, division,
homogeneous-part access.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ZdinftyError
from .fields import FieldSpec, Scalar, check_same_field


@dataclass(frozen=True)
class Poly:
    field: FieldSpec
    coeffs: tuple  # ascending, no trailing zeros

    @staticmethod
    def of(field: FieldSpec, coeffs) -> "Poly":
        cs = [field.of_int(c) if isinstance(c, int) else c for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        return Poly(field, tuple(cs))

    @staticmethod
    def zero(field: FieldSpec) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def monomial(field: FieldSpec, c, degree: int) -> "Poly":
        if degree < 0:
            raise ZdinftyError("monomial degree must be nonnegative")
        c = field.of_int(c) if isinstance(c, int) else c
        if field.is_zero(c):
            return Poly(field, ())
        return Poly(field, tuple(field.zero for _ in range(degree)) + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_homogeneous(self) -> bool:
        nonzero = [i for i, c in enumerate(self.coeffs) if not self.field.is_zero(c)]
        return len(nonzero) <= 1

    def coeff(self, d: int) -> Scalar:
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return self.field.zero

    def __add__(self, other: "Poly") -> "Poly":
        check_same_field(self.field, other.field)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.of(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        check_same_field(self.field, other.field)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.of(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        check_same_field(self.field, other.field)
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly(F, ())
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not F.is_zero(b):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly.of(F, out)

    def scale(self, c: Scalar) -> "Poly":
        F = self.field
        return Poly.of(F, [F.mul(c, a) for a in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        if k < 0:
            raise ZdinftyError("negative shift of a polynomial")
        return Poly(self.field, tuple(self.field.zero for _ in range(k)) + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        check_same_field(self.field, other.field)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        quot = [F.zero] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = other.coeffs[-1]
        d = other.degree
        while len(rem) - 1 >= d and rem:
            if F.is_zero(rem[-1]):
                rem.pop()
                continue
            k = len(rem) - 1 - d
            c = F.div(rem[-1], lead)
            quot[k] = c
            for i in range(len(other.coeffs)):
                rem[k + i] = F.sub(rem[k + i], F.mul(c, other.coeffs[i]))
            rem.pop()
        return Poly.of(F, quot), Poly.of(F, rem)

    def truncated(self, k: int) -> "Poly":
        """The polynomial modulo x^k."""
        return Poly.of(self.field, self.coeffs[:k])

    def __str__(self) -> str:
        F = self.field
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if F.is_zero(c):
                continue
            if i == 0:
                parts.append(F.fmt(c))
            elif i == 1:
                parts.append(f"{F.fmt(c)}*x" if c != F.one else "x")
            else:
                parts.append(f"{F.fmt(c)}*x^{i}" if c != F.one else f"x^{i}")
        return " + ".join(parts)
