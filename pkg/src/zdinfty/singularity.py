"""Graded two-branch singularity arithmetic and its lattice invariants.

The index-m ring sits inside two polynomial branches as the pairs (f, g)
with f congruent to g modulo x^m; it is generated by u = (x, x) and
v = (x^m, 0).  A torsion-free object is a module over this ring exactly when
its lattice is stable under v's action (x^m on type-0 coordinates, zero on
type-1), and every morphism becomes linear over the subring once the index
of its endpoints is reached.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import MixedIndex, NotLatticeMorphism, ZdinftyError
from .fields import FieldSpec, check_same_field
from .homext import Morphism
from .lattice import GradedVector, membership
from .objects import CObject
from .poly import Poly


@dataclass(frozen=True)
class RmElement:
    """A pair of branch polynomials agreeing to order m at the node."""

    m: int
    f: Poly
    g: Poly

    def __post_init__(self):
        if self.m < 0:
            raise ZdinftyError("singularity index must be nonnegative")
        check_same_field(self.f.field, self.g.field)
        diff = self.f - self.g
        if diff.truncated(self.m).coeffs:
            raise ZdinftyError(
                f"branch polynomials disagree below order {self.m}"
            )

    @property
    def field(self) -> FieldSpec:
        return self.f.field

    def is_homogeneous(self) -> bool:
        if self.f.is_zero() and self.g.is_zero():
            return True
        degs = set()
        for poly in (self.f, self.g):
            if not poly.is_zero():
                if not poly.is_homogeneous():
                    return False
                degs.add(poly.degree)
        return len(degs) <= 1

    def __add__(self, other: "RmElement") -> "RmElement":
        if self.m != other.m:
            raise MixedIndex(f"cannot mix indices {self.m} and {other.m}")
        return RmElement(self.m, self.f + other.f, self.g + other.g)

    def __sub__(self, other: "RmElement") -> "RmElement":
        if self.m != other.m:
            raise MixedIndex(f"cannot mix indices {self.m} and {other.m}")
        return RmElement(self.m, self.f - other.f, self.g - other.g)

    def __mul__(self, other: "RmElement") -> "RmElement":
        if self.m != other.m:
            raise MixedIndex(f"cannot mix indices {self.m} and {other.m}")
        return RmElement(self.m, self.f * other.f, self.g * other.g)

    def __pow__(self, k: int) -> "RmElement":
        out = ring_one(self.field, self.m)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RmElement)
            and self.m == other.m
            and self.f == other.f
            and self.g == other.g
        )


def ring_one(field: FieldSpec, m: int) -> RmElement:
    one = Poly.of(field, [1])
    return RmElement(m, one, one)


def ring_u(field: FieldSpec, m: int) -> RmElement:
    """The diagonal generator (x, x)."""
    x = Poly.monomial(field, 1, 1)
    return RmElement(m, x, x)


def ring_v(field: FieldSpec, m: int) -> RmElement:
    """The branch-separating generator (x^m, 0)."""
    return RmElement(m, Poly.monomial(field, 1, m), Poly.zero(field))


def _v_image(F: FieldSpec, obj: CObject, e: int, dir, n: int):
    """The element v_n . (x^e dir): degree e+n, type-1 part killed."""
    coords = tuple(
        dir[i] if i < obj.p else F.zero for i in range(obj.rank)
    )
    return GradedVector(e + n, coords)


def singularity_index(X: CObject) -> int:
    """Least n with (x^n, 0) stabilizing the lattice.

    This certifies the object as a module over the index-n ring; it is
    bounded by the jump spread.
    """
    if not X.is_torsion_free():
        raise NotLatticeMorphism("singularity index applies to torsion-free objects")
    F = X.field
    if X.rank == 0:
        return 0
    gens = X.lattice.generators()
    spread = X.lattice.max_jump() - X.lattice.min_jump()
    for n in range(0, spread + 2):
        if all(
            membership(X.lattice, _v_image(F, X, e, dir, n)) for e, dir in gens
        ):
            return n
    raise ZdinftyError("stability bound exceeded on a full-rank lattice")


def y_linearity_bound(f: Morphism, bound: int = 64) -> int:
    """Least n making the morphism linear over the index-n ring.

    Checks on the source generators that v_n keeps them in the source, and
    that applying the map commutes with v_n in the localization.
    """
    X, Y = f.src, f.dst
    if not (X.is_torsion_free() and Y.is_torsion_free()):
        raise NotLatticeMorphism("linearity bound applies between torsion-free objects")
    F = X.field
    full = f.full_matrix()
    gens = X.lattice.generators()
    for n in range(0, bound + 1):
        ok = True
        for e, dir in gens:
            vn_gen = _v_image(F, X, e, dir, n)
            if not membership(X.lattice, vn_gen):
                ok = False
                break
            image = linalg.mat_vec(F, full, dir)
            vn_image = _v_image(F, Y, e, image, n)
            f_of_vn = linalg.mat_vec(F, full, vn_gen.coords)
            if f_of_vn != vn_image.coords:
                ok = False
                break
            if not membership(Y.lattice, vn_image):
                ok = False
                break
        if ok:
            return n
    raise ZdinftyError(f"no linearity bound within {bound}")
