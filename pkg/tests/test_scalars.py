"""Field axioms, exact matrix routines, polynomial arithmetic."""

import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from zdinfty import linalg
from zdinfty.errors import FieldMismatch, ZdinftyError
from zdinfty.fields import GF, QQ, FieldSpec, check_same_field, parse_field
from zdinfty.poly import Poly

FIELDS = [QQ, GF(5), GF(2)]


def scalars(field):
    if field is QQ:
        return st.builds(
            Fraction,
            st.integers(min_value=-50, max_value=50),
            st.integers(min_value=1, max_value=13),
        )
    return st.integers(min_value=0, max_value=field.p - 1)


@pytest.mark.parametrize("F", FIELDS)
@given(data=st.data())
def test_field_axioms(F, data):
    a = data.draw(scalars(F))
    b = data.draw(scalars(F))
    c = data.draw(scalars(F))
    assert F.add(a, b) == F.add(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == F.zero
    if not F.is_zero(a):
        assert F.mul(a, F.inv(a)) == F.one


def test_field_validation():
    with pytest.raises(ZdinftyError):
        FieldSpec("Fp", 6)
    with pytest.raises(ZdinftyError):
        FieldSpec("R")
    assert parse_field("Q") == QQ
    assert parse_field("Fp:7") == GF(7)
    with pytest.raises(FieldMismatch):
        check_same_field(QQ, GF(5))


def test_rref_and_nullspace():
    F = QQ
    A = ((Fraction(1), Fraction(2), Fraction(3)),
         (Fraction(2), Fraction(4), Fraction(6)),
         (Fraction(0), Fraction(1), Fraction(1)))
    red, pivots = linalg.rref(F, A)
    assert pivots == (0, 1)
    assert linalg.rank(F, A) == 2
    for v in linalg.nullspace(F, A):
        assert linalg.is_zero_vector(F, linalg.mat_vec(F, A, v))
    assert len(linalg.nullspace(F, A)) == 1


def test_solve_and_inverse():
    F = GF(5)
    A = ((1, 2), (3, 4))
    b = (1, 0)
    x = linalg.solve(F, A, b)
    assert linalg.mat_vec(F, A, x) == b
    Ainv = linalg.inverse(F, A)
    assert linalg.mat_mul(F, A, Ainv) == linalg.identity(F, 2)
    assert linalg.inverse(F, ((1, 2), (2, 4))) is None


def test_reduce_against_is_canonical():
    F = QQ
    basis, pivots = linalg.rref(F, ((Fraction(1), Fraction(0), Fraction(2)),
                                    (Fraction(0), Fraction(1), Fraction(1))))
    v = (Fraction(3), Fraction(4), Fraction(11))
    red = linalg.reduce_against(F, basis, pivots, v)
    assert red == (Fraction(0), Fraction(0), Fraction(1))
    assert linalg.in_span(F, basis, pivots, (Fraction(1), Fraction(1), Fraction(3)))


def test_minimal_polynomial():
    F = QQ
    A = ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(0)))
    assert linalg.minimal_polynomial(F, A) == (Fraction(0), Fraction(0), Fraction(1))
    I = linalg.identity(F, 3)
    assert linalg.minimal_polynomial(F, I) == (Fraction(-1), Fraction(1))


@pytest.mark.parametrize("F", [QQ, GF(5)])
def test_poly_ring(F):
    x = Poly.monomial(F, 1, 1)
    p = Poly.of(F, [1, 2, 1])
    q = Poly.of(F, [1, 1])
    assert q * q == p
    assert (p - q * q).is_zero()
    quot, rem = p.divmod(q)
    assert quot == q and rem.is_zero()
    assert (x.shift(2)).degree == 3
    assert Poly.monomial(F, 3, 4).is_homogeneous()
    assert not (p + x).is_homogeneous() or F.p == 2 if F is not QQ else True


def test_poly_divmod_general():
    F = QQ
    a = Poly.of(F, [2, 0, 1, 3])
    b = Poly.of(F, [1, 1])
    quot, rem = a.divmod(b)
    assert quot * b + rem == a
    assert rem.degree < b.degree
