from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pizero.algebra import (
    IntPoly,
    ModPoly,
    PrimeField,
    charpoly,
    charpoly_coeffs,
    check_prime,
    companion,
    cyclotomic,
    det,
    kronecker,
    mat_inverse,
    mat_mul,
    poly_gcd_q,
    reduce_mod,
    resultant,
)
from oracles import cofactor_charpoly, companion_resultant, sympy_charpoly

small_ints = st.integers(-9, 9)
polys = st.lists(small_ints, min_size=1, max_size=6).map(IntPoly).filter(lambda p: not p.is_zero())


def square(n, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


# -- prime fields


@pytest.mark.parametrize("ell", [2, 3, 5, 7, 11, 13])
def test_field_axioms_exhaustive(ell):
    F = PrimeField(ell)
    for x in F:
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
            assert F.pow(x, ell - 1) == 1
        for y in F:
            assert F.add(x, y) == F.add(y, x)
            assert F.mul(x, y) == F.mul(y, x)
            assert F.sub(F.add(x, y), y) == x
            for z in range(0, ell, max(1, ell // 4)):
                assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13, 101])
def test_legendre_nonsquare_primitive_root(ell):
    F = PrimeField(ell)
    squares = {x * x % ell for x in range(1, ell)}
    assert all(F.legendre(x) == (1 if x in squares else -1) for x in range(1, ell))
    assert F.legendre(0) == 0
    assert F.nonsquare() not in squares
    g = F.primitive_root()
    assert len({pow(g, k, ell) for k in range(ell - 1)}) == ell - 1


def test_inverse_of_zero_and_nonprime():
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)
    with pytest.raises(ValueError):
        check_prime(9)
    with pytest.raises(ValueError):
        PrimeField(1)


# -- polynomials


def test_intpoly_basics():
    p = IntPoly.from_roots([2, 3])
    assert p.coeffs == (6, -5, 1)
    assert str(p) == "T^2 - 5*T + 6"
    assert p(2) == 0 and p.degree == 2 and p.is_monic()
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly().degree < 0
    with pytest.raises(TypeError):
        IntPoly([Fraction(1, 2)])


def test_exact_division():
    p = IntPoly.from_roots([1, -2, 5])
    assert p // IntPoly.from_roots([5]) == IntPoly.from_roots([1, -2])
    with pytest.raises(ArithmeticError):
        p // IntPoly([1, 2, 3])
    assert IntPoly([2, 4]) // 2 == IntPoly([1, 2])


@given(polys, polys)
def test_exact_division_roundtrip(p, q):
    assert (p * q) // q == p


def test_reduce_examples():
    assert reduce_mod(IntPoly([6, -5, 1]), 5) == ModPoly([1, 0, 1], 5)
    r = reduce_mod(IntPoly([1, 3]), 3)
    assert r.degree == 0 and r.coeffs == (1,)


@given(polys, polys, st.sampled_from([2, 3, 5, 7, 11]))
def test_reduce_is_ring_homomorphism(p, q, ell):
    assert reduce_mod(p * q, ell) == reduce_mod(p, ell) * reduce_mod(q, ell)
    assert reduce_mod(p + q, ell) == reduce_mod(p, ell) + reduce_mod(q, ell)


@given(polys, st.lists(small_ints, min_size=2, max_size=5).filter(lambda c: c[-1] % 7))
def test_modpoly_division(p, q):
    a, b = reduce_mod(p, 7), ModPoly(q, 7)
    quo, rem = divmod(a, b)
    assert quo * b + rem == a
    assert rem.degree < b.degree


def test_modpoly_rejects_mixed_moduli():
    with pytest.raises(TypeError):
        ModPoly([1, 1], 5) + ModPoly([1, 1], 7)


# -- cyclotomic


def test_cyclotomic_examples():
    assert cyclotomic(1) == IntPoly([-1, 1])
    assert cyclotomic(2) == IntPoly([1, 1])
    assert cyclotomic(12) == IntPoly([1, 0, -1, 0, 1])
    with pytest.raises(ValueError):
        cyclotomic(0)


@pytest.mark.parametrize("m", range(1, 61))
def test_cyclotomic_product_and_sympy(m):
    T = sympy.Symbol("T")
    expected = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(m, T), T).all_coeffs())]
    assert list(cyclotomic(m).coeffs) == expected
    prod = IntPoly([1])
    for d in sympy.divisors(m):
        prod = prod * cyclotomic(d)
    assert prod == IntPoly.monomial(m) - 1


# -- resultants


def test_resultant_examples():
    assert resultant(IntPoly([-2, 1]), IntPoly([-3, 1])) == -1
    assert resultant(IntPoly([-1, 0, 1]), IntPoly([-1, 1])) == 0
    with pytest.raises(ValueError):
        resultant(IntPoly(), IntPoly([1, 1]))


@given(polys, polys)
def test_resultant_symmetry(p, q):
    assert resultant(q, p) == (-1) ** (p.degree * q.degree) * resultant(p, q)


@given(polys.filter(lambda p: p.degree >= 1), polys)
def test_resultant_matches_companion_oracle(p, q):
    assert resultant(p, q) == companion_resultant(p.coeffs, q.coeffs)


@given(polys, polys)
def test_resultant_zero_iff_common_factor(p, q):
    common = poly_gcd_q(p, q).degree > 0
    assert (resultant(p, q) == 0) == common


# -- matrices and characteristic polynomials


def test_charpoly_examples():
    assert charpoly([[1, 0], [0, 1]]) == IntPoly([1, -2, 1])
    assert charpoly([[0, 1], [1, 0]]) == IntPoly([-1, 0, 1])
    assert str(charpoly([[1, 0], [0, 1]])) == "T^2 - 2*T + 1"


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(square))
def test_charpoly_matches_cofactor_expansion(m):
    assert list(charpoly_coeffs(m)) == cofactor_charpoly(m)


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(square), st.sampled_from([2, 3, 5, 7]))
def test_charpoly_mod_ell_is_reduction(m, ell):
    assert charpoly(m, ell) == reduce_mod(charpoly(m), ell)


@given(st.lists(small_ints, min_size=1, max_size=5))
def test_companion_roundtrip(tail):
    p = IntPoly(list(tail) + [1])
    assert charpoly(companion(p)) == p


@settings(max_examples=40)
@given(square(3), square(3))
def test_det_multiplicative_and_sympy(a, b):
    assert det(mat_mul(a, b)) == det(a) * det(b)
    assert det(a) == int(sympy.Matrix(a).det())
    assert det(a, 7) == det(a) % 7


@settings(max_examples=40)
@given(square(2), square(2))
def test_kronecker_charpoly_oracle(a, b):
    k = kronecker(a, b)
    assert list(charpoly_coeffs(k)) == sympy_charpoly(k)


def test_mat_inverse():
    a = [[2, 1], [1, 1]]
    assert mat_mul(a, mat_inverse(a)) == ((1, 0), (0, 1))
    inv5 = mat_inverse([[2, 0], [0, 3]], 5)
    assert mat_mul([[2, 0], [0, 3]], inv5, 5) == ((1, 0), (0, 1))
    with pytest.raises(ZeroDivisionError):
        mat_inverse([[1, 2], [2, 4]])
