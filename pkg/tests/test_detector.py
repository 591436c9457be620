from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pizero.algebra import IntPoly, charpoly, companion, det, mat_inverse, mat_mul
from pizero.detector import (
    PRESETS,
    CharPoint,
    TensorSpec,
    chi,
    chi_of_poly,
    clearing_exponent,
    density_test,
    dual_charpoly,
    p_ab,
    parse_spec,
    poly_of_chi,
    q_ab,
    serre_f_eval,
    serre_f_eval_mod,
    tensor_charpoly,
)
from pizero.frobenius import FrobeniusRecord
from oracles import inverse_transpose, kron_charpoly, ratio_product, scaled_charpoly

CARTAN2 = PRESETS["cartan2"]


def invertible(n, lo=-4, hi=4):
    rows = st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    return rows.filter(lambda m: det(m) != 0)


def upper_triangular(n):
    """Integer upper-triangular matrices with nonzero diagonal (roots known exactly)."""
    diag = st.lists(st.integers(-5, 5).filter(bool), min_size=n, max_size=n)
    above = st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n)
    return st.tuples(diag, above).map(
        lambda t: [[t[0][i] if i == j else (t[1][i * n + j] if j > i else 0) for j in range(n)]
                   for i in range(n)]
    )


# -- chi


def test_chi_examples():
    assert chi([[1, 0], [0, 1]]).alpha == (-2, 1)
    assert chi([[0, 1], [1, 0]]).alpha == (0, -1)
    assert chi([[0, 1], [-1, 0]]).alpha == (0, 1)
    assert chi_of_poly(IntPoly([5, -3, 1])).alpha == (-3, 5)
    assert chi_of_poly(IntPoly.from_roots([1, 1, 1])).alpha == (-3, 3, -1)
    with pytest.raises(ValueError):
        chi([[1, 1], [1, 1]])


def test_charpoint_accessors():
    pt = CharPoint((-3, 7))
    assert pt.trace == 3 and pt.det == 7 and pt.n == 2
    red = pt.reduce(5)
    assert red.alpha == (2, 2) and red.ell == 5
    with pytest.raises(ValueError):
        red.reduce(7)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5).filter(lambda a: a[-1] != 0))
def test_chi_companion_roundtrip(alpha):
    pt = CharPoint(alpha)
    assert chi(companion(poly_of_chi(pt))) == pt


def unimodular(n):
    """Products of elementary matrices: integer matrices with integer inverses."""
    def build(steps):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for i, j, k in steps:
            if i != j:
                e = [[int(r == c) + (k if (r, c) == (i, j) else 0) for c in range(n)] for r in range(n)]
                m = [list(r) for r in mat_mul(m, e)]
        return m
    step = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-3, 3))
    return st.lists(step, max_size=6).map(build)


@settings(max_examples=50)
@given(invertible(3), unimodular(3))
def test_chi_conjugation_invariant(g, h):
    conj = mat_mul(mat_mul(h, g), mat_inverse(h))
    assert chi(conj) == chi(g)


# -- dual and tensor


def test_dual_examples():
    D, u = dual_charpoly(IntPoly([-2, 1]))
    assert D == IntPoly([-1, 2]) and u == 2
    D, u = dual_charpoly(IntPoly([-1, 0, 1]))
    assert u == -1 and D // u == IntPoly([-1, 0, 1])


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5).filter(lambda a: a[0] != 0))
def test_dual_is_involution(low):
    c = IntPoly(list(low) + [1])
    D, u = dual_charpoly(c)
    assert u == D.lead == (-1) ** c.degree * c[0]
    # D has roots 1/lambda; reversing again recovers c up to the unit sign
    assert D.reverse() == (c if c.degree % 2 == 0 else -c)
    for z in range(1, 4):
        assert D(Fraction(1, z)) * z ** c.degree == (-1) ** c.degree * c(z)


def test_tensor_examples():
    assert tensor_charpoly(IntPoly([-2, 1]), IntPoly([-3, 1])) == IntPoly([-6, 1])
    t = tensor_charpoly(IntPoly([-1, 0, 1]), IntPoly([-1, 0, 1]))
    assert t == IntPoly([1, 0, -2, 0, 1])


@settings(max_examples=40)
@given(st.integers(2, 3).flatmap(lambda n: st.tuples(invertible(n), invertible(n))))
def test_tensor_matches_kronecker(ab):
    a, b = ab
    assert list(tensor_charpoly(charpoly(a), charpoly(b)).coeffs) == kron_charpoly(a, b)


# -- P_{a,b}


def test_p_ab_examples():
    c = IntPoly.from_roots([2, 3])
    assert p_ab(c, 1, 0) == c
    P = p_ab(c, 1, 1)
    assert P.coeffs == (36, -150, 228, -150, 36)
    # roots {1, 1, 2/3, 3/2} cleared by 6^2
    for z in (0, 5, -1, 7):
        assert P(z) == 36 * ratio_product([2, 3], 1, 1, z)
    ident = IntPoly.from_roots([1, 1, 1])
    # clearing factor c(0)^9 = -1 for the 3x3 identity
    assert p_ab(ident, 2, 1) == -IntPoly.from_roots([1] * 27)
    assert p_ab(IntPoly.from_roots([1, 1]), 1, 2) == IntPoly.from_roots([1] * 8)


@pytest.mark.parametrize("a,b", [(2, 0), (1, 1), (0, 1), (2, 1), (1, 2)])
@settings(max_examples=25, deadline=None)
@given(g=invertible(2))
def test_p_ab_matches_kronecker(g, a, b):
    import sympy

    A = sympy.Matrix(g)
    Ai = inverse_transpose(g)
    mat = None
    for f in [A] * a + [Ai] * b:
        mat = f if mat is None else sympy.kronecker_product(mat, f)
    c = charpoly(g)
    scale = c[0] ** clearing_exponent(2, a, b)
    assert list(p_ab(c, a, b).coeffs) == scaled_charpoly(mat, scale)


@settings(max_examples=40)
@given(upper_triangular(3), st.integers(-4, 4))
def test_p_ab_matches_ratio_product(g, z):
    roots = [g[i][i] for i in range(3)]
    c = charpoly(g)
    assert p_ab(c, 1, 1)(z) == c[0] ** 3 * ratio_product(roots, 1, 1, z)


# -- Q and f


def test_q_and_f_examples():
    assert q_ab(IntPoly([-1, 0, 1]), 1, 1, 2) == 0
    assert q_ab(IntPoly.from_roots([1, 1]), 1, 1, 2) == 16
    assert q_ab(IntPoly.from_roots([2, 3]), 1, 1, 2) == 36 * ratio_product([2, 3], 1, 1, -1) == 600
    assert serre_f_eval(IntPoly([1, 0, 1]), CARTAN2) == 0
    assert serre_f_eval(IntPoly.from_roots([1, 1]), CARTAN2) == 16
    assert serre_f_eval(IntPoly([-1, 1]), TensorSpec([(1, 0, 2)])) == -2
    with pytest.raises(ValueError):
        serre_f_eval(IntPoly([1, 0, 1]), TensorSpec([]))


@settings(max_examples=40)
@given(upper_triangular(2), st.sampled_from([2, 3, 4, 6]))
def test_q_is_product_over_primitive_roots(g, m):
    # for m in {2,3,4,6} the primitive roots are roots of a quadratic or linear
    # factor; compare against the resultant with Phi_m via ratio enumeration
    roots = [g[0][0], g[1][1]]
    c = charpoly(g)
    val = q_ab(c, 1, 1, m)
    ratios = [Fraction(r, s) for r in roots for s in roots]
    has_root_of_unity = any(r**m == 1 and all(r**k != 1 for k in range(1, m)) for r in ratios)
    assert (val == 0) == has_root_of_unity


def test_f_vanishes_iff_trace_zero_gl2():
    # for cartan2 on GL_2, f = 4 det tr^2 up to sign
    for a1 in range(-6, 7):
        for a2 in [x for x in range(-6, 7) if x]:
            v = serre_f_eval(CharPoint((a1, a2)), CARTAN2)
            assert v == 4 * a2 * a1 * a1


@settings(max_examples=60)
@given(st.integers(-50, 50), st.integers(-50, 50).filter(bool),
       st.sampled_from([3, 5, 7, 11, 13]), st.sampled_from(list(PRESETS)))
def test_reduce_commutes_with_f(a1, a2, ell, name):
    assume(a2 % ell)
    spec = PRESETS[name]
    pt = CharPoint((a1, a2))
    assert serre_f_eval_mod(pt.reduce(ell), spec) == serre_f_eval(pt, spec) % ell


def test_serre_f_eval_mod_rejects_clearing_zero():
    with pytest.raises(ValueError):
        serre_f_eval_mod(CharPoint((1, 5), 5), CARTAN2)


# -- specs


def test_parse_spec():
    assert parse_spec("cartan2") is CARTAN2
    assert list(parse_spec("1,1,2;2,0,3")) == [(1, 1, 2), (2, 0, 3)]
    assert str(parse_spec("1,1,2;2,0,3")) == "1,1,2;2,0,3"
    for bad in ["nope", "1,1", "0,0,2", "1,1,1", ""]:
        with pytest.raises(ValueError):
            parse_spec(bad)


# -- density


def test_density_identity_stream_is_zero():
    rep = density_test([CharPoint((-2, 1))] * 50, CARTAN2)
    assert rep.zeros == 0 and rep.estimate == 0


def test_density_counts_and_skips():
    recs = [FrobeniusRecord(p, ap) for p, ap in [(3, 0), (5, -2), (7, 0), (11, 0), (13, 6)]]
    rep = density_test(recs, CARTAN2, expected=(1, 2))
    assert (rep.tested, rep.zeros, rep.cutoff) == (5, 3, 14)
    assert rep.zero_primes_head == [3, 7, 11]
    d = rep.to_dict()
    assert d["estimate"] == "3/5" and d["expected"] == "1/2"
    mod = density_test(recs, CARTAN2, ell=5)
    assert mod.skipped == 1 and mod.tested == 4 and mod.zeros == 3
    with pytest.raises(ValueError):
        density_test([], CARTAN2)
