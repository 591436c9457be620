"""Independent reference computations used only by the tests."""

from fractions import Fraction
from itertools import product

import sympy


def cofactor_det(m):
    """Laplace expansion along the first row; entries may be sympy expressions."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def cofactor_charpoly(m):
    """Ascending integer coefficients of det(T I - M) by cofactor expansion."""
    T = sympy.Symbol("T")
    n = len(m)
    tm = [[(T if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]
    poly = sympy.Poly(sympy.expand(cofactor_det(tm)), T)
    return [int(c) for c in reversed(poly.all_coeffs())]


def sympy_charpoly(m):
    T = sympy.Symbol("T")
    poly = sympy.Matrix(m).charpoly(T)
    return [int(c) for c in reversed(poly.all_coeffs())]


def kron_charpoly(a, b):
    return sympy_charpoly(sympy.kronecker_product(sympy.Matrix(a), sympy.Matrix(b)).tolist())


def inverse_transpose(a):
    return sympy.Matrix(a).inv().T


def scaled_charpoly(mat, scale):
    """scale * det(T I - mat) for a rational matrix, as ascending integers."""
    T = sympy.Symbol("T")
    poly = sympy.Poly(sympy.Matrix(mat).charpoly(T).as_expr() * scale, T)
    coeffs = [sympy.Rational(c) for c in reversed(poly.all_coeffs())]
    assert all(c.q == 1 for c in coeffs), coeffs
    return [int(c) for c in coeffs]


def ratio_product(roots, a, b, z):
    """prod over (J, K) of (z - lambda_J / lambda_K) for rational roots."""
    roots = [Fraction(r) for r in roots]
    out = Fraction(1)
    for J in product(roots, repeat=a):
        num = Fraction(1)
        for r in J:
            num *= r
        for K in product(roots, repeat=b):
            den = Fraction(1)
            for r in K:
                den *= r
            out *= z - num / den
    return out


def brute_point_count(A, B, p):
    """#E(F_p) by checking every (x, y)."""
    count = 1
    for x in range(p):
        rhs = (x * x * x + A * x + B) % p
        count += sum(1 for y in range(p) if (y * y - rhs) % p == 0)
    return count


def companion_resultant(p, q):
    """Res(p, q) = lead(p)^deg q * det q(C) with C the companion matrix of p / lead(p).

    p and q are ascending coefficient sequences, deg p >= 1.
    """
    n, m = len(p) - 1, len(q) - 1
    a = sympy.Rational(p[-1])
    C = sympy.zeros(n, n)
    for i in range(1, n):
        C[i, i - 1] = 1
    for i in range(n):
        C[i, n - 1] = -sympy.Rational(p[i]) / a
    acc = sympy.zeros(n, n)
    for c in reversed(q):
        acc = acc * C + c * sympy.eye(n)
    val = a**m * acc.det()
    assert val.q == 1
    return int(val)


def plain_kronecker(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def fraction_inverse_transpose(a):
    """(A^-1)^T over Q by Gauss-Jordan on Fractions."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    inv = [row[n:] for row in m]
    return [[inv[j][i] for j in range(n)] for i in range(n)]


def leverrier_charpoly(a):
    """Ascending coefficients of det(T I - A) by Faddeev-LeVerrier over Q."""
    n = len(a)
    a = [[Fraction(x) for x in row] for row in a]
    coeffs = [Fraction(0)] * n + [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = [[sum(a[i][t] * M[t][j] for t in range(n)) + (c if i == j else 0)
              for j in range(n)] for i in range(n)]
        AM = [[sum(a[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs
