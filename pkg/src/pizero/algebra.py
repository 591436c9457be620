"""Exact arithmetic over Z, Q and F_l: polynomials, resultants, matrices.

Polynomials store coefficients in ascending degree.  Matrices are plain
row-major sequences of sequences holding ``int`` or ``Fraction`` entries;
functions that work over a prime field take an ``ell`` keyword and treat
entries as residues modulo ``ell``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from sympy import isprime

Matrix = Sequence[Sequence[int]]


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def check_prime(ell: int) -> int:
    if not isinstance(ell, int) or ell < 2 or not isprime(ell):
        raise ValueError(f"{ell!r} is not a prime")
    return ell


# --------------------------------------------------------------------------
# prime fields


@dataclass(frozen=True)
class PrimeField:
    """The field F_ell.  Elements are plain ints in ``range(ell)``."""

    ell: int

    def __post_init__(self):
        check_prime(self.ell)

    def __call__(self, x: int) -> int:
        return x % self.ell

    def __iter__(self):
        return iter(range(self.ell))

    def __len__(self):
        return self.ell

    def add(self, x, y):
        return (x + y) % self.ell

    def sub(self, x, y):
        return (x - y) % self.ell

    def neg(self, x):
        return -x % self.ell

    def mul(self, x, y):
        return x * y % self.ell

    def inv(self, x):
        x %= self.ell
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.ell}")
        return pow(x, -1, self.ell)

    def div(self, x, y):
        return x * self.inv(y) % self.ell

    def pow(self, x, k):
        if k < 0:
            return pow(self.inv(x), -k, self.ell)
        return pow(x, k, self.ell)

    def legendre(self, x) -> int:
        """1 for nonzero squares, -1 for non-squares, 0 for 0 (ell odd)."""
        x %= self.ell
        if x == 0:
            return 0
        if self.ell == 2:
            return 1
        return 1 if pow(x, (self.ell - 1) // 2, self.ell) == 1 else -1

    def nonsquare(self) -> int:
        if self.ell == 2:
            raise ValueError("every element of F_2 is a square")
        return next(x for x in range(2, self.ell) if self.legendre(x) == -1)

    def primitive_root(self) -> int:
        if self.ell == 2:
            return 1
        factors = _prime_factors(self.ell - 1)
        for g in range(2, self.ell):
            if all(pow(g, (self.ell - 1) // q, self.ell) != 1 for q in factors):
                return g
        raise AssertionError("unreachable")


def _prime_factors(m):
    out, q = [], 2
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        out.append(m)
    return out


# --------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class IntPoly:
    """Univariate polynomial with integer coefficients, ascending degree."""

    coeffs: tuple

    def __init__(self, coeffs=()):
        coeffs = _strip(coeffs)
        for c in coeffs:
            if not isinstance(c, int):
                raise TypeError(f"IntPoly coefficient {c!r} is not an int")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_roots(cls, roots):
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @classmethod
    def monomial(cls, k, c=1):
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lead == 1

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_intpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_intpoly(other))

    def __rsub__(self, other):
        return _as_intpoly(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        other = _as_intpoly(other)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = IntPoly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod_exact(self, other):
        """Long division in Z[T]; raises if a quotient digit is not integral."""
        other = _as_intpoly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q, r = divmod(c, other.lead)
            if r:
                raise ArithmeticError(f"{other} does not divide {self} over Z")
            quot[k - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= q * b
        return IntPoly(quot), IntPoly(rem)

    def __floordiv__(self, other):
        if isinstance(other, int):
            out = []
            for c in self.coeffs:
                q, r = divmod(c, other)
                if r:
                    raise ArithmeticError(f"{other} does not divide {self}")
                out.append(q)
            return IntPoly(out)
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self} over Z")
        return q

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = _gcd(g, c)
        return g

    def reverse(self, n=None):
        """T^n p(1/T); n defaults to the degree."""
        n = self.degree if n is None else n
        return IntPoly(self[n - k] for k in range(n + 1))

    def scale_variable(self, s):
        """p(s*T)."""
        return IntPoly(c * s**k for k, c in enumerate(self.coeffs))

    def reduce(self, ell):
        return reduce_mod(self, ell)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        return _format_poly(self.coeffs)


def _as_intpoly(x):
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly((x,))
    raise TypeError(f"cannot coerce {x!r} to IntPoly")


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _format_poly(coeffs, var="T"):
    if not coeffs:
        return "0"
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            body = mono
        elif mono and c == -1:
            body = "-" + mono
        else:
            body = f"{c}{'*' if mono else ''}{mono}"
        terms.append(body)
    return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class ModPoly:
    """Polynomial over F_ell with canonical coefficients in ``range(ell)``."""

    coeffs: tuple
    ell: int

    def __init__(self, coeffs, ell):
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "coeffs", _strip(c % ell for c in coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.ell
        return acc

    def _check(self, other):
        if isinstance(other, int):
            return ModPoly((other,), self.ell)
        if not isinstance(other, ModPoly) or other.ell != self.ell:
            raise TypeError("ModPoly operands must share the same modulus")
        return other

    def __add__(self, other):
        other = self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ModPoly((self[k] + other[k] for k in range(n)), self.ell)

    __radd__ = __add__

    def __neg__(self):
        return ModPoly((-c for c in self.coeffs), self.ell)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        if self.is_zero() or other.is_zero():
            return ModPoly((), self.ell)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ModPoly(out, self.ell)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        inv = pow(other.lead, -1, self.ell)
        rem = list(self.coeffs)
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            q = rem[k] * inv % self.ell
            if q:
                quot[k - dq] = q
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= q * b
        return ModPoly(quot, self.ell), ModPoly(rem, self.ell)

    def __repr__(self):
        return f"ModPoly({list(self.coeffs)}, ell={self.ell})"

    def __str__(self):
        return f"{_format_poly(self.coeffs)} over F_{self.ell}"


def reduce_mod(p: IntPoly, ell: int) -> ModPoly:
    """Coefficientwise reduction Z[T] -> F_ell[T]."""
    check_prime(ell)
    return ModPoly(p.coeffs, ell)


def poly_gcd_q(p: IntPoly, q: IntPoly) -> IntPoly:
    """Euclidean gcd over Q, returned as a primitive integer polynomial."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while b:
        a, b = b, _fraction_rem(a, b)
    if not a:
        return IntPoly()
    den = 1
    for c in a:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = IntPoly(int(c * den) for c in a)
    g = ints.content()
    ints = ints // g
    return -ints if ints.lead < 0 else ints


def _fraction_rem(a, b):
    rem = list(a)
    while len(rem) >= len(b):
        q = rem[-1] / b[-1]
        shift = len(rem) - len(b)
        for j, c in enumerate(b):
            rem[shift + j] -= q * c
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return rem


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPoly:
    """Phi_m, obtained by dividing T^m - 1 by Phi_d for the proper divisors d."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"cyclotomic order must be a positive integer, got {m!r}")
    p = IntPoly.monomial(m) - 1
    for d in range(1, m):
        if m % d == 0:
            p = p // cyclotomic(d)
    return p


# --------------------------------------------------------------------------
# determinants and resultants


def bareiss_det(rows):
    """Fraction-free determinant over an integral domain with exact ``//``.

    Works for int entries and for IntPoly entries.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(a[i][k])), None)
            if swap is None:
                return a[k][k] * 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = piv
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def _is_zero(x):
    return x.is_zero() if isinstance(x, IntPoly) else x == 0


def sylvester_matrix(p_coeffs, q_coeffs):
    """Sylvester matrix of two coefficient lists given in ascending degree.

    The formal degrees are ``len - 1``; entries may be ints or IntPolys.
    """
    m, n = len(p_coeffs) - 1, len(q_coeffs) - 1
    zero = p_coeffs[0] * 0
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(p_coeffs)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(q_coeffs)):
            row[i + k] = c
        rows.append(row)
    return rows


def resultant(p: IntPoly, q: IntPoly) -> int:
    """Res(p, q) as the determinant of the Sylvester matrix, fraction-free."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return 1
    return bareiss_det(sylvester_matrix(list(p.coeffs), list(q.coeffs)))


# --------------------------------------------------------------------------
# matrices


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _check_square(m):
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    return n


def mat_mul(a, b, ell=None):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            s = 0
            for t in range(k):
                s += ai[t] * b[t][j]
            row.append(s % ell if ell else s)
        out.append(tuple(row))
    return tuple(out)


def mat_pow(a, k, ell=None):
    out = identity(len(a))
    while k:
        if k & 1:
            out = mat_mul(out, a, ell)
        a = mat_mul(a, a, ell)
        k >>= 1
    return out


def transpose(a):
    return tuple(zip(*a))


def kronecker(a, b):
    n, m = len(a), len(b)
    return tuple(
        tuple(a[i // m][j // m] * b[i % m][j % m] for j in range(n * m))
        for i in range(n * m)
    )


def det(m, ell=None):
    """Determinant; exact over Z or Q, or modulo ``ell``."""
    n = _check_square(m)
    if ell is not None:
        return mat_inverse_det(m, ell)[1]
    if any(isinstance(x, Fraction) for r in m for x in r):
        return _fraction_det(m)
    return bareiss_det(m) if n else 1


def _fraction_det(m):
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    d = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        d *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return d


def mat_inverse(m, ell=None):
    """Inverse over Q (Fraction entries) or over F_ell."""
    n = _check_square(m)
    if ell is not None:
        inv, d = mat_inverse_det(m, ell)
        if d == 0:
            raise ZeroDivisionError("matrix is singular mod ell")
        return inv
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [x / p for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(tuple(r[n:]) for r in a)


def mat_inverse_det(m, ell):
    """Gauss-Jordan over F_ell; returns (inverse or None, determinant)."""
    n = _check_square(m)
    a = [[x % ell for x in r] + [int(i == j) for j in range(n)]
         for i, r in enumerate(m)]
    d = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return None, 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        p = a[k][k]
        d = d * p % ell
        pinv = pow(p, -1, ell)
        a[k] = [x * pinv % ell for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [(x - f * y) % ell for x, y in zip(a[i], a[k])]
    return tuple(tuple(r[n:]) for r in a), d % ell


def charpoly_coeffs(m, ell=None):
    """Coefficients of det(T*I - m), ascending, by Berkowitz's algorithm.

    Division-free, so valid over any commutative ring: Z, Q (Fraction
    entries) and F_ell for every ell, including ell <= n.
    """
    n = _check_square(m)
    red = (lambda x: x % ell) if ell else (lambda x: x)
    a = [[red(x) for x in r] for r in m]
    # vect holds coefficients of the leading k x k block, highest degree first
    vect = [1]
    for k in range(n):
        col = [a[i][k] for i in range(k)]
        row = a[k][:k]
        sub = [r[:k] for r in a[:k]]
        toe = [1, red(-a[k][k])]
        w = col
        for _ in range(k):
            toe.append(red(-sum(x * y for x, y in zip(row, w))))
            w = [red(sum(s * y for s, y in zip(r, w))) for r in sub]
        new = []
        for i in range(k + 2):
            s = 0
            for j in range(max(0, i - len(toe) + 1), min(i, k) + 1):
                s += toe[i - j] * vect[j]
            new.append(red(s))
        vect = new
    return list(reversed(vect))


def charpoly(m, ell=None):
    """det(T*I - m) as an IntPoly, or a ModPoly when ``ell`` is given.

    Rational matrices are accepted as long as the characteristic polynomial
    is integral (e.g. conjugates of integer matrices); otherwise use
    :func:`charpoly_coeffs`.
    """
    coeffs = charpoly_coeffs(m, ell)
    if ell is not None:
        check_prime(ell)
        return ModPoly(coeffs, ell)
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator != 1:
            raise ValueError("characteristic polynomial is not integral; "
                             "clear denominators or use charpoly_coeffs")
        out.append(int(c))
    return IntPoly(out)


def companion(p: IntPoly):
    """Companion matrix with characteristic polynomial p (p monic)."""
    if not p.is_monic():
        raise ValueError("companion matrix needs a monic polynomial")
    n = p.degree
    rows = []
    for i in range(n):
        row = [0] * n
        if i > 0:
            row[i - 1] = 1
        row[n - 1] = -p[i]
        rows.append(tuple(row))
    return tuple(rows)


def all_matrices(n, ell):
    """Every n x n matrix over F_ell as a tuple of row tuples."""
    for flat in product(range(ell), repeat=n * n):
        yield tuple(flat[i * n:(i + 1) * n] for i in range(n))
