"""Component-detecting polynomial evaluated through characteristic polynomials.

For g in GL_n write det(T - g) = T^n + alpha_1 T^(n-1) + ... + alpha_n and
let chi(g) = (alpha_1, ..., alpha_n).  A :class:`TensorSpec` lists triples
(a, b, m); each triple contributes

    Q_{a,b,m}(alpha) = prod over primitive m-th roots zeta of P_{a,b}(zeta, alpha)

where P_{a,b} is the characteristic polynomial of g on V^{(x)a} (x) (V^dual)^{(x)b}
with denominators cleared by ``c(0) ** (b * n ** (a + b - 1))``.  The product
of the Q's vanishes at chi(g) whenever some eigenvalue ratio of g in one of
those tensor spaces is a primitive m-th root of unity, and is nonzero at the
identity.

Nothing is expanded symbolically: every quantity is an exact integer
evaluation at a concrete alpha-vector, computed with resultants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .algebra import (
    IntPoly,
    bareiss_det,
    charpoly,
    check_prime,
    cyclotomic,
    resultant,
    sylvester_matrix,
)

__all__ = [
    "CharPoint",
    "TensorSpec",
    "DensityReport",
    "PRESETS",
    "chi",
    "chi_of_poly",
    "poly_of_chi",
    "dual_charpoly",
    "tensor_charpoly",
    "p_ab",
    "clearing_exponent",
    "q_ab",
    "serre_f_eval",
    "serre_f_eval_mod",
    "density_test",
    "parse_spec",
]


@dataclass(frozen=True)
class CharPoint:
    """Coefficient vector (alpha_1, ..., alpha_n) of a characteristic polynomial.

    ``ell`` is None for points over Z; otherwise entries are residues mod ell.
    """

    alpha: tuple
    ell: Optional[int] = None

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        if self.ell is not None:
            alpha = tuple(a % self.ell for a in alpha)
        object.__setattr__(self, "alpha", alpha)
        if not alpha:
            raise ValueError("CharPoint needs n >= 1 coefficients")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def trace(self) -> int:
        t = -self.alpha[0]
        return t % self.ell if self.ell else t

    @property
    def det(self) -> int:
        d = (-1) ** self.n * self.alpha[-1]
        return d % self.ell if self.ell else d

    def is_invertible(self) -> bool:
        return self.alpha[-1] != 0

    def charpoly(self) -> IntPoly:
        """The monic integer polynomial with these coefficients (lifted if mod ell)."""
        return poly_of_chi(self)

    def reduce(self, ell: int) -> "CharPoint":
        check_prime(ell)
        if self.ell is not None and self.ell != ell:
            raise ValueError("cannot change the modulus of a mod-ell CharPoint")
        return CharPoint(self.alpha, ell)


@dataclass(frozen=True)
class TensorSpec:
    """Triples (a, b, m): tensor space V^{(x)a} (x) (V^dual)^{(x)b}, root order m."""

    factors: tuple

    def __init__(self, factors):
        facs = tuple(tuple(int(x) for x in f) for f in factors)
        for f in facs:
            if len(f) != 3:
                raise ValueError(f"tensor factor {f} is not a triple (a, b, m)")
            a, b, m = f
            if a < 0 or b < 0 or a + b < 1:
                raise ValueError(f"tensor factor {f}: need a, b >= 0 and a + b >= 1")
            if m < 2:
                raise ValueError(f"tensor factor {f}: root order m must be >= 2")
        object.__setattr__(self, "factors", facs)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        return ";".join(",".join(str(x) for x in f) for f in self.factors)


# Built-in detectors, keyed by name.  Bump PRESETS_VERSION when changing one.
PRESETS_VERSION = 1
PRESETS = {
    # ratio of the two eigenvalues equal to -1: the non-identity coset of a
    # Cartan normalizer in GL_2 (trace zero)
    "cartan2": TensorSpec([(1, 1, 2)]),
    # an eigenvalue equal to -1
    "sign1": TensorSpec([(1, 0, 2)]),
    # an eigenvalue ratio of order 3
    "order3": TensorSpec([(1, 1, 3)]),
}


def parse_spec(text: str) -> TensorSpec:
    """A preset name, or explicit triples such as ``"1,1,2;2,0,3"``."""
    text = text.strip()
    if text in PRESETS:
        return PRESETS[text]
    try:
        triples = [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part]
    except ValueError:
        raise ValueError(f"unknown preset or malformed triples: {text!r}") from None
    if not triples:
        raise ValueError("empty tensor spec")
    return TensorSpec(triples)


# --------------------------------------------------------------------------
# chi


def chi(g, ell: Optional[int] = None) -> CharPoint:
    """Characteristic-polynomial coefficients of an invertible matrix."""
    c = charpoly(g, ell)
    alpha = tuple(c[len(c.coeffs) - 1 - i] for i in range(1, len(c.coeffs)))
    if alpha[-1] == 0:
        raise ValueError("chi is defined on invertible matrices only")
    return CharPoint(alpha, ell)


def chi_of_poly(c: IntPoly) -> CharPoint:
    if not c.is_monic():
        raise ValueError(f"{c} is not monic")
    if c.degree < 1:
        raise ValueError("need a polynomial of degree >= 1")
    if c[0] == 0:
        raise ValueError(f"{c} has zero constant term")
    n = c.degree
    return CharPoint(tuple(c[n - i] for i in range(1, n + 1)))


def poly_of_chi(point: CharPoint) -> IntPoly:
    n = point.n
    return IntPoly([point.alpha[n - 1 - k] for k in range(n)] + [1])


def _as_poly(c) -> IntPoly:
    if isinstance(c, CharPoint):
        return poly_of_chi(c)
    return c


def _check_charpoly(c: IntPoly):
    if not c.is_monic() or c.degree < 1:
        raise ValueError(f"{c} is not a monic polynomial of degree >= 1")
    if c[0] == 0:
        raise ValueError(f"{c} has zero constant term")


# --------------------------------------------------------------------------
# tensor constructions


def dual_charpoly(c: IntPoly):
    """Integer form of the polynomial whose roots are the inverse roots of c.

    Returns ``(D, u)`` with ``u = (-1)^n c(0)`` (the product of the roots) and
    ``D = u * prod(T - 1/lambda_i)`` in Z[T]; the monic dual is ``D / u``.
    """
    c = _as_poly(c)
    _check_charpoly(c)
    n = c.degree
    d = c.reverse()
    if n % 2:
        d = -d
    return d, d.lead


def _tensor_scaled(f: IntPoly, g: IntPoly) -> IntPoly:
    """Res_x(f(x), x^m g(T/x)) with m = deg g.

    For f = a prod(T - r_i) of degree n and g = b prod(T - s_j) of degree m
    this is a^m b^n prod(T - r_i s_j).
    """
    m = g.degree
    # x^m g(T/x) = sum_k g_k T^k x^(m-k); coefficient of x^j is g_{m-j} T^(m-j)
    h = [IntPoly.monomial(m - j, g[m - j]) for j in range(m + 1)]
    fx = [IntPoly((c,)) for c in f.coeffs]
    return bareiss_det(sylvester_matrix(fx, h))


def tensor_charpoly(c: IntPoly, d: IntPoly) -> IntPoly:
    """Monic polynomial whose roots are all products lambda_i * mu_j."""
    c, d = _as_poly(c), _as_poly(d)
    _check_charpoly(c)
    _check_charpoly(d)
    return _tensor_scaled(c, d)


def clearing_exponent(n: int, a: int, b: int) -> int:
    return b * n ** (a + b - 1)


def p_ab(c, a: int, b: int) -> IntPoly:
    """Characteristic polynomial on V^{(x)a} (x) (V^dual)^{(x)b}, cleared.

    Equal to ``c(0) ** clearing_exponent(n, a, b)`` times the monic
    polynomial with roots lambda_J / lambda_K over all multi-indices.
    """
    c = _as_poly(c)
    _check_charpoly(c)
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need a, b >= 0 and a + b >= 1")
    n = c.degree
    dual, det_g = dual_charpoly(c)
    factors = [(c, 1)] * a + [(dual, det_g)] * b
    acc, lead = factors[0]
    deg = n
    for f, lf in factors[1:]:
        acc = _tensor_scaled(acc, f)
        lead = lead**n * lf**deg
        deg *= n
    e = clearing_exponent(n, a, b)
    target = c[0] ** e
    # lead is det(g)^e = +-c(0)^e; fix the sign to the declared normalisation
    if lead == target:
        return acc
    if lead == -target:
        return -acc
    raise AssertionError(f"unexpected clearing factor {lead} vs {target}")


def q_ab(c, a: int, b: int, m: int) -> int:
    """prod over primitive m-th roots zeta of P_{a,b}(zeta) = Res(Phi_m, P_{a,b})."""
    if m < 2:
        raise ValueError("root order m must be >= 2")
    return resultant(cyclotomic(m), p_ab(c, a, b))


def serre_f_eval(c, spec: TensorSpec) -> int:
    """f(chi) = product of Q_{a,b,m} over the spec's factors, exactly over Z."""
    if not isinstance(spec, TensorSpec):
        spec = TensorSpec(spec)
    if not len(spec):
        raise ValueError("empty tensor spec")
    c = _as_poly(c)
    out = 1
    for a, b, m in spec:
        q = q_ab(c, a, b, m)
        if q == 0:
            return 0
        out *= q
    return out


def serre_f_eval_mod(point: CharPoint, spec: TensorSpec, ell: Optional[int] = None) -> int:
    """Reduction mod ell of f at a point over F_ell (via canonical integer lifts).

    f has integer coefficients in the alpha's, so evaluating at any lift and
    reducing gives the value of the reduced polynomial.
    """
    ell = ell if ell is not None else point.ell
    if ell is None:
        raise ValueError("need a modulus")
    if point.alpha[-1] % ell == 0:
        raise ValueError("clearing factor c(0) vanishes mod ell")
    lifted = CharPoint(tuple(a % ell for a in point.alpha))
    return serre_f_eval(lifted, spec) % ell


# --------------------------------------------------------------------------
# density


@dataclass
class DensityReport:
    tested: int
    zeros: int
    cutoff: Optional[int]
    spec: str
    ell: Optional[int] = None
    expected: Optional[Fraction] = None
    skipped: int = 0
    zero_primes_head: list = field(default_factory=list)

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.zeros, self.tested)

    def to_dict(self):
        est = self.estimate
        out = {
            "tested": self.tested,
            "zeros": self.zeros,
            "estimate": f"{est.numerator}/{est.denominator}",
            "estimate_float": round(float(est), 6),
            "cutoff": self.cutoff,
            "spec": self.spec,
            "ell": self.ell,
            "skipped": self.skipped,
            "expected": None,
            "zero_primes_head": list(self.zero_primes_head),
        }
        if self.expected is not None:
            out["expected"] = f"{self.expected.numerator}/{self.expected.denominator}"
        return out


def _record_point(rec):
    """Accept FrobeniusRecords, CharPoints and IntPolys uniformly."""
    if isinstance(rec, CharPoint):
        return None, rec
    if isinstance(rec, IntPoly):
        return None, chi_of_poly(rec)
    return getattr(rec, "p", None), rec.alpha


def density_test(
    records: Iterable,
    spec: TensorSpec,
    expected: Optional[Sequence[int]] = None,
    ell: Optional[int] = None,
    cutoff: Optional[int] = None,
) -> DensityReport:
    """Fraction of records at which f(chi(Frob)) vanishes.

    With ``ell`` the test runs on the reductions mod ell; records whose
    clearing factor vanishes mod ell (p = ell) are skipped and counted.
    ``expected`` is an optional pair (k, |pi_0|).
    """
    if not isinstance(spec, TensorSpec):
        spec = TensorSpec(spec)
    if ell is not None:
        check_prime(ell)
    cache = {}
    tested = zeros = skipped = 0
    head = []
    max_p = None
    for rec in records:
        p, point = _record_point(rec)
        if p is not None:
            max_p = p if max_p is None else max(max_p, p)
        if ell is not None:
            if point.alpha[-1] % ell == 0 or p == ell:
                skipped += 1
                continue
            key = tuple(a % ell for a in point.alpha)
        else:
            key = point.alpha
        val = cache.get(key)
        if val is None:
            if ell is None:
                val = serre_f_eval(point, spec)
            else:
                val = serre_f_eval_mod(CharPoint(key, ell), spec)
            cache[key] = val
        tested += 1
        if val == 0:
            zeros += 1
            if p is not None and len(head) < 20:
                head.append(p)
    if tested == 0:
        raise ValueError("density test on an empty record stream")
    if cutoff is None and max_p is not None:
        cutoff = max_p + 1
    exp = Fraction(*expected) if expected is not None else None
    return DensityReport(
        tested=tested,
        zeros=zeros,
        cutoff=cutoff,
        spec=str(spec),
        ell=ell,
        expected=exp,
        skipped=skipped,
        zero_primes_head=head,
    )
