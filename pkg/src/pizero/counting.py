"""Orders of standard groups over F_l and exhaustive counts on detector slices.

The slice of a group G by a tensor spec is Z = {g in G(F_l) : f(chi(g)) = 0 mod l}.
For connected G it is a hypersurface and |Z| grows like l^(dim G - 1); for a
Cartan normalizer the whole non-identity coset lies in Z.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional

from .algebra import (
    PrimeField,
    charpoly_coeffs,
    check_prime,
    mat_inverse_det,
    mat_mul,
    transpose,
)
from .detector import CharPoint, TensorSpec, serre_f_eval_mod
from .envelope import BudgetExceeded, _unflat, closure

DEFAULT_COUNT_BUDGET = 5 * 10**6

# family -> (dimension, rank, connected); parameter k is n, g or r
_FAMILIES = {
    "GL": (lambda k: k * k, lambda k: k, True),
    "SL": (lambda k: k * k - 1, lambda k: k - 1, True),
    "Sp": (lambda g: 2 * g * g + g, lambda g: g, True),
    "GSp": (lambda g: 2 * g * g + g + 1, lambda g: g + 1, True),
    "Gm": (lambda r: r, lambda r: r, True),
    "split_cartan": (lambda _: 2, lambda _: 2, True),
    "nonsplit_cartan": (lambda _: 2, lambda _: 2, True),
    "split_cartan_normalizer": (lambda _: 2, lambda _: 2, False),
    "nonsplit_cartan_normalizer": (lambda _: 2, lambda _: 2, False),
}

_ALIASES = {
    "cartan-split": "split_cartan",
    "cartan-nonsplit": "nonsplit_cartan",
    "normalizer-split": "split_cartan_normalizer",
    "normalizer-nonsplit": "nonsplit_cartan_normalizer",
    "split-normalizer": "split_cartan_normalizer",
    "nonsplit-normalizer": "nonsplit_cartan_normalizer",
}


class UnsupportedFamily(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """A standard algebraic subgroup of GL_n over F_ell.

    ``param`` is n for GL/SL, g for Sp_2g/GSp_2g, r for the split torus
    G_m^r and unused for the GL_2 Cartan families.
    """

    family: str
    param: int
    ell: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise UnsupportedFamily(f"unsupported group family {self.family!r}")
        check_prime(self.ell)
        if self.param < 1:
            raise ValueError("group parameter must be positive")
        if "cartan" in self.family and self.ell == 2:
            raise ValueError("Cartan families need odd ell")

    @classmethod
    def parse(cls, name: str, ell: int) -> "GroupSpec":
        """'GL2', 'SL3', 'Sp4', 'GSp4', 'Gm', 'Gm^3', 'normalizer-split', ..."""
        key = name.strip()
        if key in _ALIASES:
            return cls(_ALIASES[key], 1, ell)
        if key in _FAMILIES and "cartan" in key:
            return cls(key, 1, ell)
        m = re.fullmatch(r"(GL|SL|GSp|Sp|Gm)\^?(\d*)", key)
        if not m:
            raise UnsupportedFamily(f"unknown group family {name!r}")
        fam, num = m.group(1), m.group(2)
        k = int(num) if num else 1
        if fam in ("Sp", "GSp"):
            if k % 2:
                raise UnsupportedFamily(f"{name}: symplectic groups need even size")
            k //= 2
        return cls(fam, k, ell)

    @property
    def name(self):
        if self.family in ("Sp", "GSp"):
            return f"{self.family}{2 * self.param}"
        if self.family == "Gm":
            return "Gm" if self.param == 1 else f"Gm^{self.param}"
        if self.family in ("GL", "SL"):
            return f"{self.family}{self.param}"
        return self.family

    @property
    def n(self) -> int:
        if self.family in ("GL", "SL", "Gm"):
            return self.param
        if self.family in ("Sp", "GSp"):
            return 2 * self.param
        return 2

    @property
    def dimension(self) -> int:
        return _FAMILIES[self.family][0](self.param)

    @property
    def rank(self) -> int:
        return _FAMILIES[self.family][1](self.param)

    @property
    def connected(self) -> bool:
        return _FAMILIES[self.family][2]

    def with_ell(self, ell):
        return GroupSpec(self.family, self.param, ell)

    def contains(self, m) -> bool:
        """Membership of a matrix (entries read mod ell)."""
        ell, n = self.ell, self.n
        m = tuple(tuple(x % ell for x in r) for r in m)
        if len(m) != n or any(len(r) != n for r in m):
            return False
        d = _det_mod(m, ell)
        if d == 0:
            return False
        fam = self.family
        if fam == "GL":
            return True
        if fam == "SL":
            return d == 1
        if fam == "Gm":
            return all(m[i][j] == 0 for i in range(n) for j in range(n) if i != j)
        if fam in ("Sp", "GSp"):
            J = tuple(tuple(x % ell for x in r) for r in symplectic_form(self.param))
            lhs = mat_mul(mat_mul(transpose(m), J, ell), m, ell)
            if fam == "Sp":
                return lhs == J
            mu = lhs[0][self.param]
            return mu != 0 and lhs == tuple(tuple(x * mu % ell for x in r) for r in J)
        (a, b), (c, e) = m
        diag = b == 0 and c == 0
        anti = a == 0 and e == 0
        if fam == "split_cartan":
            return diag
        if fam == "split_cartan_normalizer":
            return diag or anti
        eps = PrimeField(ell).nonsquare()
        in_torus = a == e and b == eps * c % ell
        if fam == "nonsplit_cartan":
            return in_torus
        # nonsplit normalizer: torus and torus * diag(1, -1)
        return in_torus or (a == -e % ell and b == -eps * c % ell)


def symplectic_form(g):
    n = 2 * g
    return tuple(
        tuple(1 if j == i + g else (-1 if i == j + g else 0) for j in range(n))
        for i in range(n)
    )


def _det_mod(m, ell):
    n = len(m)
    if n == 1:
        return m[0][0] % ell
    if n == 2:
        return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % ell
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = m
        return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % ell
    return mat_inverse_det(m, ell)[1]


def symplectic_generators(g, ell, similitude=False):
    """Symplectic transvections x -> x + <x, v> v for v in e_i and e_i + e_j."""
    n = 2 * g
    J = symplectic_form(g)
    vecs = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    vecs += [tuple(int(k in (i, j)) for k in range(n)) for i in range(n) for j in range(i + 1, n)]
    gens = []
    for v in vecs:
        # <x, v> = x^T J v ; transvection matrix I + v (J v)^T
        jv = [sum(J[r][c] * v[c] for c in range(n)) for r in range(n)]
        gens.append(tuple(tuple((int(r == c) + v[r] * jv[c]) % ell for c in range(n))
                          for r in range(n)))
    if similitude:
        mu = PrimeField(ell).primitive_root()
        gens.append(tuple(tuple((mu if r == c and r >= g else int(r == c)) for c in range(n))
                          for r in range(n)))
    return gens


# --------------------------------------------------------------------------
# orders


def group_order(G: GroupSpec) -> int:
    """|G(F_ell)| from the standard product formulas."""
    q, k = G.ell, G.param
    fam = G.family
    if fam == "GL":
        out = 1
        for i in range(k):
            out *= q**k - q**i
        return out
    if fam == "SL":
        return group_order(GroupSpec("GL", k, q)) // (q - 1)
    if fam == "Sp":
        out = q ** (k * k)
        for i in range(1, k + 1):
            out *= q ** (2 * i) - 1
        return out
    if fam == "GSp":
        return (q - 1) * group_order(GroupSpec("Sp", k, q))
    if fam == "Gm":
        return (q - 1) ** k
    if fam == "split_cartan":
        return (q - 1) ** 2
    if fam == "nonsplit_cartan":
        return q * q - 1
    if fam == "split_cartan_normalizer":
        return 2 * (q - 1) ** 2
    if fam == "nonsplit_cartan_normalizer":
        return 2 * (q * q - 1)
    raise UnsupportedFamily(fam)


def enumerate_group(G: GroupSpec, budget=DEFAULT_COUNT_BUDGET):
    """Yield every element of G(F_ell) as a tuple of row tuples.

    GL/SL scan all ell^(n^2) matrices; tori and Cartan normalizers are
    parametrised directly; symplectic groups are generated from transvections.
    """
    ell, n, fam = G.ell, G.n, G.family
    if fam in ("GL", "SL"):
        if ell ** (n * n) > budget:
            raise BudgetExceeded(f"{G.name} over F_{ell}: {ell ** (n * n)} candidate matrices")
        want_one = fam == "SL"
        for flat in product(range(ell), repeat=n * n):
            m = _unflat(flat, n)
            d = _det_mod(m, ell)
            if d and (not want_one or d == 1):
                yield m
        return
    if group_order(G) > budget:
        raise BudgetExceeded(f"{G.name} over F_{ell} has {group_order(G)} elements")
    if fam == "Gm":
        for diag in product(range(1, ell), repeat=n):
            yield tuple(tuple(diag[i] if i == j else 0 for j in range(n)) for i in range(n))
        return
    if fam in ("split_cartan", "split_cartan_normalizer"):
        for x, y in product(range(1, ell), repeat=2):
            yield ((x, 0), (0, y))
            if fam == "split_cartan_normalizer":
                yield ((0, x), (y, 0))
        return
    if fam in ("nonsplit_cartan", "nonsplit_cartan_normalizer"):
        eps = PrimeField(ell).nonsquare()
        for a, b in product(range(ell), repeat=2):
            if a == 0 and b == 0:
                continue
            yield ((a, eps * b % ell), (b, a))
            if fam == "nonsplit_cartan_normalizer":
                yield ((a, -eps * b % ell), (b, -a % ell))
        return
    if fam in ("Sp", "GSp"):
        gens = symplectic_generators(G.param, ell, similitude=fam == "GSp")
        for flat in sorted(closure(gens, ell, budget)):
            yield _unflat(flat, n)
        return
    raise UnsupportedFamily(fam)


def chi_histogram(G: GroupSpec, budget=DEFAULT_COUNT_BUDGET) -> Counter:
    """Multiplicity of each chi-value (alpha-vector mod ell) over G(F_ell)."""
    ell, n = G.ell, G.n
    hist = Counter()
    if n == 2:
        for (a, b), (c, d) in enumerate_group(G, budget):
            hist[(-(a + d) % ell, (a * d - b * c) % ell)] += 1
        return hist
    for m in enumerate_group(G, budget):
        coeffs = charpoly_coeffs(m, ell)
        hist[tuple(coeffs[n - i] for i in range(1, n + 1))] += 1
    return hist


# --------------------------------------------------------------------------
# reports


@dataclass
class CountReport:
    ell: int
    group: str
    dimension: int
    order: int
    slice_count: Optional[int] = None
    lower_ok: Optional[bool] = None
    upper_ok: Optional[bool] = None

    @property
    def lower_ratio(self) -> Fraction:
        """|A| / (ell - 1)^d, at least 1 when the lower bound holds."""
        return Fraction(self.order, (self.ell - 1) ** self.dimension)

    @property
    def upper_ratio(self) -> Fraction:
        """|A| / (ell + 1)^d, at most 1 when the upper bound holds."""
        return Fraction(self.order, (self.ell + 1) ** self.dimension)

    @property
    def slice_ratio(self) -> Optional[Fraction]:
        """|Z| / ell^(d - 1)."""
        if self.slice_count is None:
            return None
        return Fraction(self.slice_count, self.ell ** (self.dimension - 1))

    @property
    def slice_fraction(self) -> Optional[Fraction]:
        """|Z| / |G|."""
        if self.slice_count is None:
            return None
        return Fraction(self.slice_count, self.order)

    def to_dict(self):
        out = {
            "ell": self.ell,
            "group": self.group,
            "dimension": self.dimension,
            "order": self.order,
            "lower_ratio": round(float(self.lower_ratio), 6),
            "upper_ratio": round(float(self.upper_ratio), 6),
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "slice_count": self.slice_count,
        }
        if self.slice_count is not None:
            out["slice_ratio"] = round(float(self.slice_ratio), 6)
            out["slice_fraction"] = round(float(self.slice_fraction), 6)
        return out


def verify_gpbound(G: GroupSpec, ells: Iterable[int]) -> list:
    """Check (ell - 1)^d <= |G(F_ell)| <= (ell + 1)^d exactly, d = dim G."""
    if not G.connected:
        raise ValueError(f"{G.name} is not connected; the order bounds do not apply")
    reports = []
    for ell in ells:
        H = G.with_ell(ell)
        order = group_order(H)
        d = H.dimension
        reports.append(CountReport(
            ell=ell,
            group=H.name,
            dimension=d,
            order=order,
            lower_ok=(ell - 1) ** d <= order,
            upper_ok=order <= (ell + 1) ** d,
        ))
    return reports


def count_slice(G: GroupSpec, spec: TensorSpec, budget=DEFAULT_COUNT_BUDGET) -> CountReport:
    """Exhaustive |{g in G(F_ell) : f(chi(g)) = 0 mod ell}|."""
    if not isinstance(spec, TensorSpec):
        spec = TensorSpec(spec)
    hist = chi_histogram(G, budget)
    zeros = 0
    for alpha, mult in hist.items():
        if serre_f_eval_mod(CharPoint(alpha, G.ell), spec) == 0:
            zeros += mult
    order = sum(hist.values())
    return CountReport(
        ell=G.ell,
        group=G.name,
        dimension=G.dimension,
        order=order,
        slice_count=zeros,
    )


@dataclass
class ScalingTable:
    group: str
    spec: str
    connected: bool
    rows: list = field(default_factory=list)

    @property
    def fitted_C(self) -> Fraction:
        """max |Z| / ell^(d - 1): empirical constant in |Z| <= C ell^(d - 1)."""
        return max(r.slice_ratio for r in self.rows)

    @property
    def max_fraction_times_ell(self) -> Fraction:
        """max ell |Z| / |G|: bounded when the slice fraction decays like 1/ell."""
        return max(r.slice_fraction * r.ell for r in self.rows)

    @property
    def min_fraction(self) -> Fraction:
        return min(r.slice_fraction for r in self.rows)

    def to_dict(self):
        return {
            "group": self.group,
            "spec": self.spec,
            "connected": self.connected,
            "fitted_C": round(float(self.fitted_C), 6),
            "max_fraction_times_ell": round(float(self.max_fraction_times_ell), 6),
            "min_fraction": round(float(self.min_fraction), 6),
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_text(self):
        lines = [f"{self.group}  spec={self.spec}  connected={self.connected}",
                 f"{'ell':>5} {'|G|':>12} {'|Z|':>10} {'|Z|/|G|':>10} {'|Z|/l^(d-1)':>12}"]
        for r in self.rows:
            lines.append(f"{r.ell:>5} {r.order:>12} {r.slice_count:>10} "
                         f"{float(r.slice_fraction):>10.5f} {float(r.slice_ratio):>12.5f}")
        lines.append(f"fitted C = {float(self.fitted_C):.5f}; "
                     f"max ell*|Z|/|G| = {float(self.max_fraction_times_ell):.5f}; "
                     f"min |Z|/|G| = {float(self.min_fraction):.5f}")
        return "\n".join(lines)


def scaling_study(G: GroupSpec, spec: TensorSpec, ells: Iterable[int],
                  budget=DEFAULT_COUNT_BUDGET) -> ScalingTable:
    if not isinstance(spec, TensorSpec):
        spec = TensorSpec(spec)
    table = ScalingTable(G.name, str(spec), G.connected)
    for ell in ells:
        table.rows.append(count_slice(G.with_ell(ell), spec, budget))
    if not table.rows:
        raise ValueError("empty ell range")
    return table
