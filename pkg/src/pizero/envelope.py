"""Finite subgroups of GL_n(F_l): unipotent elements, Nori Lie data, GL_2 images.

Matrices are tuples of row tuples with entries in ``range(ell)``.
"""

from __future__ import annotations

import math
import random
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import primefactors

from .algebra import (
    PrimeField,
    check_prime,
    det,
    identity,
    mat_inverse,
    mat_mul,
    mat_pow,
)
from .detector import CharPoint

DEFAULT_ENUM_BUDGET = 10**6
DEFAULT_SEED = 20240601
MAX_WORD_LENGTH = 40


class BudgetExceeded(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def as_matrix(rows, ell):
    return tuple(tuple(int(x) % ell for x in r) for r in rows)


def _flat(m):
    return tuple(x for r in m for x in r)


def _unflat(f, n):
    return tuple(f[i * n:(i + 1) * n] for i in range(n))


def _flat_mul(a, b, n, ell):
    out = []
    for i in range(n):
        ai = a[i * n:(i + 1) * n]
        for j in range(n):
            s = 0
            for k in range(n):
                s += ai[k] * b[k * n + j]
            out.append(s % ell)
    return tuple(out)


def closure(generators, ell, budget=DEFAULT_ENUM_BUDGET):
    """All elements of the group generated by ``generators`` (flat tuples).

    Breadth-first on right multiplication by generators; a finite set closed
    under multiplication by invertible generators is a group.
    """
    gens = [_flat(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = math.isqrt(len(gens[0]))
    if ell ** (n * n) < 2**62:
        return _closure_numpy(gens, n, ell, budget)
    ident = _flat(identity(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _flat_mul(x, g, n, ell)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > budget:
                        raise BudgetExceeded(
                            f"group has more than {budget} elements", partial=len(seen))
        frontier = nxt
    return seen


def _closure_numpy(gens, n, ell, budget):
    # matrices are keyed by their base-ell digit encoding
    weights = ell ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    g = np.array(gens, dtype=np.int64).reshape(-1, n, n)
    frontier = np.eye(n, dtype=np.int64)[None]
    seen = frontier.reshape(1, -1) @ weights
    blocks = [frontier.reshape(1, -1)]
    while len(frontier):
        prods = (frontier[:, None] @ g[None]) % ell
        flat = prods.reshape(-1, n * n)
        codes, idx = np.unique(flat @ weights, return_index=True)
        fresh = ~np.isin(codes, seen, assume_unique=True)
        seen = np.union1d(seen, codes[fresh])
        if len(seen) > budget:
            raise BudgetExceeded(f"group has more than {budget} elements", partial=len(seen))
        frontier = flat[idx[fresh]].reshape(-1, n, n)
        blocks.append(flat[idx[fresh]])
    return set(map(tuple, np.concatenate(blocks).tolist()))


class FiniteSubgroup:
    """The subgroup of GL_n(F_ell) generated by a list of matrices."""

    def __init__(self, ell, generators):
        check_prime(ell)
        gens = tuple(as_matrix(g, ell) for g in generators)
        if not gens:
            raise ValueError("need at least one generator")
        n = len(gens[0])
        for g in gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise ValueError("generators must be square of the same size")
            if det(g, ell) == 0:
                raise ValueError(f"generator {g} is not invertible mod {ell}")
        self.ell = ell
        self.n = n
        self.generators = gens
        self._elements = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"FiniteSubgroup(ell={self.ell}, n={self.n}, {len(self.generators)} generators)"

    def elements(self, budget=DEFAULT_ENUM_BUDGET):
        """Materialise the element set once; later calls share the frozenset."""
        with self._lock:
            if self._elements is None:
                flat = closure(self.generators, self.ell, budget)
                self._elements = frozenset(_unflat(f, self.n) for f in flat)
            return self._elements

    def order(self, budget=DEFAULT_ENUM_BUDGET):
        return len(self.elements(budget))

    def conjugate(self, h):
        h = as_matrix(h, self.ell)
        hinv = mat_inverse(h, self.ell)
        return FiniteSubgroup(
            self.ell, [mat_mul(mat_mul(h, g, self.ell), hinv, self.ell) for g in self.generators])

    def random_elements(self, count, seed=DEFAULT_SEED, max_length=MAX_WORD_LENGTH):
        """Deterministic pseudo-random words in the generators and their inverses."""
        rng = random.Random(seed)
        letters = list(self.generators) + [mat_inverse(g, self.ell) for g in self.generators]
        ident = identity(self.n)
        out = []
        for _ in range(count):
            x = ident
            for _ in range(rng.randint(1, max_length)):
                x = mat_mul(x, rng.choice(letters), self.ell)
            out.append(x)
        return out


# --------------------------------------------------------------------------
# standard generating sets


def sl_generators(n, ell):
    """Elementary transvections I + E_ij, which generate SL_n(F_ell)."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(tuple(tuple(int(r == c) + int(r == i and c == j) for c in range(n))
                                  for r in range(n)))
    return gens


def gl_generators(n, ell):
    g = PrimeField(ell).primitive_root()
    d = tuple(tuple((g if r == c == 0 else int(r == c)) for c in range(n)) for r in range(n))
    return sl_generators(n, ell) + [d]


def diagonal_torus_generators(n, ell):
    g = PrimeField(ell).primitive_root()
    return [tuple(tuple((g if r == c == k else int(r == c)) for c in range(n)) for r in range(n))
            for k in range(n)]


def upper_unipotent_generators(n, ell):
    return [m for m in sl_generators(n, ell) if any(m[i][j] for i in range(n) for j in range(i + 1, n))]


def split_cartan_normalizer_generators(ell):
    return diagonal_torus_generators(2, ell) + [((0, 1), (1, 0))]


def nonsplit_cartan_generators(ell):
    """A generator of the nonsplit torus F_{ell^2}^x embedded as [[a, e b], [b, a]]."""
    F = PrimeField(ell)
    eps = F.nonsquare()
    target = ell * ell - 1
    factors = primefactors(target)
    for a in range(ell):
        for b in range(1, ell):
            m = ((a, eps * b % ell), (b, a))
            if all(mat_pow(m, target // q, ell) != identity(2) for q in factors):
                return [m]
    raise AssertionError("unreachable")


def nonsplit_cartan_normalizer_generators(ell):
    return nonsplit_cartan_generators(ell) + [((1, 0), (0, ell - 1))]


# --------------------------------------------------------------------------
# unipotent elements and logarithms


def _check_ell_vs_n(ell, n):
    if ell <= n:
        raise ValueError(f"need ell > n (got ell={ell}, n={n})")


def _mat_sub(a, b, ell):
    return tuple(tuple((x - y) % ell for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_add(a, b, ell):
    return tuple(tuple((x + y) % ell for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(a, s, ell):
    return tuple(tuple(x * s % ell for x in r) for r in a)


def _is_zero_matrix(a):
    return not any(x for r in a for x in r)


def _ell_part(x, ell, n):
    """Project x to an element of ell-power order, then down to order ell."""
    m = 1
    for i in range(n):
        m *= ell**n - ell**i
    while m % ell == 0:
        m //= ell
    y = mat_pow(x, m, ell)
    ident = identity(n)
    if y == ident:
        return None
    while True:
        z = mat_pow(y, ell, ell)
        if z == ident:
            return y
        y = z


def find_ell_elements(group: FiniteSubgroup, budget=DEFAULT_ENUM_BUDGET, seed=DEFAULT_SEED):
    """Elements x != 1 with x^ell = 1.

    Exhaustive when the group enumerates within ``budget``; otherwise
    ``budget`` random words are drawn and each is projected onto its
    ell-part.  Returns (sorted elements, exhaustive flag).
    """
    ell, n = group.ell, group.n
    _check_ell_vs_n(ell, n)
    ident = identity(n)
    try:
        elems = group.elements(budget)
    except BudgetExceeded:
        found = set()
        for x in group.random_elements(budget, seed=seed):
            y = _ell_part(x, ell, n)
            if y is not None:
                found.add(y)
        return sorted(found), False
    found = [x for x in elems if x != ident and mat_pow(x, ell, ell) == ident]
    return sorted(found), True


def nilpotent_log(x, ell):
    """log x = sum_{k>=1} (-1)^(k+1) (x - 1)^k / k for unipotent x."""
    x = as_matrix(x, ell)
    n = len(x)
    _check_ell_vs_n(ell, n)
    nil = _mat_sub(x, identity(n), ell)
    if not _is_zero_matrix(mat_pow(nil, n, ell)):
        raise ValueError("matrix is not unipotent")
    out = tuple((0,) * n for _ in range(n))
    power = identity(n)
    for k in range(1, n):
        power = mat_mul(power, nil, ell)
        coef = (-1) ** (k + 1) * pow(k, -1, ell) % ell
        out = _mat_add(out, _mat_scale(power, coef, ell), ell)
    return out


def exp_t(nil, t, ell):
    """exp(t N) = sum_k t^k N^k / k! for nilpotent N."""
    nil = as_matrix(nil, ell)
    n = len(nil)
    _check_ell_vs_n(ell, n)
    if not _is_zero_matrix(mat_pow(nil, n, ell)):
        raise ValueError("matrix is not nilpotent")
    out = identity(n)
    power = identity(n)
    fact = 1
    for k in range(1, n):
        power = mat_mul(power, nil, ell)
        fact *= k
        coef = pow(t, k, ell) * pow(fact, -1, ell) % ell
        out = _mat_add(out, _mat_scale(power, coef, ell), ell)
    return out


class _Span:
    """Row-echelon basis of a subspace of F_ell^N."""

    def __init__(self, ell):
        self.ell = ell
        self.rows = {}  # pivot index -> vector with 1 at the pivot

    def reduce(self, v):
        v = list(v)
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                v = [(a - c * b) % self.ell for a, b in zip(v, row)]
        return v

    def add(self, v):
        v = self.reduce(v)
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        inv = pow(v[piv], -1, self.ell)
        v = [a * inv % self.ell for a in v]
        for p, row in list(self.rows.items()):
            c = row[piv]
            if c:
                self.rows[p] = [(a - c * b) % self.ell for a, b in zip(row, v)]
        self.rows[piv] = v
        return True

    def __len__(self):
        return len(self.rows)


@dataclass
class NoriReport:
    ell: int
    n: int
    ell_elements: int
    lie_dimension: int
    plus_subgroup_order: Optional[int]
    group_order: Optional[int]
    exhaustive: bool
    envelope_guess: Optional[str] = None

    def to_dict(self):
        return dict(self.__dict__)


def conjugation_closed_span(logs, generators, ell):
    """Smallest subspace containing ``logs`` and stable under g . g^-1 for all generators."""
    span = _Span(ell)
    queue = [m for m in logs if span.add(_flat(m))]
    conj = [(g, mat_inverse(g, ell)) for g in generators]
    while queue:
        m = queue.pop()
        for g, ginv in conj:
            c = mat_mul(mat_mul(g, m, ell), ginv, ell)
            if span.add(_flat(c)):
                queue.append(c)
    return span


def _guess_envelope(n, dim):
    if dim == 0:
        return "no unipotent part (derived envelope trivial)"
    if n == 2:
        return {1: "unipotent line (Borel type)", 3: "SL2"}.get(dim)
    if dim == n * n - 1:
        return f"SL{n}"
    return None


def nori_lie_dimension(group: FiniteSubgroup, budget=DEFAULT_ENUM_BUDGET, seed=DEFAULT_SEED):
    """Dimension of the conjugation-closed span of logs of ell-elements.

    Also reports the order of the subgroup generated by ell-elements when the
    group could be enumerated (otherwise None, never estimated).
    """
    ell, n = group.ell, group.n
    elems, exhaustive = find_ell_elements(group, budget, seed)
    logs = [nilpotent_log(x, ell) for x in elems]
    span = conjugation_closed_span(logs, group.generators, ell)
    plus_order = group_order = None
    if exhaustive:
        group_order = group.order(budget)
        if elems:
            gens, members = [], {_flat(identity(n))}
            for x in elems:
                if _flat(x) not in members:
                    gens.append(x)
                    members = closure(gens, ell, budget)
            plus_order = len(members)
        else:
            plus_order = 1
    return NoriReport(
        ell=ell,
        n=n,
        ell_elements=len(elems),
        lie_dimension=len(span),
        plus_subgroup_order=plus_order,
        group_order=group_order,
        exhaustive=exhaustive,
        envelope_guess=_guess_envelope(n, len(span)),
    )


# --------------------------------------------------------------------------
# GL_2 image classification from Frobenius data


CLASSES = {
    "GL2": 1,
    "split_cartan_normalizer": 2,
    "nonsplit_cartan_normalizer": 2,
    "borel": None,
    "exceptional": None,
    "undecided": None,
}


@dataclass
class EnvelopeClass:
    kind: str
    ell: int
    records: int
    trace_zero_fraction: Fraction
    disc_square: int = 0
    disc_nonsquare: int = 0
    disc_zero: int = 0
    reason: str = ""

    @property
    def pi0(self):
        return CLASSES[self.kind]

    def to_dict(self):
        z = self.trace_zero_fraction
        return {
            "kind": self.kind,
            "pi0": self.pi0,
            "ell": self.ell,
            "records": self.records,
            "trace_zero_fraction": round(float(z), 6),
            "disc_square": self.disc_square,
            "disc_nonsquare": self.disc_nonsquare,
            "disc_zero": self.disc_zero,
            "reason": self.reason,
        }


def trace_zero_fraction_gl2(ell):
    """Fraction of trace-zero elements in GL_2(F_ell): ell / (ell^2 - 1)."""
    return Fraction(ell, ell * ell - 1)


def classify_gl2_image(points: Iterable[CharPoint], ell: int) -> EnvelopeClass:
    """Classify the mod-ell image of a 2-dimensional system from chi-data.

    Trace-zero records estimate the mass of the non-identity Cartan coset;
    discriminants of the remaining records tell a Cartan subgroup (all of
    one square class) from GL_2 (both classes).  Sampling tolerance is
    5 / sqrt(#records).
    """
    check_prime(ell)
    F = PrimeField(ell)
    pts = []
    for pt in points:
        if pt.n != 2:
            raise ValueError("classify_gl2_image needs 2-dimensional points")
        pts.append(pt.reduce(ell) if pt.ell is None else pt)
    if not pts:
        raise ValueError("empty record stream")
    total = len(pts)
    zero_tr = 0
    sq = nsq = dz = 0
    for pt in pts:
        tr, dt = pt.trace, pt.det
        if tr == 0:
            zero_tr += 1
            continue
        leg = F.legendre(tr * tr - 4 * dt)
        if leg == 1:
            sq += 1
        elif leg == -1:
            nsq += 1
        else:
            dz += 1
    z = Fraction(zero_tr, total)
    out = EnvelopeClass("undecided", ell, total, z, sq, nsq, dz)
    if ell < 5:
        out.reason = "ell < 5: small-image pathologies"
        return out
    tol = 5 / math.sqrt(total)
    rest = sq + nsq + dz
    minority = min(sq, nsq) / rest if rest else 0.0
    if z >= 0.5 - tol and minority <= tol:
        out.kind = "split_cartan_normalizer" if sq >= nsq else "nonsplit_cartan_normalizer"
        out.reason = "half the records have trace 0; the rest share one discriminant class"
    elif z <= trace_zero_fraction_gl2(ell) + tol and rest and min(sq, nsq) / rest >= 0.25:
        out.kind = "GL2"
        out.reason = "trace 0 rare; both discriminant classes occur"
    elif minority <= tol and nsq <= sq:
        out.kind = "borel"
        out.reason = "all eigenvalues rational, trace 0 rare"
    else:
        out.kind = "exceptional"
        out.reason = "statistics match neither GL_2 nor a Cartan normalizer"
    return out


def chi_coverage(points: Iterable[CharPoint], group_elements, ell):
    """Fraction of the chi-values of a finite group that are hit by the points."""
    target = {(((-(m[0][0] + m[1][1])) % ell), (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % ell)
              for m in group_elements}
    hit = {tuple(p.reduce(ell).alpha if p.ell is None else p.alpha) for p in points}
    return Fraction(len(hit & target), len(target))


# --------------------------------------------------------------------------
# weights and formal characters


@dataclass(frozen=True)
class WeightMultiset:
    """Weights of a split torus acting on an n-dimensional space."""

    rank: int
    weights: tuple

    @property
    def n(self):
        return len(self.weights)

    def counter(self):
        return Counter(self.weights)


def weight_multiset(exponents: Sequence[Sequence[int]], n: int) -> WeightMultiset:
    """Torus t -> diag(t^w_1, ..., t^w_n), each w_i an exponent vector in Z^r."""
    ws = tuple(tuple(int(x) for x in w) for w in exponents)
    if len(ws) != n:
        raise ValueError(f"expected {n} weights, got {len(ws)}")
    ranks = {len(w) for w in ws}
    if len(ranks) != 1:
        raise ValueError("weights have inconsistent rank")
    return WeightMultiset(ranks.pop(), tuple(sorted(ws)))


def difference_multiset(sigma: WeightMultiset) -> Counter:
    """{lambda - lambda' : (lambda, lambda') in Sigma^2} with multiplicity (n^2 entries)."""
    out = Counter()
    for a in sigma.weights:
        for b in sigma.weights:
            out[tuple(x - y for x, y in zip(a, b))] += 1
    return out


def contains_roots(diff: Counter, roots) -> bool:
    roots = [tuple(r) for r in roots]
    dims = {len(r) for r in roots} | {len(k) for k in diff}
    if len(dims) > 1:
        raise ValueError("dimension mismatch between roots and weights")
    return all(diff[r] > 0 for r in roots)


def same_formal_character(a: WeightMultiset, b: WeightMultiset, permute_coordinates=False) -> bool:
    """Equality of weight multisets, optionally up to permuting torus coordinates."""
    if a.rank != b.rank or a.n != b.n:
        return False
    if a.counter() == b.counter():
        return True
    if not permute_coordinates:
        return False
    target = b.counter()
    for perm in permutations(range(a.rank)):
        if Counter(tuple(w[i] for i in perm) for w in a.weights) == target:
            return True
    return False


def same_formal_bicharacter(a, b, permute_coordinates=False) -> bool:
    """Compare pairs (torus weights, derived-torus weights)."""
    return (same_formal_character(a[0], b[0], permute_coordinates)
            and same_formal_character(a[1], b[1], permute_coordinates))


def det_coordinates(blocks: Sequence[int], m, ell=None):
    """Determinants of the diagonal blocks of a block-diagonal matrix."""
    n = len(m)
    if sum(blocks) != n or any(b < 1 for b in blocks):
        raise ValueError(f"block sizes {blocks} do not partition {n}")
    starts = []
    s = 0
    for b in blocks:
        starts.append((s, s + b))
        s += b
    owner = [k for k, (lo, hi) in enumerate(starts) for _ in range(lo, hi)]
    for i in range(n):
        for j in range(n):
            x = m[i][j] % ell if ell else m[i][j]
            if owner[i] != owner[j] and x != 0:
                raise ValueError(f"entry ({i}, {j}) lies outside the diagonal blocks")
    return tuple(det(tuple(tuple(r[lo:hi]) for r in m[lo:hi]), ell) for lo, hi in starts)
