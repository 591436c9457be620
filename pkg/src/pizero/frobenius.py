"""Frobenius data of elliptic curves over Q and a_p tables on disk.

Convention: the Frobenius at a good prime p acts with characteristic
polynomial T^2 - a_p T + p, where a_p = p + 1 - #E(F_p).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime, primefactors, primerange

from .algebra import IntPoly, check_prime
from .detector import CharPoint


class ApTableError(ValueError):
    """A malformed or inconsistent row in an a_p table."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class CurveSpec:
    """Short Weierstrass curve y^2 = x^3 + A x + B over Q."""

    A: int
    B: int
    label: str = ""

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError(f"y^2 = x^3 + {self.A}x + {self.B} is singular")

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.A**3 + 27 * self.B**2)

    def bad_primes(self, cutoff=None) -> list:
        """Primes where records are withheld: 2 and the primes dividing the discriminant."""
        out = {2} | set(primefactors(self.discriminant))
        out = sorted(out)
        if cutoff is not None:
            out = [q for q in out if q < cutoff]
        return out

    def is_good(self, p: int) -> bool:
        return p > 2 and (2 * self.discriminant) % p != 0


@dataclass(frozen=True)
class FrobeniusRecord:
    p: int
    ap: int

    @property
    def charpoly(self) -> IntPoly:
        return IntPoly((self.p, -self.ap, 1))

    @property
    def alpha(self) -> CharPoint:
        return CharPoint((-self.ap, self.p))

    def satisfies_hasse(self) -> bool:
        return self.ap * self.ap <= 4 * self.p


def count_points(curve: CurveSpec, p: int) -> int:
    """#E(F_p) including the point at infinity, by an O(p) scan over x."""
    check_prime(p)
    if not curve.is_good(p):
        raise ValueError(f"{p} is a bad prime for {curve}")
    x = np.arange(p, dtype=np.int64)
    # number of square roots of each residue: 1 + legendre symbol
    x2 = x * x % p
    roots = np.bincount(x2, minlength=p)
    rhs = ((x2 + curve.A % p) * x + curve.B % p) % p
    return int(roots[rhs].sum()) + 1


def trace_of_frobenius(curve: CurveSpec, p: int) -> int:
    return p + 1 - count_points(curve, p)


@lru_cache(maxsize=32)
def _stream(A, B, cutoff):
    curve = CurveSpec(A, B)
    return tuple(
        FrobeniusRecord(p, trace_of_frobenius(curve, p))
        for p in primerange(3, cutoff)
        if curve.is_good(p)
    )


def frobenius_stream(curve: CurveSpec, cutoff: int) -> list:
    """Records for every good prime p < cutoff, ascending."""
    if cutoff < 3:
        raise ValueError("cutoff must be at least 3")
    return list(_stream(curve.A, curve.B, cutoff))


def reduce_record(rec: FrobeniusRecord, ell: int) -> CharPoint:
    """(-a_p mod ell, p mod ell): Frobenius data of the mod-ell reduction."""
    check_prime(ell)
    if rec.p == ell:
        raise ValueError(f"p = ell = {ell}: Frobenius is not defined mod ell here")
    return CharPoint((-rec.ap, rec.p), ell)


def reduce_stream(records: Iterable[FrobeniusRecord], ell: int) -> list:
    return [reduce_record(r, ell) for r in records if r.p != ell]


# --------------------------------------------------------------------------
# CSV tables


def ingest_csv(path) -> list:
    """Read a ``p,ap`` table.

    Raises ApTableError on a malformed row, a non-prime or non-ascending p,
    or Hasse violations (all violating lines are listed).
    """
    records = []
    violations = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["p", "ap"]:
            raise ApTableError(f"expected header 'p,ap', got {header!r}", line=1)
        prev = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ApTableError(f"expected 2 fields, got {len(row)}", line=lineno)
            try:
                p, ap = int(row[0]), int(row[1])
            except ValueError:
                raise ApTableError(f"non-integer field in {row!r}", line=lineno) from None
            if not isprime(p):
                raise ApTableError(f"{p} is not prime", line=lineno)
            if p <= prev:
                raise ApTableError(f"p = {p} is not ascending", line=lineno)
            prev = p
            rec = FrobeniusRecord(p, ap)
            if not rec.satisfies_hasse():
                violations.append(lineno)
                continue
            records.append(rec)
    if violations:
        shown = ", ".join(str(v) for v in violations[:10])
        raise ApTableError(
            f"Hasse bound |ap| <= 2 sqrt(p) violated on {len(violations)} row(s): lines {shown}",
            line=violations[0],
        )
    return records


def persist_csv(records: Iterable[FrobeniusRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "ap"])
        for r in records:
            w.writerow([r.p, r.ap])


def hasse_margin(records: Sequence[FrobeniusRecord]) -> float:
    """max |a_p| / (2 sqrt p) over the records."""
    return max(abs(r.ap) / (2 * math.sqrt(r.p)) for r in records)
