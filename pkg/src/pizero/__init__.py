"""Frobenius statistics, Serre-type detector polynomials and finite group counts.

Exact integer and finite-field arithmetic throughout; numpy is used only
for point counting and group closure.
"""

from .algebra import IntPoly, ModPoly, PrimeField, charpoly, cyclotomic, resultant
from .counting import GroupSpec, count_slice, group_order, scaling_study, verify_gpbound
from .detector import (
    CharPoint,
    TensorSpec,
    chi,
    density_test,
    p_ab,
    parse_spec,
    q_ab,
    serre_f_eval,
    serre_f_eval_mod,
)
from .envelope import FiniteSubgroup, classify_gl2_image, nori_lie_dimension
from .frobenius import CurveSpec, FrobeniusRecord, frobenius_stream, ingest_csv, persist_csv

__version__ = "0.1.0"

__all__ = [
    "CharPoint", "CurveSpec", "FiniteSubgroup", "FrobeniusRecord", "GroupSpec",
    "IntPoly", "ModPoly", "PrimeField", "TensorSpec", "charpoly", "chi",
    "classify_gl2_image", "count_slice", "cyclotomic", "density_test",
    "frobenius_stream", "group_order", "ingest_csv", "nori_lie_dimension",
    "p_ab", "parse_spec", "persist_csv", "q_ab", "resultant", "scaling_study",
    "serre_f_eval", "serre_f_eval_mod", "verify_gpbound",
]
