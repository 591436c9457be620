"""Lie data generated by the elements of order ell in a few finite groups.

SL_2(F_ell) is generated by its ell-elements and their logarithms span sl_2;
a split torus has none; the upper unitriangular group of GL_3 spans the
strictly upper-triangular matrices.
"""

from pizero import FiniteSubgroup, nori_lie_dimension
from pizero.envelope import diagonal_torus_generators, sl_generators, upper_unipotent_generators

cases = [
    ("SL2(F_7)", FiniteSubgroup(7, sl_generators(2, 7))),
    ("SL2(F_13)", FiniteSubgroup(13, sl_generators(2, 13))),
    ("torus in GL2(F_11)", FiniteSubgroup(11, diagonal_torus_generators(2, 11))),
    ("unitriangular GL3(F_7)", FiniteSubgroup(7, upper_unipotent_generators(3, 7))),
]
for name, group in cases:
    rep = nori_lie_dimension(group)
    print(f"{name:<24} ell-elements {rep.ell_elements:>5}  dim {rep.lie_dimension}  "
          f"|G+| = {rep.plus_subgroup_order}  |G| = {rep.group_order}")
