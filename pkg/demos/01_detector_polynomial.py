"""Evaluate the component detector on a few 2x2 matrices.

For GL_2 the cartan2 detector works out to 4 * det * trace^2, so it
vanishes exactly on trace-zero matrices: the non-identity coset of a
Cartan normalizer.
"""

from pizero import chi, p_ab, parse_spec, serre_f_eval
from pizero.algebra import charpoly

spec = parse_spec("cartan2")

samples = {
    "identity": [[1, 0], [0, 1]],
    "diag(2, 3)": [[2, 0], [0, 3]],
    "swap": [[0, 1], [1, 0]],
    "rotation": [[0, -1], [1, 0]],
    "shear": [[1, 1], [0, 1]],
}

print("P_{1,1} for diag(2, 3):", p_ab(charpoly([[2, 0], [0, 3]]), 1, 1))
print()
print(f"{'matrix':<12} {'chi':>10} {'f(chi)':>8}")
for name, m in samples.items():
    point = chi(m)
    print(f"{name:<12} {str(point.alpha):>10} {serre_f_eval(point, spec):>8}")
