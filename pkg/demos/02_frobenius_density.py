"""Density of Frobenius elements on which the detector vanishes.

y^2 = x^3 - x has complex multiplication: its Galois image sits in a Cartan
normalizer, and supersingular primes (p = 3 mod 4) land in the trace-zero
coset half the time.  y^2 = x^3 + x + 1 has no CM and the density tends to 0.
"""

import sys

from pizero import CurveSpec, density_test, frobenius_stream, parse_spec

cutoff = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
spec = parse_spec("cartan2")

for curve, expected in [(CurveSpec(-1, 0, "CM"), (1, 2)), (CurveSpec(1, 1, "non-CM"), (0, 1))]:
    recs = frobenius_stream(curve, cutoff)
    rep = density_test(recs, spec, expected=expected)
    print(f"{curve.label:>7}: {rep.zeros}/{rep.tested} = {float(rep.estimate):.4f}"
          f"  (expected {expected[0]}/{expected[1]}), bad primes {curve.bad_primes()}")
