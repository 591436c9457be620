"""Classify the mod-ell image of each curve from Frobenius statistics.

The component count of the mod-ell image is compared with the one implied by
the characteristic-zero density: both sides should agree prime by prime.
"""

from sympy import primerange

from pizero import CurveSpec, classify_gl2_image, frobenius_stream
from pizero.frobenius import reduce_stream

cutoff = 20000
for curve in (CurveSpec(-1, 0, "CM"), CurveSpec(1, 1, "non-CM")):
    recs = frobenius_stream(curve, cutoff)
    print(curve.label)
    for ell in primerange(5, 40):
        v = classify_gl2_image(reduce_stream(recs, ell), ell)
        print(f"  ell={ell:>3} {v.kind:<28} pi0={v.pi0}  trace-0 fraction {float(v.trace_zero_fraction):.3f}")
