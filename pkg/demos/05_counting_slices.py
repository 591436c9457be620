"""Group orders against (ell -/+ 1)^dim, and how big the detector slice is.

On SL_2 the slice is a hypersurface and takes a 1/ell share of the group.
On a Cartan normalizer it swallows the whole second component and never
drops below one half.
"""

from sympy import primerange

from pizero import GroupSpec, parse_spec, scaling_study, verify_gpbound

for name in ("GL3", "Sp4", "GSp4"):
    rows = verify_gpbound(GroupSpec.parse(name, 3), primerange(3, 60))
    print(f"{name}: bounds hold at all {len(rows)} primes: {all(r.lower_ok and r.upper_ok for r in rows)}")

spec = parse_spec("cartan2")
ells = list(primerange(5, 24))
for family in ("SL2", "normalizer-split", "normalizer-nonsplit"):
    print()
    print(scaling_study(GroupSpec.parse(family, 5), spec, ells).to_text())
