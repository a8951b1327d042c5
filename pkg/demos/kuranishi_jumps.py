"""Small deformations of the Iwasawa manifold and the Hodge numbers that jump.

The Kuranishi family has six parameters and stops at order two.  We sample
a handful of exact parameter values and compare Dolbeault numbers with the
central fibre.
"""

from nilcohom import catalog
from nilcohom.deform import default_samples, invariance_scan, kuranishi_series

fam = kuranishi_series(catalog("iwasawa3"), 4)
print(fam.summary())

samples = default_samples(fam.m, 5, seed=0)
rep = invariance_scan(fam, samples, ("dolbeault", "bottchern"))
print("upper semicontinuity:", "ok" if rep.semicontinuity_ok else "VIOLATED")
print("jumping Dolbeault bidegrees and the hypotheses that fail there:")
for p, q in rep.jumping("dbar"):
    print(f"  ({p},{q}):", ", ".join(rep.failed_hypotheses(p, q)))
