"""Kähler and balanced forms on a complex 3-torus stay so under deformation.

The del-delbar lemma holds on a torus, so the p-Kähler pipeline applies.
Positivity is decided exactly at each sample.
"""

from nilcohom.algebra import Form
from nilcohom.deform import default_samples, kuranishi_series
from nilcohom.extend import p_kahler_extend
from nilcohom.gauss import GaussRational
from nilcohom.model import torus_model

m = torus_model(3)
fam = kuranishi_series(m, 3)
omega = Form.zero(m)
for j in range(3):
    omega = omega + Form.monomial(m, (j, 3 + j), GaussRational(0, 1))

for p, label in [(1, "Kähler"), (2, "balanced")]:
    w = omega if p == 1 else omega ^ omega
    res = p_kahler_extend(m, w, fam, p, 3, default_samples(fam.m, 3, seed=1))
    print(f"{label} (p={p}): ok={res.ok}")
    for i, pos in sorted(res.positivity.items()):
        print(f"  sample {i}: {pos}")
