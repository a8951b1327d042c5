"""The Iwasawa manifold's invariant double complex.

Prints the Dolbeault, conjugate-Dolbeault, Bott-Chern and Aeppli numbers,
shows which partial del-delbar conditions fail and where the comparison maps
between theories stop being injective or surjective.
"""

from nilcohom import catalog
from nilcohom.hodge import cohomology, diagram_map, lemma_variants

m = catalog("iwasawa3")
print(m)
t = cohomology(m)

print("\n(p,q)   dbar  del  BC  A")
for p in range(4):
    for q in range(4):
        print(f"({p},{q})   {t.get('dbar', p, q):4} {t.get('del', p, q):4} {t.get('BC', p, q):3} {t.get('A', p, q):2}")
print("Betti numbers:", [t.b[k] for k in range(7)])

r = lemma_variants(m)
print("\nddbar-lemma holds:", r.ddbar_lemma)
print("Angella-Tomassini defects:", [r.at_defects[k] for k in range(7)])

print("\nComparison maps out of Bott-Chern cohomology:")
for name, p, q in [("BC->del", 1, 1), ("BC->dbar", 1, 0), ("BC->del", 2, 1), ("BC->dbar", 2, 3)]:
    mp = diagram_map(m, name, p, q)
    print(f"  {name} on ({p},{q}): injective={mp.injective} surjective={mp.surjective}")
