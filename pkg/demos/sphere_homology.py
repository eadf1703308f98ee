"""Homology of the graph quotient for spheres and CP^2, next to the bar complex.

For odd spheres the graph quotient has a single class.  Even spheres have a
second class one degree up, from the Whitehead square of the identity, and
CP^2 has classes in degrees 1 and 4.

Run with ``python3 demos/sphere_homology.py``.
"""

from pathlib import Path

from hopfinv.chainalg import homology_basis, homology_rank
from hopfinv.formats import parse_document
from hopfinv.hopf import complex_for
from hopfinv.model import sphere_model

rows = [(f"S^{n}", sphere_model(n, truncation=4 * n + 2), 2 * n) for n in (2, 3, 4, 5)]
cp2 = parse_document((Path(__file__).resolve().parent.parent / "data" / "cp2.txt").read_text()).model("cp2")
rows.append(("CP^2", cp2, 8))

for label, model, top in rows:
    bar, eil = complex_for(model, "bar"), complex_for(model, "eil")
    eranks = [homology_rank(eil, t) for t in range(1, top + 1)]
    branks = [homology_rank(bar, t) for t in range(1, top + 1)]
    print(f"{label:5s} graph quotient {eranks}")
    print(f"{'':5s} bar complex    {branks}")

s2 = sphere_model(2, truncation=8)
eil = complex_for(s2, "eil")
print()
print("Cocycles of S^2 in the graph quotient:")
for t in (1, 2):
    for z in homology_basis(eil, t).cycles:
        print(f"  degree {t}: {eil.format(eil.lift(z, t))}")
