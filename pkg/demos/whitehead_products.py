"""Evaluating cocycles on Whitehead products: wedges of spheres and three points in R^3.

Run with ``python3 demos/whitehead_products.py``.
"""

from pathlib import Path

from hopfinv.formats import parse_document
from hopfinv.hopf import Bracket, complex_for, generator_leaf, wedge_leaves, whitehead_pair
from hopfinv.model import wedge_model

print("Pairing x|y with the bracket of the two wedge inclusions")
print(f"{'wedge':>10}  [i1,i2]  [i2,i1]")
for degrees in [(2, 2), (2, 3), (3, 3), (3, 4)]:
    w = wedge_model(degrees)
    bar = complex_for(w, "bar")
    i1, i2 = wedge_leaves(w)
    gamma = bar.parse("x|y")
    a = whitehead_pair(bar, gamma, Bracket(i1, i2))
    b = whitehead_pair(bar, gamma, Bracket(i2, i1))
    print(f"{str(degrees):>10}  {str(a):>7}  {str(b):>7}")

print()
doc = parse_document((Path(__file__).resolve().parent.parent / "data" / "conf3.txt").read_text())
conf = doc.model("conf3")
print("Cohomology of three points in R^3; the Arnold relation reads")
print("   a12*a23 + a23*a31 + a31*a12 =", conf.format(conf.parse("a12*a23 + a23*a31 + a31*a12")))
b = Bracket(generator_leaf(conf, "a12"), generator_leaf(conf, "a23"))
for kind in ("bar", "eil"):
    cx = complex_for(conf, kind)
    gamma = complex_for(conf, "bar").parse("(a31+a12)|(a12+a23)")
    if kind == "eil":
        gamma = cx.phi(gamma)
    print(f"   {kind:>3}: <(a31+a12)|(a12+a23), {b}> =", whitehead_pair(cx, gamma, b))
