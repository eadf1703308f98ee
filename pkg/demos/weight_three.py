"""A weight-three cocycle whose pullback needs two rounds of weight reduction.

The map f below does not send the top generator x123 to the fundamental class
alone; the correction -a*b*C makes the reduction pass through a nonzero
certificate before the fundamental class appears.

Run with ``python3 demos/weight_three.py``.
"""

from pathlib import Path

from hopfinv.formats import parse_document
from hopfinv.hopf import complex_for, hopf_pair, pullback, reduce_to_weight_one
from hopfinv.model import validate_morphism

doc = parse_document((Path(__file__).resolve().parent.parent / "data" / "weight3.txt").read_text())
X, f = doc.model("X"), doc.morphism("f")
print("f is a morphism:", validate_morphism(f).valid)

bar = complex_for(X, "bar")
gamma = bar.parse("x1|x2|x3 - x12|x3 - x123")
print("gamma =", bar.format(gamma), " closed:", not bar.d(gamma))

target, chain = pullback(bar, gamma, f)
print("f*gamma =", target.format(chain))
for weight, part in sorted(target.split_weight(chain).items(), reverse=True):
    print(f"  weight {weight}: {target.format(part)}")

tau, beta = reduce_to_weight_one(target, chain)
print("tau  =", target.format(tau))
print("beta =", target.format(beta))
print("f*gamma - tau == d(beta):", chain - tau == target.d(beta))
print("Hopf invariant:", hopf_pair(bar, gamma, f))

eil = complex_for(X, "eil")
print("through the graph quotient:", hopf_pair(eil, eil.phi(gamma), f))
