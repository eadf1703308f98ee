"""The Hopf invariant of the Hopf map S^3 -> S^2, computed step by step.

Run with ``python3 demos/hopf_map.py``.
"""

from pathlib import Path

from hopfinv.formats import parse_document
from hopfinv.hopf import complex_for, hopf_pair, integrate, pullback, reduce_to_weight_one

doc = parse_document((Path(__file__).resolve().parent.parent / "data" / "hopf.txt").read_text())
X = doc.model("hopf")
h = doc.morphism("h")
bar = complex_for(X, "bar")

print("Model of S^2:", ", ".join(f"{n} (degree {d})" for n, d in zip(X.names, X.degrees)))

# x|x alone is not closed; the y term fixes that.
gamma = bar.parse("x|x + y")
print("cocycle:", bar.format(gamma))
print("d(x|x) =", bar.format(bar.d(bar.parse("x|x"))), "  d(gamma) =", bar.format(bar.d(gamma)))

target, chain = pullback(bar, gamma, h)
print("pulled back to", target.model.name + ":", target.format(chain))

tau, beta = reduce_to_weight_one(target, chain)
print("weight-one representative:", target.format(tau), "with certificate", target.format(beta))
print("coefficient of the fundamental class:", integrate(target, tau, 3))

eil = complex_for(X, "eil")
as_graph = eil.phi(gamma)
print()
print("Same cocycle as labeled trees:", eil.format(as_graph))
print("Hopf invariant through the graph quotient:", hopf_pair(eil, as_graph, h))

# Shuffle products carry no homotopy information.
shuffle = bar.shuffle((0,), (0,))
print()
print("x shuffled with itself:", bar.format(shuffle) if shuffle else "0 (x has odd bar degree)")
