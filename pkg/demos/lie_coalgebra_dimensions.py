"""Multilinear pieces of the graph quotient have dimension (n-1)!, dual to Lyndon brackets.

Run with ``python3 demos/lie_coalgebra_dimensions.py``.
"""

import math
import time

from hopfinv.chainalg import SparseMatrix
from hopfinv.hopf import complex_for, config_pair, lyndon_brackets, wedge_leaves
from hopfinv.model import wedge_model

print(" n  trees  relations  quotient  (n-1)!  pairing rank  seconds")
for n in range(2, 6):
    start = time.perf_counter()
    w = wedge_model([2] * n)
    eil = complex_for(w, "eil")
    rel = eil.space.relations(tuple(range(n)))
    basis = [rel.trees[k] for k in rel.complement]
    brackets = lyndon_brackets(wedge_leaves(w), n, multilinear=True)
    rows = [{j: config_pair(w, t, b) for j, b in enumerate(brackets)} for t in basis]
    rank = SparseMatrix.from_rows(rows, len(brackets)).rank()
    elapsed = time.perf_counter() - start
    print(f"{n:2d}  {len(rel.trees):5d}  {rel.rank:9d}  {len(basis):8d}  {math.factorial(n - 1):6d}"
          f"  {rank:12d}  {elapsed:7.2f}")

w = wedge_model([2, 2, 2])
eil = complex_for(w, "eil")
print()
print("Quotient basis on x, y, z and its pairing with the Lyndon brackets:")
brackets = lyndon_brackets(wedge_leaves(w), 3, multilinear=True)
rel = eil.space.relations((0, 1, 2))
for k in rel.complement:
    t = rel.trees[k]
    print(f"  {eil.format_tree(t):45s}", [int(config_pair(w, t, b)) for b in brackets])
print("  brackets:", ", ".join(map(str, brackets)))
