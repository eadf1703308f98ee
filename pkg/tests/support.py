"""Models and random chain generators shared by the test modules."""

from __future__ import annotations

import random
from pathlib import Path

from hopfinv.lincomb import LinComb
from hopfinv.model import free_model, table_model, wedge_model

DATA = Path(__file__).resolve().parent.parent / "data"


def hopf_model():
    return free_model("hopf", [("x", 2), ("y", 3)], {"y": "x^2"}, 10)


def product_model():
    # one decomposable differential, used for chain-map and homotopy checks
    return free_model("F", [("a", 2), ("b", 3), ("c", 4)], {"c": "a*b"}, 10)


def arnold_table():
    return table_model(
        "C3",
        [("a", 2), ("b", 2), ("c", 2), ("ab", 4), ("ac", 4)],
        {("a", "b"): "ab", ("a", "c"): "ac", ("b", "c"): "ac - ab"},
    )


def conf3_model():
    return table_model(
        "conf3",
        [("a12", 2), ("a13", 2), ("a23", 2), ("p", 4), ("q", 4)],
        {("a12", "a13"): "p", ("a12", "a23"): "q", ("a13", "a23"): "q - p"},
        aliases={"a31": "-a13"},
    )


def corpus():
    return [hopf_model(), product_model(), arnold_table(), wedge_model((2, 3, 3))]


def random_word(rng: random.Random, model, max_weight: int = 4) -> tuple:
    return tuple(rng.randrange(model.dim) for _ in range(rng.randint(1, max_weight)))


def random_tree(rng: random.Random, cx, n: int) -> LinComb:
    """A random labeled tree with random edge directions and vertex order."""
    labels = [rng.randrange(cx.model.dim) for _ in range(n)]
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    perm = list(range(n))
    rng.shuffle(perm)
    return cx.tree([labels[p] for p in perm], [(perm.index(a), perm.index(b)) for a, b in edges])


def swap(cx, tensor) -> LinComb:
    out = LinComb()
    for (t1, t2), v in tensor.items():
        sign = -1 if (cx.total_degree(t1) * cx.total_degree(t2)) % 2 else 1
        out.add_term((t2, t1), sign * v)
    return out
