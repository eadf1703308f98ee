"""Hopf invariants: pullback, weight reduction, integration and pairings.

Chains over a model live either in the bar complex (keys are words) or in the
quotient graph complex (keys are trees).  Every function here takes the
complex object explicitly, so the same code serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Mapping, Sequence, Union

from .barcx import BarComplex
from .chainalg import NOT_EXACT, Echelon, NotClosed, closed_kunneth_adjust, solve_preimage
from .graphcx import EilComplex, GraphComplex, Tree
from .lincomb import LinComb, koszul_sign
from .model import Model, Morphism, UnsupportedModel, sphere_cohomology_model, sphere_model, validate_morphism


def complex_for(model: Model, kind: str = "bar"):
    """The (cached) complex of a given kind over a model."""
    cache = model.__dict__.setdefault("_complexes", {})
    if kind not in cache:
        if kind == "bar":
            cache[kind] = BarComplex(model)
        elif kind == "eil":
            cache[kind] = EilComplex(model)
        elif kind == "graph":
            cache[kind] = GraphComplex(model)
        else:
            raise ValueError(f"unknown complex {kind!r}; use bar, graph or eil")
    return cache[kind]


def kind_of(cx) -> str:
    return cx.tag


def is_closed(cx, chain: Mapping) -> bool:
    return cx.is_zero(cx.d(chain))


# -- sphere targets -----------------------------------------------------------------


@dataclass(frozen=True)
class SphereTarget:
    n: int
    model: Model

    @classmethod
    def of(cls, n: int, truncation: int | None = None) -> "SphereTarget":
        return cls(n, sphere_model(n, truncation))

    @property
    def fundamental(self) -> int:
        return self.model.index(self.model.fundamental)


def fundamental_functional(model: Model, n: int | None = None) -> dict[int, Fraction]:
    """Linear form on degree-``n`` elements reading the coefficient of the fundamental class.

    Degree ``n`` is split as boundaries, the fundamental cocycle and a
    complement; the form is the coordinate along the fundamental cocycle.
    """
    if model.fundamental is None:
        raise UnsupportedModel(f"model {model.name!r} has no designated fundamental class")
    w = model.index(model.fundamental)
    n = model.degrees[w] if n is None else n
    cache = model.__dict__.setdefault("_fundamental", {})
    if n in cache:
        return cache[n]
    if model.degrees[w] != n:
        cache[n] = {}
        return {}
    basis = model.by_degree(n)
    pos = {b: k for k, b in enumerate(basis)}
    ech = Echelon()
    columns = []
    for a in model.by_degree(n - 1):
        v = {pos[b]: c for b, c in model.d_basis(a).items()}
        if ech.add(v):
            columns.append(v)
    nb = len(columns)
    if not ech.add({pos[w]: 1}):
        raise UnsupportedModel(f"fundamental element of {model.name!r} is a boundary")
    columns.append({pos[w]: Fraction(1)})
    for k in range(len(basis)):
        if ech.add({k: 1}):
            columns.append({k: Fraction(1)})
    m = len(basis)
    rows = [dict() for _ in range(m)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows[i][j] = v
    inv = Echelon()
    for i, row in enumerate(rows):
        row[m + i] = Fraction(1)
        inv.add(row)
    row = inv.rows[nb]
    out = {basis[k - m]: v for k, v in row.items() if k >= m}
    cache[n] = out
    return out


# -- pullback, reduction, integration ----------------------------------------------------


def pullback(cx, chain: Mapping, phi: Morphism):
    """Apply a morphism letterwise or labelwise; returns ``(target complex, chain)``."""
    if phi.source is not cx.model:
        raise ValueError(f"morphism {phi.name} starts at {phi.source.name}, not at {cx.model.name}")
    target = complex_for(phi.target, cx.tag)
    if cx.tag == "bar":
        return target, cx.pullback(chain, phi)
    out = LinComb()
    for t, c in chain.items():
        for labs, v in _expand_labels([phi.images[i] for i in t.labels]):
            target.space.add(out, labs, t.edges, c * v)
    return target, out


def _expand_labels(elems):
    out = [((), Fraction(1))]
    for e in elems:
        out = [(labs + (i,), c * v) for labs, c in out for i, v in e.items()]
    return out


def _internal_degree(cx, key) -> int:
    labels = key.labels if isinstance(key, Tree) else key
    return sum(cx.model.degrees[i] for i in labels)


def _normal(cx, chain):
    return cx.reduce(chain) if hasattr(cx, "reduce") else LinComb(chain)


class NotReducible(ValueError):
    """A closed chain whose top-weight part is not internally exact."""


def reduce_to_weight_one(cx, gamma: Mapping, rng=None) -> tuple[LinComb, LinComb]:
    """Cohomologous weight-one cocycle ``tau`` and ``beta`` with ``gamma - tau = d(beta)``.

    The top-weight part of a cocycle is closed for the internal differential;
    it is cancelled by the differential of an internal preimage, and the
    process repeats until only weight one remains.  With ``rng`` the preimages
    are perturbed by random internal cycles.
    """
    gamma = _normal(cx, gamma)
    if not is_closed(cx, gamma):
        raise NotClosed("chain is not closed")
    beta = LinComb()
    while True:
        parts = cx.split_weight(gamma)
        k = max(parts, default=0)
        if k <= 1:
            break
        by_g: dict[int, LinComb] = {}
        for key, c in parts[k].items():
            by_g.setdefault(_internal_degree(cx, key), LinComb()).add_term(key, c)
        for g, part in sorted(by_g.items()):
            mat = cx.internal_matrix(k, g - 1)
            x = solve_preimage(mat, cx.piece_coords(part, k, g))
            if x is NOT_EXACT:
                raise NotReducible(f"weight {k} part has no internal preimage in degree {g - 1}")
            if rng is not None:
                for z in mat.kernel():
                    r = rng.randint(-3, 3)
                    for i, v in z.items():
                        x[i] = x.get(i, 0) + r * v
            b = cx.piece_lift(x, k, g - 1)
            beta.add_scaled(b)
            gamma = gamma - cx.d(b)
        gamma = _normal(cx, gamma)
    return gamma, beta


def integrate(cx, tau: Mapping, n: int) -> Fraction:
    """Coefficient of the fundamental class in a weight-one chain; 0 in other degrees."""
    form = fundamental_functional(cx.model, n)
    total = Fraction(0)
    for key, c in tau.items():
        labels = key.labels if isinstance(key, Tree) else key
        if len(labels) != 1:
            raise ValueError("integration needs a weight-one chain")
        total += c * form.get(labels[0], 0)
    return total


def hopf_pair(cx, gamma: Mapping, phi: Morphism, n: int | None = None, rng=None) -> Fraction:
    """Pull back, reduce to weight one and integrate over the sphere.

    Chains of total degree other than ``n - 1`` pair to zero.
    """
    if n is None:
        n = sphere_dimension(phi.target)
    gamma = _normal(cx, gamma)
    degs = {cx.total_degree(k) for k in gamma}
    if not gamma or degs != {n - 1}:
        return Fraction(0)
    if not is_closed(cx, gamma):
        raise NotClosed("cocycle is not closed")
    target, pulled = pullback(cx, gamma, phi)
    tau, _ = reduce_to_weight_one(target, pulled, rng)
    return integrate(target, tau, n)


def sphere_dimension(model: Model) -> int:
    if model.fundamental is None:
        raise UnsupportedModel(f"model {model.name!r} has no fundamental class")
    return model.degrees[model.index(model.fundamental)]


# -- brackets ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    name: str
    dim: int
    morphism: Morphism | None = None

    def leaves(self):
        return [self]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Bracket:
    left: "BracketWord"
    right: "BracketWord"

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim - 1

    def leaves(self):
        return self.left.leaves() + self.right.leaves()

    def __str__(self):
        return f"[{self.left},{self.right}]"


BracketWord = Union[Leaf, Bracket]


def generator_leaf(model: Model, name: str) -> Leaf:
    """Leaf for a basis element: the map sending it to the sphere class and the rest to 0."""
    i = model.index(name)
    n = model.degrees[i]
    target = _hs(n)
    phi = Morphism(name, model, target, {i: {0: 1}})
    rep = validate_morphism(phi)
    if not rep.valid:
        raise UnsupportedModel(f"dual map of {name!r} is not a morphism: {rep.violations[0]}")
    return Leaf(name, n, phi)


_HS: dict[int, Model] = {}


def _hs(n: int) -> Model:
    if n not in _HS:
        _HS[n] = sphere_cohomology_model(n)
    return _HS[n]


def leaf(name: str, morphism: Morphism) -> Leaf:
    return Leaf(name, sphere_dimension(morphism.target), morphism)


def bracket(*items) -> BracketWord:
    """``bracket(a, b)`` for two items; nested lists are read as brackets too."""
    if len(items) == 1:
        x = items[0]
        return bracket(*x) if isinstance(x, (list, tuple)) else x
    if len(items) != 2:
        raise ValueError("a bracket has exactly two entries")
    return Bracket(bracket(items[0]), bracket(items[1]))


def whitehead_pair(cx, gamma: Mapping, b: BracketWord) -> Fraction:
    """Evaluate a cocycle on an iterated Whitehead product.

    Brackets are split with the coproduct (bar) or cobracket (graph quotient),
    the tensor is replaced by a closed-times-closed representative and the
    factors are evaluated recursively.
    """
    gamma = _normal(cx, gamma)
    if not gamma:
        return Fraction(0)
    if not is_closed(cx, gamma):
        raise NotClosed("cocycle is not closed")
    return _wp(cx, gamma, b)


def _wp(cx, gamma, b) -> Fraction:
    degs = {cx.total_degree(k) for k in gamma}
    if not gamma or degs != {b.dim - 1}:
        return Fraction(0)
    if isinstance(b, Leaf):
        if b.morphism is None:
            raise ValueError(f"leaf {b.name} has no morphism")
        return hopf_pair(cx, gamma, b.morphism, b.dim)
    p, q = b.left.dim - 1, b.right.dim - 1
    if cx.tag == "bar":
        tensor = cx.coproduct(gamma)
        wanted = {(p, q), (q, p)}
    else:
        tensor = cx.cobracket(gamma)
        wanted = {(p, q)}
    if not tensor:
        return Fraction(0)
    res = closed_kunneth_adjust(cx, tensor, certificate=False, bidegrees=wanted)
    memo: dict = {}

    def value(deg, idx, sub):
        key = (deg, idx, id(sub))
        if key not in memo:
            chain = cx.lift(res.bases[deg].cycles[idx], deg)
            memo[key] = _wp(cx, chain, sub)
        return memo[key]

    total = Fraction(0)
    for (i, j), c in res.classes.get((p, q), {}).items():
        a = value(p, i, b.left)
        if a:
            total += c * a * value(q, j, b.right)
    if cx.tag == "bar":
        sign = -1 if (p * q) % 2 else 1
        for (i, j), c in res.classes.get((q, p), {}).items():
            a = value(q, i, b.right)
            if a:
                total -= sign * c * a * value(p, j, b.left)
    return total


# -- configuration pairing and Lyndon brackets ----------------------------------------------


def _bracket_structure(b: BracketWord):
    """Leaves in order and, for each internal node, the leaf index sets of both branches."""
    leaves: list[Leaf] = []
    nodes: list[tuple[frozenset, frozenset]] = []

    def walk(x) -> frozenset:
        if isinstance(x, Leaf):
            leaves.append(x)
            return frozenset([len(leaves) - 1])
        left = walk(x.left)
        right = walk(x.right)
        nodes.append((left, right))
        return left | right

    walk(b)
    return leaves, nodes


def config_pair(model: Model, t: Tree, b: BracketWord) -> Fraction:
    """Combinatorial pairing between a labeled tree and a bracket expression.

    Sum over label-preserving bijections ``rho`` from vertices to leaves and
    bijections from edges to internal nodes: an edge contributes ``+1`` when
    its source sits under the left branch of its node and its target under the
    right branch, ``-1`` for the opposite, and ``0`` otherwise.  Each term also
    carries the Koszul sign of reordering the vertex labels into leaf order.
    """
    leaves, nodes = _bracket_structure(b)
    names = [model.names[a] for a in t.labels]
    if sorted(names) != sorted(lf.name for lf in leaves):
        raise ValueError("tree labels and bracket leaves do not match")
    eps = [model.degrees[a] - 1 for a in t.labels]
    n = len(t.labels)
    total = Fraction(0)
    for rho in permutations(range(n)):
        if any(names[v] != leaves[rho[v]].name for v in range(n)):
            continue
        order = sorted(range(n), key=lambda v: rho[v])
        ks = koszul_sign(order, eps)
        total += ks * _edge_assignments(t.edges, rho, nodes)
    return total


def _edge_assignments(edges, rho, nodes) -> int:
    m = len(edges)
    if m != len(nodes):
        return 0
    table = []
    for s, r in edges:
        row = []
        for left, right in nodes:
            if rho[s] in left and rho[r] in right:
                row.append(1)
            elif rho[s] in right and rho[r] in left:
                row.append(-1)
            else:
                row.append(0)
        table.append(row)
    # permanent-style sum over bijections edges -> nodes
    total = 0
    for sigma in permutations(range(m)):
        prod = 1
        for e in range(m):
            prod *= table[e][sigma[e]]
            if not prod:
                break
        total += prod
    return total


def lyndon_words(alphabet: Sequence, weight: int) -> list[tuple]:
    """Lyndon words of the given length in lexicographic order (Duval's algorithm)."""
    k = len(alphabet)
    if weight < 1 or k == 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == weight:
            out.append(tuple(alphabet[i] for i in w))
        m = len(w)
        while len(w) < weight:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def _standard_bracket(word: tuple, leaf_of):
    if len(word) == 1:
        return leaf_of(word[0])
    # longest proper Lyndon suffix gives the standard factorisation
    for i in range(1, len(word)):
        suffix = word[i:]
        if _is_lyndon(suffix):
            return Bracket(_standard_bracket(word[:i], leaf_of), _standard_bracket(suffix, leaf_of))
    raise AssertionError("not a Lyndon word")


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) if len(w) > 1 else True


def lyndon_brackets(generators: Sequence, weight: int, multilinear: bool = False) -> list[BracketWord]:
    """Bracketed Lyndon words over ordered generators (standard factorisation).

    ``generators`` may be :class:`Leaf` objects or names.  With
    ``multilinear`` only words using each generator exactly once are kept.
    """
    leaves = [g if isinstance(g, Leaf) else Leaf(str(g), 0) for g in generators]
    idx = list(range(len(leaves)))
    out = []
    for w in lyndon_words(idx, weight):
        if multilinear and sorted(w) != idx:
            continue
        out.append(_standard_bracket(w, lambda i: leaves[i]))
    return out


def wedge_leaves(model: Model, names: Sequence[str] | None = None) -> list[Leaf]:
    names = list(names) if names is not None else list(model.names)
    return [generator_leaf(model, nm) for nm in names]


__all__ = [
    "SphereTarget",
    "complex_for",
    "pullback",
    "reduce_to_weight_one",
    "integrate",
    "hopf_pair",
    "Leaf",
    "Bracket",
    "bracket",
    "leaf",
    "generator_leaf",
    "whitehead_pair",
    "config_pair",
    "lyndon_words",
    "lyndon_brackets",
    "wedge_leaves",
    "fundamental_functional",
]
