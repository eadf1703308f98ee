"""Labeled trees, the graph complex and its quotient by Arnold relations.

A :class:`Tree` has ordered vertices labeled by basis indices of a model and
directed edges between vertex positions.  Labels are desuspended, so a label
of degree ``k`` has sign degree ``k - 1``; edges have degree zero.  The
relations imposed on the span of trees are

* reordering the vertices multiplies by the Koszul sign of the labels,
* reversing an edge multiplies by ``-1`` (arrow reversal),
* for a path through ``b`` joining ``a`` and ``c``, the three trees obtained
  by keeping two edges of the cycle ``a -> b -> c -> a`` sum to zero (Arnold).

By default trees are stored with every edge pointing from the earlier to the
later vertex, so reordering and reversal are absorbed by
:func:`canonicalize`; only Arnold rows remain.  The ``oriented`` mode keeps
both orientations and adds arrow-reversal rows instead.

Differential: the internal part applies ``d`` to the label at position ``j``
with sign ``(-1)^(e_0 + ... + e_(j-1))``.  Contracting an edge ``u -> v``
first moves ``u, v`` to the front (Koszul sign), multiplies by
``(-1)^(e_u)`` and replaces the pair by the product label.  Under these
conventions a bar word ``a1|...|an`` maps to the path ``a1 -> ... -> an`` by a
chain map, and shuffles land in the relation space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .chainalg import Echelon, PieceTooLarge, SparseMatrix, default_cap
from .lincomb import LinComb, koszul_sign
from .model import Model, Morphism, UnsupportedModel, format_lincomb
from .parse import ElementParser, TokenStream


@dataclass(frozen=True, order=True)
class Tree:
    labels: tuple
    edges: tuple = ()

    @property
    def weight(self) -> int:
        return len(self.labels)

    def multiset(self) -> tuple:
        return tuple(sorted(self.labels))


def tree_sort_key(t: Tree):
    return (len(t.labels), t.multiset(), t.labels, t.edges)


class InvalidTree(ValueError):
    pass


def check_tree(n: int, edges: Sequence[tuple[int, int]]) -> None:
    """Raise :class:`InvalidTree` unless the edges form a tree on ``n`` vertices."""
    if n < 1:
        raise InvalidTree("a tree needs at least one vertex")
    if len(edges) != n - 1:
        raise InvalidTree(f"{n} vertices need {n - 1} edges for a tree, got {len(edges)}")
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InvalidTree(f"bad edge {u}->{v}")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise InvalidTree("graph contains a cycle")
        parent[ru] = rv


# -- canonical forms ------------------------------------------------------------------


def _centers(adj) -> list[int]:
    n = len(adj)
    deg = [len(a) for a in adj]
    leaves = [v for v in range(n) if deg[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for v in leaves:
            for u, _ in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
            deg[v] = 0
        leaves = nxt
    return sorted(leaves)


@lru_cache(maxsize=1 << 18)
def canonicalize(labels: tuple, edges: tuple, eps: tuple, oriented: bool = False) -> tuple[int, Tree]:
    """Canonical representative of a tree and the sign relating it to the input.

    ``eps[i]`` is the sign degree of vertex ``i``.  The returned sign is ``0``
    when the tree is forced to vanish by an odd automorphism; the tree is
    returned anyway so it can seed relations.
    """
    n = len(labels)
    if n == 1:
        return 1, Tree(tuple(labels), ())
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append((v, 0))
        adj[v].append((u, 1))
    memo: dict = {}

    def code(v, parent, flag):
        key = (v, parent)
        if key not in memo:
            kids = sorted(code(u, v, f if oriented else 0) for u, f in adj[v] if u != parent)
            memo[key] = (flag, labels[v], tuple(kids))
        return memo[key]

    def child_list(v, parent):
        out = []
        for u, f in adj[v]:
            if u != parent:
                out.append((code(u, v, f if oriented else 0), u))
        out.sort(key=lambda cu: cu[0])
        return out

    order: list[int] = []
    swaps: list[tuple[int, int, int]] = []

    def lay(v, parent):
        start = len(order)
        order.append(v)
        kids = child_list(v, parent)
        prev = None
        for c, u in kids:
            s = len(order)
            lay(u, v)
            size = len(order) - s
            if prev is not None and prev[0] == c:
                swaps.append((prev[1], s, size))
            prev = (c, s)
        return len(order) - start

    cs = _centers(adj)
    if len(cs) == 1:
        lay(cs[0], None)
    else:
        c1, c2 = cs
        f12 = next(f for u, f in adj[c1] if u == c2)
        a = code(c1, c2, (1 - f12) if oriented else 0)
        b = code(c2, c1, f12 if oriented else 0)
        if b < a:
            c1, c2 = c2, c1
        size = lay(c1, c2)
        lay(c2, c1)
        if a == b and not oriented:
            swaps.append((0, size, size))

    pos = [0] * n
    for k, v in enumerate(order):
        pos[v] = k
    flips = 0
    new_edges = []
    for u, v in edges:
        a, b = pos[u], pos[v]
        if not oriented and a > b:
            a, b = b, a
            flips += 1
        new_edges.append((a, b))
    new_edges.sort()
    new_labels = tuple(labels[v] for v in order)
    sign = koszul_sign(order, eps) * (-1 if flips % 2 else 1)
    tree = Tree(new_labels, tuple(new_edges))
    new_eps = tuple(eps[v] for v in order)
    for s1, s2, size in swaps:
        if _automorphism_sign(n, s1, s2, size, tree.edges, new_eps, oriented) < 0:
            return 0, tree
    return sign, tree


def _automorphism_sign(n, s1, s2, size, edges, eps, oriented) -> int:
    alpha = list(range(n))
    for k in range(size):
        alpha[s1 + k], alpha[s2 + k] = s2 + k, s1 + k
    sign = koszul_sign(alpha, eps)
    if not oriented:
        flips = sum(1 for u, v in edges if alpha[u] > alpha[v])
        if flips % 2:
            sign = -sign
    return sign


# -- the graph space of a model ---------------------------------------------------------


class GraphSpace:
    """Canonical trees over a one-connected model, with per-multiset relations."""

    def __init__(self, model: Model, oriented: bool = False, cap: int | None = None):
        if not model.one_connected:
            raise UnsupportedModel(
                f"model {model.name!r} has degree-1 elements; the graph complex needs a one-connected model"
            )
        self.model = model
        self.oriented = oriented
        self.cap = cap if cap is not None else default_cap()
        self._eps = tuple(d - 1 for d in model.degrees)
        self._shapes: dict[tuple, list[Tree]] = {}
        self._relations: dict[tuple, "MultisetRelations"] = {}

    def eps_of(self, labels: Sequence[int]) -> tuple:
        e = self._eps
        return tuple(e[i] for i in labels)

    def total_degree(self, t: Tree) -> int:
        return sum(self._eps[i] for i in t.labels)

    def canon(self, labels: Sequence[int], edges: Iterable[tuple[int, int]]) -> tuple[int, Tree]:
        labels = tuple(labels)
        return canonicalize(labels, tuple(edges), self.eps_of(labels), self.oriented)

    def add(self, out: LinComb, labels, edges, c) -> None:
        s, t = self.canon(labels, edges)
        if s:
            out.add_term(t, s * c)

    def shapes(self, multiset: tuple) -> list[Tree]:
        """All canonical trees (including vanishing ones) on a label multiset."""
        multiset = tuple(sorted(multiset))
        if multiset in self._shapes:
            return self._shapes[multiset]
        if len(multiset) == 1:
            out = [Tree(multiset, ())]
        else:
            found = set()
            for lab in sorted(set(multiset)):
                rest = list(multiset)
                rest.remove(lab)
                for t in self.shapes(tuple(rest)):
                    n = len(t.labels)
                    labels = t.labels + (lab,)
                    for v in range(n):
                        options = [((v, n),)] if not self.oriented else [((v, n),), ((n, v),)]
                        for e in options:
                            _, key = self.canon(labels, t.edges + e)
                            found.add(key)
                if len(found) > self.cap:
                    raise PieceTooLarge(self._piece_name(multiset), len(found), self.cap)
            out = sorted(found, key=tree_sort_key)
        self._shapes[multiset] = out
        return out

    def _piece_name(self, multiset) -> str:
        names = ",".join(self.model.names[i] for i in multiset)
        return f"graph(labels={names})"

    def relation_rows(self, multiset: tuple) -> list[LinComb]:
        rows = []
        for t in self.shapes(multiset):
            n = len(t.labels)
            adj: list[list[int]] = [[] for _ in range(n)]
            for k, (u, v) in enumerate(t.edges):
                adj[u].append(k)
                adj[v].append(k)
            if self.oriented:
                for k, (u, v) in enumerate(t.edges):
                    row = LinComb()
                    self.add(row, t.labels, t.edges, 1)
                    self.add(row, t.labels, t.edges[:k] + ((v, u),) + t.edges[k + 1:], 1)
                    if row:
                        rows.append(row)
            for b in range(n):
                for k1, k2 in combinations(adj[b], 2):
                    e1, e2 = t.edges[k1], t.edges[k2]
                    a = e1[0] if e1[1] == b else e1[1]
                    c = e2[0] if e2[1] == b else e2[1]
                    rest = tuple(e for k, e in enumerate(t.edges) if k not in (k1, k2))
                    row = LinComb()
                    for pair in (((a, b), (b, c)), ((b, c), (c, a)), ((c, a), (a, b))):
                        self.add(row, t.labels, rest + pair, 1)
                    if row:
                        rows.append(row)
        return rows

    def relations(self, multiset: tuple) -> "MultisetRelations":
        multiset = tuple(sorted(multiset))
        if multiset not in self._relations:
            trees = [t for t in self.shapes(multiset) if self.canon(t.labels, t.edges)[0]]
            index = {t: k for k, t in enumerate(trees)}
            ech = Echelon()
            for row in self.relation_rows(multiset):
                ech.add({index[t]: c for t, c in row.items()})
            self._relations[multiset] = MultisetRelations(multiset, trees, index, ech)
        return self._relations[multiset]

    def multisets(self, total: int) -> list[tuple]:
        """Label multisets whose desuspended degrees sum to ``total``."""
        letters = sorted(range(self.model.dim), key=lambda i: (self._eps[i], i))
        out = []

        def rec(prefix, start, rest):
            if rest == 0:
                if prefix:
                    out.append(tuple(sorted(prefix)))
                return
            for k in range(start, len(letters)):
                i = letters[k]
                if self._eps[i] > rest:
                    break
                rec(prefix + [i], k, rest - self._eps[i])

        if total > 0:
            rec([], 0, total)
        return sorted(set(out), key=lambda m: (len(m), m))

    def piece_multisets(self, weight: int, internal: int) -> list[tuple]:
        total = internal - weight
        return [m for m in self.multisets(total) if len(m) == weight]

    def recanon(self, chain: Mapping) -> LinComb:
        """Re-express a chain of trees in this space's canonical form."""
        out = LinComb()
        for t, c in chain.items():
            self.add(out, t.labels, t.edges, c)
        return out

    def by_multiset(self, chain: Mapping) -> dict[tuple, LinComb]:
        out: dict[tuple, LinComb] = {}
        for t, c in chain.items():
            out.setdefault(t.multiset(), LinComb()).add_term(t, c)
        return out


@dataclass
class MultisetRelations:
    multiset: tuple
    trees: list
    index: dict
    echelon: Echelon

    @property
    def rank(self) -> int:
        return len(self.echelon)

    @property
    def complement(self) -> list[int]:
        piv = self.echelon.rows
        return [k for k in range(len(self.trees)) if k not in piv]

    def reduce(self, chain: Mapping) -> dict[int, Fraction]:
        """Residue of a chain after removing relations, on complement columns."""
        return self.echelon.reduce({self.index[t]: c for t, c in chain.items()})


# -- relation spaces (public) ----------------------------------------------------------


class RelationSpace:
    """Free span of canonical trees in a (weight, internal degree) piece and its relations."""

    def __init__(self, space: GraphSpace, weight: int, degree: int):
        self.space = space
        self.weight = weight
        self.degree = degree
        self.parts = [space.relations(m) for m in space.piece_multisets(weight, degree)]
        self.basis = [t for p in self.parts for t in p.trees]
        offsets, off = [], 0
        for p in self.parts:
            offsets.append(off)
            off += len(p.trees)
        self._offsets = offsets
        self._part_of = {p.multiset: k for k, p in enumerate(self.parts)}
        comp = []
        for p, o in zip(self.parts, offsets):
            comp.extend(o + k for k in p.complement)
        self.complement = comp
        self._comp_index = {k: i for i, k in enumerate(comp)}

    @property
    def free_dim(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.parts)

    @property
    def quotient_dim(self) -> int:
        return self.free_dim - self.rank

    def relation_rows(self) -> list[LinComb]:
        return [row for p in self.parts for row in self.space.relation_rows(p.multiset)]

    def reduce(self, chain: Mapping) -> dict[int, Fraction]:
        """Coordinates in the complement basis; empty iff the chain is a relation."""
        chain = self.space.recanon(chain)
        out = {}
        for m, part in self.space.by_multiset(chain).items():
            k = self._part_of.get(m)
            if k is None or sum(self.space.model.degrees[i] for i in m) != self.degree:
                raise ValueError("chain does not lie in this piece")
            off = self._offsets[k]
            for col, v in self.parts[k].reduce(part).items():
                out[self._comp_index[off + col]] = v
        return out


def relation_space(model: Model, weight: int, degree: int, oriented: bool = True, space: GraphSpace | None = None) -> RelationSpace:
    """Relations in the piece of trees with ``weight`` vertices and internal degree ``degree``.

    The default keeps both edge orientations so that the free span counts
    every oriented tree once and arrow reversals appear as explicit rows.
    """
    space = space or GraphSpace(model, oriented=oriented)
    return RelationSpace(space, weight, degree)


def quotient_reduce(chain: Mapping, rel: RelationSpace) -> dict[int, Fraction]:
    return rel.reduce(chain)


def normalize(tree: Tree, coefficient, model: Model) -> tuple[Tree, Fraction]:
    """Validate a tree and return its canonical form with the adjusted coefficient.

    Vanishing trees (odd automorphism) come back with coefficient 0.
    """
    check_tree(len(tree.labels), tree.edges)
    eps = tuple(model.degrees[i] - 1 for i in tree.labels)
    s, t = canonicalize(tuple(tree.labels), tuple(tree.edges), eps, False)
    return t, Fraction(coefficient) * s


# -- the complexes ----------------------------------------------------------------------


class GraphComplex:
    """Trees modulo reordering and arrow reversal, without the Arnold quotient."""

    tag = "graph"

    def __init__(self, model: Model, cap: int | None = None):
        self.model = model
        self.space = GraphSpace(model, oriented=False, cap=cap)
        self._eps = self.space._eps
        self._basis: dict[int, list[Tree]] = {}
        self._index: dict[int, dict[Tree, int]] = {}
        self._dmat: dict[int, SparseMatrix] = {}
        self._pieces: dict = {}
        self._homology_cache: dict = {}

    def __repr__(self):
        return f"{type(self).__name__}({self.model.name!r})"

    # -- degrees ------------------------------------------------------------------

    def total_degree(self, t: Tree) -> int:
        return self.space.total_degree(t)

    def chain_total_degree(self, chain: Mapping) -> int | None:
        degs = {self.total_degree(t) for t in chain}
        return degs.pop() if len(degs) == 1 else None

    def split_total_degree(self, chain: Mapping) -> dict[int, LinComb]:
        out: dict[int, LinComb] = {}
        for t, c in chain.items():
            out.setdefault(self.total_degree(t), LinComb()).add_term(t, c)
        return out

    def split_weight(self, chain: Mapping) -> dict[int, LinComb]:
        out: dict[int, LinComb] = {}
        for t, c in chain.items():
            out.setdefault(t.weight, LinComb()).add_term(t, c)
        return out

    # -- construction -----------------------------------------------------------------

    def tree(self, labels: Sequence, edges: Iterable[tuple[int, int]] = ()) -> LinComb:
        """Multilinear expansion of a tree whose labels are elements or names."""
        edges = tuple(edges)
        check_tree(len(labels), edges)
        elems = [self._element(a) for a in labels]
        out = LinComb()
        for labs, c in _expand(elems):
            self.space.add(out, labs, edges, c)
        return out

    def _element(self, a):
        if isinstance(a, str):
            return self.model.parse(a)
        if isinstance(a, int):
            return LinComb.single(a)
        return a

    def phi(self, chain: Mapping) -> LinComb:
        """Bar words to path graphs ``a1 -> a2 -> ... -> an``."""
        out = LinComb()
        for w, c in chain.items():
            edges = tuple((i, i + 1) for i in range(len(w) - 1))
            self.space.add(out, w, edges, c)
        return out

    def pullback(self, chain: Mapping, phi: Morphism) -> LinComb:
        """Apply a morphism to every label; the target must be one-connected."""
        target = type(self)(phi.target) if phi.target is not self.model else self
        out = LinComb()
        for t, c in chain.items():
            for labs, v in _expand([phi.images[i] for i in t.labels]):
                target.space.add(out, labs, t.edges, c * v)
        return out

    # -- differential ---------------------------------------------------------------

    def d_internal(self, chain: Mapping) -> LinComb:
        m = self.model
        e = self._eps
        out = LinComb()
        for t, c in chain.items():
            sign = 1
            for j, a in enumerate(t.labels):
                da = m.d_basis(a)
                if da:
                    for b, v in da.items():
                        labs = t.labels[:j] + (b,) + t.labels[j + 1:]
                        self.space.add(out, labs, t.edges, sign * c * v)
                if e[a] % 2:
                    sign = -sign
        return out

    def d_external(self, chain: Mapping) -> LinComb:
        m = self.model
        e = self._eps
        out = LinComb()
        for t, c in chain.items():
            n = len(t.labels)
            eps = self.space.eps_of(t.labels)
            for k, (u, v) in enumerate(t.edges):
                prod = m.mul_basis(t.labels[u], t.labels[v])
                if not prod:
                    continue
                others = [i for i in range(n) if i not in (u, v)]
                sign = koszul_sign([u, v] + others, eps)
                if e[t.labels[u]] % 2:
                    sign = -sign
                new_pos = {i: k2 + 1 for k2, i in enumerate(others)}
                new_pos[u] = new_pos[v] = 0
                edges = tuple((new_pos[a], new_pos[b]) for k2, (a, b) in enumerate(t.edges) if k2 != k)
                rest = tuple(t.labels[i] for i in others)
                for lab, val in prod.items():
                    self.space.add(out, (lab,) + rest, edges, sign * c * val)
        return out

    def d(self, chain: Mapping) -> LinComb:
        return self.d_internal(chain).add_scaled(self.d_external(chain))

    d_graph = d

    # -- cobracket -----------------------------------------------------------------------

    def cobracket(self, chain: Mapping) -> LinComb:
        """Sum over edges of the two components, the edge pointing into the second factor."""
        out = LinComb()
        for t, c in chain.items():
            n = len(t.labels)
            eps = self.space.eps_of(t.labels)
            for k, (s, r) in enumerate(t.edges):
                rest = [e for k2, e in enumerate(t.edges) if k2 != k]
                side = _component(n, rest, s)
                g1 = [i for i in range(n) if i in side]
                g2 = [i for i in range(n) if i not in side]
                kappa = koszul_sign(g1 + g2, eps)
                t1, s1 = self._sub(t, g1, rest)
                t2, s2 = self._sub(t, g2, rest)
                if not (s1 and s2):
                    continue
                d1 = sum(eps[i] for i in g1)
                d2 = sum(eps[i] for i in g2)
                coef = c * kappa * s1 * s2
                out.add_term((t1, t2), coef)
                out.add_term((t2, t1), -coef * (-1 if (d1 * d2) % 2 else 1))
        return out

    def _sub(self, t: Tree, verts: list[int], edges) -> tuple[Tree, int]:
        pos = {v: k for k, v in enumerate(verts)}
        sub_edges = tuple((pos[a], pos[b]) for a, b in edges if a in pos and b in pos)
        s, tree = self.space.canon(tuple(t.labels[v] for v in verts), sub_edges)
        return tree, s

    # -- graded pieces ---------------------------------------------------------------------

    def _trees(self, multiset) -> list[Tree]:
        return self.space.relations(multiset).trees

    def total_basis(self, t: int) -> list[Tree]:
        if t not in self._basis:
            out = []
            for m in self.space.multisets(t):
                out.extend(self._trees(m))
                if len(out) > self.space.cap:
                    raise PieceTooLarge(f"{self.tag}(total degree={t})", len(out), self.space.cap)
            self._basis[t] = out
            self._index[t] = {tr: k for k, tr in enumerate(out)}
        return self._basis[t]

    def _vector(self, chain: Mapping, index: dict, what: str) -> dict[int, Fraction]:
        out = {}
        for tr, c in chain.items():
            k = index.get(tr)
            if k is None:
                raise ValueError(f"tree {self.format_tree(tr)} is not a basis tree of {what}")
            out[k] = Fraction(c)
        return out

    def total_coords(self, chain: Mapping, t: int) -> dict[int, Fraction]:
        self.total_basis(t)
        return self._vector(chain, self._index[t], f"total degree {t}")

    def is_zero(self, chain: Mapping) -> bool:
        return not chain

    def piece_basis(self, weight: int, internal: int) -> list[Tree]:
        key = (weight, internal)
        if key not in self._pieces:
            basis = [t for m in self.space.piece_multisets(weight, internal) for t in self._trees(m)]
            self._pieces[key] = (basis, {t: k for k, t in enumerate(basis)})
        return self._pieces[key][0]

    def piece_coords(self, chain: Mapping, weight: int, internal: int) -> dict[int, Fraction]:
        self.piece_basis(weight, internal)
        return self._vector(chain, self._pieces[(weight, internal)][1], f"piece ({weight}, {internal})")

    def piece_lift(self, vec: Mapping[int, object], weight: int, internal: int) -> LinComb:
        basis = self.piece_basis(weight, internal)
        return LinComb((basis[k], c) for k, c in vec.items())

    def internal_matrix(self, weight: int, internal: int) -> SparseMatrix:
        """Matrix of the internal differential from piece ``(weight, internal)`` to ``internal + 1``."""
        src = self.piece_basis(weight, internal)
        tgt = self.piece_basis(weight, internal + 1)
        cols = [self.piece_coords(self.d_internal(LinComb.single(t)), weight, internal + 1) for t in src]
        return SparseMatrix(len(tgt), len(src), cols)

    def lift(self, vec: Mapping[int, object], t: int) -> LinComb:
        basis = self.total_basis(t)
        return LinComb((basis[k], c) for k, c in vec.items())

    def differential_matrix(self, t: int) -> SparseMatrix:
        if t not in self._dmat:
            src = self.total_basis(t)
            tgt = self.total_basis(t + 1)
            cols = [self.total_coords(self.d(LinComb.single(tr)), t + 1) for tr in src]
            self._dmat[t] = SparseMatrix(len(tgt), len(src), cols)
        return self._dmat[t]

    # -- text ----------------------------------------------------------------------

    def format_tree(self, t: Tree) -> str:
        return format_tree(self.model, t)

    def format(self, chain: Mapping) -> str:
        return format_lincomb(chain, self.format_tree, sort_key=tree_sort_key)

    def parse(self, text: str) -> LinComb:
        return parse_graph(self, text)


class EilComplex(GraphComplex):
    """The quotient of the graph complex by the Arnold relations."""

    tag = "eil"

    def _trees(self, multiset) -> list[Tree]:
        rel = self.space.relations(multiset)
        return [rel.trees[k] for k in rel.complement]

    def _vector(self, chain: Mapping, index: dict, what: str) -> dict[int, Fraction]:
        out = {}
        for m, part in self.space.by_multiset(chain).items():
            rel = self.space.relations(m)
            for col, v in rel.reduce(part).items():
                k = index.get(rel.trees[col])
                if k is None:
                    raise ValueError(f"chain has terms outside {what}")
                out[k] = v
        return out

    def quotient_coords(self, chain: Mapping) -> dict[tuple[Tree], Fraction]:
        """Reduced form of a chain of any degree, keyed by complement trees."""
        out = {}
        for m, part in self.space.by_multiset(chain).items():
            rel = self.space.relations(m)
            for col, v in rel.reduce(part).items():
                out[rel.trees[col]] = v
        return out

    def reduce(self, chain: Mapping) -> LinComb:
        """Normal form of a chain: the same class written on complement trees."""
        return LinComb(self.quotient_coords(chain))

    def is_zero(self, chain: Mapping) -> bool:
        return not self.quotient_coords(chain)

    def tensor_reduce(self, tensor: Mapping) -> LinComb:
        """Normal form of an element of the tensor square of the quotient."""
        left: dict[Tree, LinComb] = {}
        for (a, b), c in tensor.items():
            left.setdefault(b, LinComb()).add_term(a, c)
        mid = LinComb()
        for b, part in left.items():
            for a, c in self.reduce(part).items():
                mid.add_term((a, b), c)
        right: dict[Tree, LinComb] = {}
        for (a, b), c in mid.items():
            right.setdefault(a, LinComb()).add_term(b, c)
        out = LinComb()
        for a, part in right.items():
            for b, c in self.reduce(part).items():
                out.add_term((a, b), c)
        return out

    # -- chain homotopy on free models ------------------------------------------------

    def homotopy_h(self, chain: Mapping) -> LinComb:
        """Split one generator off a vertex label, averaged over the word length.

        Each summand is homogeneous in the total word length ``n`` (the number
        of generator letters over all labels); words of length one are left
        alone and the result is scaled by ``1/n``.
        """
        m = self.model
        if m.kind != "free" or m.relations:
            raise UnsupportedModel(f"model {m.name!r} is not free; the homotopy needs a free model")
        ngen = len(m.generators)
        unit = [m.monomial_index(tuple(1 if j == k else 0 for j in range(ngen))) for k in range(ngen)]
        out = LinComb()
        for t, c in chain.items():
            exps = [m.monomial_exponents(a) for a in t.labels]
            n = sum(sum(x) for x in exps)
            sign_prefix = 1
            for j, a in enumerate(t.labels):
                ex = exps[j]
                if sum(ex) >= 2:
                    for k in range(ngen):
                        if not ex[k] or unit[k] is None:
                            continue
                        rest_ex = tuple(x - (1 if i == k else 0) for i, x in enumerate(ex))
                        r = m.monomial_index(rest_ex)
                        back = m.mul_basis(unit[k], r).get(a)
                        sigma1 = 1 if back > 0 else -1
                        s_local = -1 if self._eps[unit[k]] % 2 else 1
                        coef = c * Fraction(ex[k], n) * sign_prefix * sigma1 * s_local
                        labels = t.labels[:j] + (unit[k], r) + t.labels[j + 1:]
                        shift = [i if i < j else i + 1 for i in range(len(t.labels))]
                        edges = tuple((shift[u], shift[v]) for u, v in t.edges) + ((j, j + 1),)
                        self.space.add(out, labels, edges, coef)
                if self._eps[a] % 2:
                    sign_prefix = -sign_prefix
        return out

    def word_length(self, t: Tree) -> int:
        m = self.model
        return sum(sum(m.monomial_exponents(a)) for a in t.labels)


def _component(n: int, edges, start: int) -> set[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def _expand(elems: Sequence[Mapping[int, object]]):
    out = [((), Fraction(1))]
    for e in elems:
        out = [(labs + (i,), c * v) for labs, c in out for i, v in e.items()]
    return out


def eil_complex(model: Model, cap: int | None = None) -> EilComplex:
    return EilComplex(model, cap)


def multilinear_trees(space: GraphSpace, labels: Sequence[int]) -> list[Tree]:
    """Canonical trees (nonvanishing) on a multiset of labels."""
    rel = space.relations(tuple(sorted(labels)))
    return list(rel.trees)


# -- text -----------------------------------------------------------------------------


def format_tree(model: Model, t: Tree) -> str:
    verts = ", ".join(f"v{k + 1}:{model.names[a]}" for k, a in enumerate(t.labels))
    if not t.edges:
        return "tree{" + verts + "}"
    edges = ", ".join(f"v{u + 1}->v{v + 1}" for u, v in t.edges)
    return "tree{" + verts + "; " + edges + "}"


def parse_graph(cx: GraphComplex, text: str) -> LinComb:
    """Parse sums like ``2*tree{v1:x, v2:y; v1->v2} - tree{v1:z}``."""
    model = cx.model
    s = TokenStream(text)
    p = ElementParser(s, model.atom, model.multiply)
    total = LinComb()
    first = True
    while first or (s.peek().kind == "op" and s.peek().text in "+-"):
        first = False
        sgn = p.sign()
        c = p.coefficient()
        if c is not None and not isinstance(c, Fraction):
            if c.value != 0:
                s.fail("a nonzero constant is not a graph chain")
            continue
        tok = s.next()
        if tok.kind != "name" or tok.text != "tree":
            s.fail("expected 'tree{'", tok)
        s.expect("{")
        names: dict[str, int] = {}
        labels = []
        while True:
            v = s.expect_name()
            if v in names:
                s.fail(f"duplicate vertex {v!r}")
            s.expect(":")
            names[v] = len(labels)
            labels.append(p.product())
            if not s.accept(","):
                break
        edges = []
        if s.accept(";"):
            while not s.at("}"):
                a = s.expect_name()
                s.expect("->")
                b = s.expect_name()
                for x in (a, b):
                    if x not in names:
                        s.fail(f"unknown vertex {x!r}")
                edges.append((names[a], names[b]))
                if not s.accept(","):
                    break
        s.expect("}")
        try:
            tr = cx.tree(labels, edges)
        except InvalidTree as exc:
            s.fail(str(exc))
        total.add_scaled(tr, sgn * (c if c is not None else 1))
    s.expect_end()
    return total


__all__ = [
    "Tree",
    "InvalidTree",
    "canonicalize",
    "normalize",
    "GraphSpace",
    "GraphComplex",
    "EilComplex",
    "eil_complex",
    "RelationSpace",
    "relation_space",
    "quotient_reduce",
    "format_tree",
    "parse_graph",
]
