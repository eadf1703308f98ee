"""Exact linear algebra over the graded pieces of bar and graph complexes.

Vectors are ``dict[int, Fraction]`` (sparse coordinates).  A complex object
(see :mod:`hopfinv.barcx` and :mod:`hopfinv.graphcx`) supplies bases and
coordinates for each total degree; this module turns those into differential
matrices, homology ranks, preimages and Kunneth projections.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .lincomb import LinComb

DEFAULT_CAP = 200_000


def default_cap() -> int:
    raw = os.environ.get("HOPFINV_CAP")
    return int(raw) if raw else DEFAULT_CAP


class PieceTooLarge(RuntimeError):
    """A graded piece exceeds the configured dimension cap."""

    def __init__(self, piece: str, size: int, cap: int):
        self.piece = piece
        self.size = size
        self.cap = cap
        super().__init__(f"piece {piece} has at least {size} monomials, above the cap of {cap}")


class NotClosed(ValueError):
    """A chain that should be a cycle is not."""


class _NotExact:
    def __repr__(self):
        return "NOT_EXACT"

    def __bool__(self):
        return False


NOT_EXACT = _NotExact()

Vector = dict


# -- echelon forms ----------------------------------------------------------------


class Echelon:
    """Incrementally maintained reduced row echelon form over Q.

    Each stored row has its pivot at its smallest column with entry 1, and no
    other stored row has a nonzero entry in that column.  The reduced form of a
    row space is unique, so results do not depend on insertion order.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def __len__(self):
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        return e

    def reduce(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        for p in [c for c in v if c in self.rows]:
            coef = v.get(p)
            if not coef:
                continue
            for k, c in self.rows[p].items():
                nv = v.get(k, 0) - coef * c
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: Mapping[int, object]) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                for k, v in r.items():
                    nv = row.get(k, 0) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[p] = r
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def rank_fraction_free(rows: Iterable[Mapping[int, object]]) -> int:
    """Rank by integer elimination with content normalisation."""
    piv: dict[int, dict[int, int]] = {}
    for row in rows:
        r = _integer_row(row)
        while r:
            c = min(r)
            prow = piv.get(c)
            if prow is None:
                piv[c] = r
                break
            a, b = prow[c], r[c]
            new = {}
            for k in set(r) | set(prow):
                v = a * r.get(k, 0) - b * prow.get(k, 0)
                if v:
                    new[k] = v
            r = _primitive(new)
    return len(piv)


def _integer_row(row: Mapping[int, object]) -> dict[int, int]:
    fr = {k: Fraction(v) for k, v in row.items() if v}
    if not fr:
        return {}
    lcm = 1
    for v in fr.values():
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return _primitive({k: int(v * lcm) for k, v in fr.items()})


def _primitive(r: dict[int, int]) -> dict[int, int]:
    if not r:
        return r
    g = 0
    for v in r.values():
        g = math.gcd(g, v)
    if g > 1:
        r = {k: v // g for k, v in r.items()}
    return r


# -- sparse matrices ----------------------------------------------------------------


class SparseMatrix:
    """``nrows x ncols`` rational matrix stored by columns."""

    def __init__(self, nrows: int, ncols: int, cols: list[dict[int, Fraction]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]

    @classmethod
    def from_rows(cls, rows: list[Mapping[int, object]], ncols: int) -> "SparseMatrix":
        m = cls(len(rows), ncols)
        for i, row in enumerate(rows):
            for j, v in row.items():
                if v:
                    m.cols[j][i] = Fraction(v)
        return m

    def rows(self) -> list[dict[int, Fraction]]:
        out = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def apply(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, c in vec.items():
            if not c:
                continue
            for i, v in self.cols[j].items():
                nv = out.get(i, 0) + v * c
                if nv:
                    out[i] = nv
                else:
                    out.pop(i, None)
        return out

    def rank(self) -> int:
        if self.nrows < self.ncols:
            return rank_fraction_free(self.rows())
        return rank_fraction_free(self.cols)

    def row_echelon(self) -> Echelon:
        e = Echelon()
        for row in self.rows():
            e.add(row)
        return e

    def kernel(self) -> list[dict[int, Fraction]]:
        e = self.row_echelon()
        pivots = set(e.rows)
        basis = []
        for f in range(self.ncols):
            if f in pivots:
                continue
            v = {f: Fraction(1)}
            for p, row in e.rows.items():
                c = row.get(f)
                if c:
                    v[p] = -c
            basis.append(v)
        return basis

    def image_echelon(self) -> Echelon:
        e = Echelon()
        for col in self.cols:
            e.add(col)
        return e


def solve_preimage(matrix: SparseMatrix, target: Mapping[int, object], free: Mapping[int, object] | None = None):
    """A solution ``x`` of ``matrix @ x == target`` or ``NOT_EXACT``.

    The particular solution sets every free variable to zero unless a value
    is supplied in ``free``; pivot variables are then determined.
    """
    if any(i >= matrix.nrows or i < 0 for i in target):
        raise ValueError("target vector does not fit the codomain of the matrix")
    n = matrix.ncols
    rows = matrix.rows()
    for i, c in target.items():
        if c:
            rows[i][n] = Fraction(c)
    e = Echelon()
    for row in rows:
        e.add(row)
    if n in e.rows:
        return NOT_EXACT
    free = {k: Fraction(v) for k, v in (free or {}).items() if v}
    for k in free:
        if k in e.rows:
            raise ValueError(f"variable {k} is not free")
    x = dict(free)
    for p, row in e.rows.items():
        val = row.get(n, Fraction(0))
        for f, fv in free.items():
            c = row.get(f)
            if c:
                val -= c * fv
        if val:
            x[p] = val
    return x


# -- complexes --------------------------------------------------------------------


def assemble(cx, total_degree: int):
    """Basis of total degree ``t`` and the matrix of ``d`` into degree ``t + 1``."""
    return cx.total_basis(total_degree), cx.differential_matrix(total_degree)


def homology_rank(cx, total_degree: int) -> int:
    t = total_degree
    basis = cx.total_basis(t)
    if not basis:
        return 0
    out_rank = cx.differential_matrix(t).rank()
    in_rank = cx.differential_matrix(t - 1).rank() if t >= 1 else 0
    return len(basis) - out_rank - in_rank


@dataclass
class HomologyBasis:
    """Cycles spanning a complement of the boundaries, with projection functionals."""

    degree: int
    cycles: list[dict[int, Fraction]]
    functionals: list[dict[int, Fraction]]

    @property
    def rank(self) -> int:
        return len(self.cycles)

    def project(self, vec: Mapping[int, object]) -> list[Fraction]:
        out = []
        for f in self.functionals:
            s = Fraction(0)
            for i, c in vec.items():
                fi = f.get(i)
                if fi:
                    s += fi * c
            out.append(s)
        return out


def homology_basis(cx, total_degree: int) -> HomologyBasis:
    """Split ``C^t = B + H + K`` and return ``H`` with the projection onto it.

    The projection kills boundaries and the complement ``K`` of the cycles, so
    it is a chain map to homology with zero differential.
    """
    t = total_degree
    cache = getattr(cx, "_homology_cache", None)
    if cache is not None and t in cache:
        return cache[t]
    n = len(cx.total_basis(t))
    if n == 0:
        hb = HomologyBasis(t, [], [])
    else:
        dout = cx.differential_matrix(t)
        cycles = dout.kernel()
        ech = cx.differential_matrix(t - 1).image_echelon() if t >= 1 else Echelon()
        columns = [dict(r) for r in ech.rows.values()]
        nb = len(columns)
        hvecs = []
        for z in cycles:
            if ech.add(z):
                hvecs.append(z)
        columns.extend(hvecs)
        for i in range(n):
            if ech.add({i: 1}):
                columns.append({i: Fraction(1)})
        # invert P (columns = B, H, K) by Gauss-Jordan on [P | I]
        prow = [dict() for _ in range(n)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                prow[i][j] = v
        inv = Echelon()
        for i, row in enumerate(prow):
            row[n + i] = Fraction(1)
            inv.add(row)
        functionals = []
        for h in range(nb, nb + len(hvecs)):
            r = inv.rows[h]
            functionals.append({k - n: v for k, v in r.items() if k >= n})
        hb = HomologyBasis(t, hvecs, functionals)
    if cache is not None:
        cache[t] = hb
    return hb


def is_cycle(cx, chain) -> bool:
    t = cx.chain_total_degree(chain)
    if t is None:
        return all(is_cycle(cx, part) for part in cx.split_total_degree(chain).values())
    dc = cx.d(chain)
    if not dc:
        return True
    return not cx.total_coords(dc, t + 1)


# -- tensor products ----------------------------------------------------------------


def tensor_coords(cx, tensor: Mapping) -> dict[tuple[int, int], dict[tuple[int, int], Fraction]]:
    """Coordinates of a tensor chain, split by bidegree."""
    out: dict[tuple[int, int], dict[tuple[int, int], Fraction]] = {}
    cache: dict = {}

    def coords(key):
        if key not in cache:
            t = cx.total_degree(key)
            cache[key] = (t, cx.total_coords(LinComb.single(key), t))
        return cache[key]

    for (k1, k2), c in tensor.items():
        p, v1 = coords(k1)
        q, v2 = coords(k2)
        block = out.setdefault((p, q), {})
        for i, a in v1.items():
            for j, b in v2.items():
                nv = block.get((i, j), 0) + c * a * b
                if nv:
                    block[(i, j)] = nv
                else:
                    block.pop((i, j), None)
    return {k: v for k, v in out.items() if v}


def tensor_d_coords(cx, blocks):
    """Apply ``d ⊗ 1 + (-1)^p 1 ⊗ d`` in coordinates."""
    out: dict[tuple[int, int], dict[tuple[int, int], Fraction]] = {}

    def acc(key, idx, val):
        block = out.setdefault(key, {})
        nv = block.get(idx, 0) + val
        if nv:
            block[idx] = nv
        else:
            block.pop(idx, None)

    for (p, q), block in blocks.items():
        dp = cx.differential_matrix(p)
        dq = cx.differential_matrix(q)
        sign = -1 if p % 2 else 1
        for (i, j), c in block.items():
            for i2, v in dp.cols[i].items():
                acc((p + 1, q), (i2, j), c * v)
            for j2, v in dq.cols[j].items():
                acc((p, q + 1), (i, j2), sign * c * v)
    return {k: v for k, v in out.items() if v}


@dataclass
class KunnethResult:
    """Closed-times-closed representative of a tensor cycle.

    ``classes[(p, q)][(i, j)]`` is the coefficient of ``h_i ⊗ h'_j`` where the
    ``h`` run over ``bases[p].cycles`` and ``bases[q].cycles``.
    """

    classes: dict[tuple[int, int], dict[tuple[int, int], Fraction]]
    bases: dict[int, HomologyBasis]
    representative: LinComb
    cobounding: LinComb | None = None
    extra: dict = field(default_factory=dict)


def closed_kunneth_adjust(cx, tensor: Mapping, certificate: bool = True, bidegrees=None) -> KunnethResult:
    """Replace a cycle of ``C ⊗ C`` by a homologous sum of closed ⊗ closed terms.

    With ``certificate`` the returned ``cobounding`` element ``S`` satisfies
    ``D(S) = tensor - representative`` for the tensor differential ``D``.
    ``bidegrees`` restricts the computation (skipping the cycle check and the
    certificate) to the listed bidegrees.
    """
    blocks = tensor_coords(cx, tensor)
    if bidegrees is None:
        if tensor_d_coords(cx, blocks):
            raise NotClosed("tensor chain is not a cycle")
    else:
        blocks = {k: v for k, v in blocks.items() if k in set(bidegrees)}
        certificate = False
    bases: dict[int, HomologyBasis] = {}
    classes = {}
    rep = LinComb()
    for (p, q), block in blocks.items():
        hp = bases.setdefault(p, homology_basis(cx, p))
        hq = bases.setdefault(q, homology_basis(cx, q))
        if not hp.rank or not hq.rank:
            continue
        # (pi_p ⊗ pi_q)(block)
        rows_p: dict[int, dict[int, Fraction]] = {}
        for (i, j), c in block.items():
            rows_p.setdefault(i, {})[j] = c
        coeff = {}
        for a, fa in enumerate(hp.functionals):
            mid: dict[int, Fraction] = {}
            for i, fv in fa.items():
                row = rows_p.get(i)
                if row:
                    for j, c in row.items():
                        mid[j] = mid.get(j, 0) + fv * c
            for b, fb in enumerate(hq.functionals):
                s = sum((fb.get(j, 0) * c for j, c in mid.items()), Fraction(0))
                if s:
                    coeff[(a, b)] = s
        if coeff:
            classes[(p, q)] = coeff
            for (a, b), c in coeff.items():
                ha = cx.lift(hp.cycles[a], p)
                hb_ = cx.lift(hq.cycles[b], q)
                for k1, c1 in ha.items():
                    for k2, c2 in hb_.items():
                        rep.add_term((k1, k2), c * c1 * c2)
    cob = None
    if certificate:
        cob = _tensor_cobounding(cx, blocks, classes, bases)
    return KunnethResult(classes, bases, rep, cob)


def _tensor_cobounding(cx, blocks, classes, bases) -> LinComb:
    diff = {k: dict(v) for k, v in blocks.items()}
    for (p, q), coeff in classes.items():
        hp, hq = bases[p], bases[q]
        block = diff.setdefault((p, q), {})
        for (a, b), c in coeff.items():
            for i, x in hp.cycles[a].items():
                for j, y in hq.cycles[b].items():
                    nv = block.get((i, j), 0) - c * x * y
                    if nv:
                        block[(i, j)] = nv
                    else:
                        block.pop((i, j), None)
    diff = {k: v for k, v in diff.items() if v}
    if not diff:
        return LinComb()
    totals = {p + q for p, q in diff}
    out = LinComb()
    for s in totals:
        target_blocks = {k: v for k, v in diff.items() if sum(k) == s}
        src = [(a, s - 1 - a) for a in range(1, s - 1)]
        src = [(a, b) for a, b in src if cx.total_basis(a) and cx.total_basis(b)]
        col_index = []
        cols = []
        row_index: dict[tuple, int] = {}
        for (a, b) in src:
            na, nb = len(cx.total_basis(a)), len(cx.total_basis(b))
            for i in range(na):
                for j in range(nb):
                    img = tensor_d_coords(cx, {(a, b): {(i, j): Fraction(1)}})
                    col = {}
                    for key, blk in img.items():
                        for idx, v in blk.items():
                            r = row_index.setdefault((key, idx), len(row_index))
                            col[r] = v
                    col_index.append((a, b, i, j))
                    cols.append(col)
        tvec = {}
        for key, blk in target_blocks.items():
            for idx, v in blk.items():
                r = row_index.setdefault((key, idx), len(row_index))
                tvec[r] = v
        mat = SparseMatrix(len(row_index), len(cols), cols)
        x = solve_preimage(mat, tvec)
        if x is NOT_EXACT:
            raise NotClosed("difference from the Kunneth representative is not a boundary")
        for col, c in x.items():
            a, b, i, j = col_index[col]
            ka = cx.total_basis(a)[i]
            kb = cx.total_basis(b)[j]
            for k1, c1 in cx.lift({i: 1}, a).items():
                for k2, c2 in cx.lift({j: 1}, b).items():
                    out.add_term((k1, k2), c * c1 * c2)
            del ka, kb
    return out


def tensor_d(cx, tensor: Mapping) -> LinComb:
    """Tensor differential on chains: ``d(a) ⊗ b + (-1)^|a| a ⊗ d(b)``."""
    out = LinComb()
    for (k1, k2), c in tensor.items():
        for j1, v in cx.d(LinComb.single(k1)).items():
            out.add_term((j1, k2), c * v)
        sign = -1 if cx.total_degree(k1) % 2 else 1
        for j2, v in cx.d(LinComb.single(k2)).items():
            out.add_term((k1, j2), sign * c * v)
    return out
