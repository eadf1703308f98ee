"""The bar complex of a model: words of positive-degree basis elements.

A word ``(i1, ..., ik)`` of basis indices stands for ``x_i1 | ... | x_ik``.
Each letter is desuspended, so it carries degree ``eps = deg - 1`` in every
sign computation; the total degree of a word is the sum of the ``eps``.

Sign convention (with ``e_j`` the desuspended degree of the j-th letter)::

    d_int(a1|...|ak) = sum_i (-1)^(e_1 + ... + e_(i-1)) a1|...|d(a_i)|...|ak
    d_ext(a1|...|ak) = sum_i (-1)^(e_1 + ... + e_i)     a1|...|a_i a_(i+1)|...|ak

Both square to zero and anticommute, so ``d = d_int + d_ext`` is a
differential.  With it, ``x|x + y`` is closed in ``Λ(x2, y3; dy = x^2)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .chainalg import PieceTooLarge, SparseMatrix, default_cap
from .lincomb import LinComb
from .model import Model, Morphism, UnsupportedModel, format_lincomb
from .parse import ElementParser, TokenStream

Word = tuple


def word_weight_key(word: Word):
    return (len(word), word)


class BarComplex:
    """Bar complex ``B(A)`` of a model, with cached graded pieces."""

    tag = "bar"

    def __init__(self, model: Model, cap: int | None = None):
        self.model = model
        self.cap = cap if cap is not None else default_cap()
        self._eps = tuple(d - 1 for d in model.degrees)
        self._total: dict[int, list[Word]] = {}
        self._total_index: dict[int, dict[Word, int]] = {}
        self._pieces: dict[tuple[int, int], list[Word]] = {}
        self._dmat: dict[int, SparseMatrix] = {}
        self._homology_cache: dict = {}

    def __repr__(self):
        return f"BarComplex({self.model.name!r})"

    # -- degrees ----------------------------------------------------------------

    def eps(self, word: Word) -> int:
        return sum(self._eps[i] for i in word)

    total_degree = eps

    def internal_degree(self, word: Word) -> int:
        return sum(self.model.degrees[i] for i in word)

    def chain_total_degree(self, chain: Mapping) -> int | None:
        degs = {self.eps(w) for w in chain}
        return degs.pop() if len(degs) == 1 else None

    def split_total_degree(self, chain: Mapping) -> dict[int, LinComb]:
        out: dict[int, LinComb] = {}
        for w, c in chain.items():
            out.setdefault(self.eps(w), LinComb()).add_term(w, c)
        return out

    def split_weight(self, chain: Mapping) -> dict[int, LinComb]:
        out: dict[int, LinComb] = {}
        for w, c in chain.items():
            out.setdefault(len(w), LinComb()).add_term(w, c)
        return out

    # -- differentials ----------------------------------------------------------

    def d_internal(self, chain: Mapping) -> LinComb:
        m = self.model
        out = LinComb()
        for word, c in chain.items():
            sign = 1
            for j, a in enumerate(word):
                da = m.d_basis(a)
                if da:
                    sc = sign * c
                    for b, v in da.items():
                        out.add_term(word[:j] + (b,) + word[j + 1:], sc * v)
                if self._eps[a] % 2:
                    sign = -sign
        return out

    def d_external(self, chain: Mapping) -> LinComb:
        m = self.model
        out = LinComb()
        for word, c in chain.items():
            sign = 1
            for j in range(len(word) - 1):
                if self._eps[word[j]] % 2:
                    sign = -sign
                prod = m.mul_basis(word[j], word[j + 1])
                if prod:
                    sc = sign * c
                    for b, v in prod.items():
                        out.add_term(word[:j] + (b,) + word[j + 2:], sc * v)
        return out

    def d(self, chain: Mapping) -> LinComb:
        return self.d_internal(chain).add_scaled(self.d_external(chain))

    d_total = d

    # -- graded pieces ----------------------------------------------------------

    def piece_basis(self, weight: int, internal: int) -> list[Word]:
        """Words with ``weight`` letters and internal degree ``internal``."""
        key = (weight, internal)
        if key not in self._pieces:
            by_deg: dict[int, list[int]] = {}
            for i, deg in enumerate(self.model.degrees):
                by_deg.setdefault(deg, []).append(i)
            out: list[Word] = []
            name = f"bar(weight={weight}, internal degree={internal})"

            def rec(prefix, k, g):
                if k == 0:
                    if g == 0:
                        out.append(prefix)
                        if len(out) > self.cap:
                            raise PieceTooLarge(name, len(out), self.cap)
                    return
                for deg in sorted(by_deg):
                    if deg > g - (k - 1):
                        break
                    for i in by_deg[deg]:
                        rec(prefix + (i,), k - 1, g - deg)

            rec((), weight, internal)
            out.sort()
            self._pieces[key] = out
        return self._pieces[key]

    def total_basis(self, t: int) -> list[Word]:
        """All words of total degree ``t``, ordered by weight then letters."""
        if t in self._total:
            return self._total[t]
        if t < 0:
            self._total[t], self._total_index[t] = [], {}
            return []
        if t > 0 and not self.model.one_connected and self.model.dim:
            raise UnsupportedModel(
                f"model {self.model.name!r} has degree-1 elements; total-degree pieces are infinite"
            )
        letters = sorted(range(self.model.dim), key=lambda i: self._eps[i])
        out: list[Word] = []
        name = f"bar(total degree={t})"

        def rec(prefix, rest):
            if rest == 0:
                if prefix:
                    out.append(prefix)
                    if len(out) > self.cap:
                        raise PieceTooLarge(name, len(out), self.cap)
                return
            for i in letters:
                e = self._eps[i]
                if e > rest:
                    break
                rec(prefix + (i,), rest - e)

        if t > 0:
            rec((), t)
        out.sort(key=word_weight_key)
        self._total[t] = out
        self._total_index[t] = {w: k for k, w in enumerate(out)}
        return out

    def total_coords(self, chain: Mapping, t: int) -> dict[int, Fraction]:
        self.total_basis(t)
        idx = self._total_index[t]
        out = {}
        for w, c in chain.items():
            k = idx.get(w)
            if k is None:
                raise ValueError(f"word {self.format_word(w)} is not of total degree {t}")
            out[k] = Fraction(c)
        return out

    def is_zero(self, chain: Mapping) -> bool:
        return not chain

    def lift(self, vec: Mapping[int, object], t: int) -> LinComb:
        basis = self.total_basis(t)
        return LinComb((basis[k], c) for k, c in vec.items())

    def differential_matrix(self, t: int) -> SparseMatrix:
        if t not in self._dmat:
            src = self.total_basis(t)
            tgt = self.total_basis(t + 1)
            idx = self._total_index[t + 1]
            cols = []
            for w in src:
                img = self.d(LinComb.single(w))
                cols.append({idx[k]: v for k, v in img.items()})
            self._dmat[t] = SparseMatrix(len(tgt), len(src), cols)
        return self._dmat[t]

    def internal_matrix(self, weight: int, internal: int) -> SparseMatrix:
        """Matrix of ``d_int`` from piece ``(weight, internal)`` to ``(weight, internal + 1)``."""
        src = self.piece_basis(weight, internal)
        tgt = self.piece_basis(weight, internal + 1)
        idx = {w: k for k, w in enumerate(tgt)}
        cols = []
        for w in src:
            img = self.d_internal(LinComb.single(w))
            cols.append({idx[k]: v for k, v in img.items()})
        return SparseMatrix(len(tgt), len(src), cols)

    def piece_coords(self, chain: Mapping, weight: int, internal: int) -> dict[int, Fraction]:
        idx = {w: k for k, w in enumerate(self.piece_basis(weight, internal))}
        return {idx[w]: Fraction(c) for w, c in chain.items()}

    def piece_lift(self, vec: Mapping[int, object], weight: int, internal: int) -> LinComb:
        basis = self.piece_basis(weight, internal)
        return LinComb((basis[k], c) for k, c in vec.items())

    # -- coalgebra and algebra structure ------------------------------------

    def coproduct(self, chain: Mapping) -> LinComb:
        return coproduct(chain)

    def shuffle(self, a: Word, b: Word) -> LinComb:
        return shuffle(a, b, self._eps)

    def pullback(self, chain: Mapping, phi: Morphism) -> LinComb:
        if phi.source is not self.model:
            raise ValueError(f"morphism {phi.name} does not start at model {self.model.name}")
        return pullback_words(chain, phi)

    # -- construction and printing ----------------------------------------------

    def word(self, *letters) -> LinComb:
        """Multilinear expansion of ``e1|e2|...`` for elements or basis names."""
        elems = []
        for a in letters:
            if isinstance(a, str):
                a = self.model.parse(a)
            elif isinstance(a, int):
                a = LinComb.single(a)
            elems.append(a)
        return expand_word(elems)

    def parse(self, text: str) -> LinComb:
        return parse_bar(self.model, text)

    def format_word(self, word: Word) -> str:
        return "|".join(self.model.names[i] for i in word)

    def format(self, chain: Mapping) -> str:
        return format_lincomb(chain, self.format_word, sort_key=word_weight_key)


# -- word-level operations --------------------------------------------------------


def expand_word(elems: Sequence[Mapping[int, object]]) -> LinComb:
    out = LinComb({(): 1})
    for e in elems:
        nxt = LinComb()
        for w, c in out.items():
            for i, v in e.items():
                nxt.add_term(w + (i,), c * v)
        out = nxt
    return out


def coproduct(chain: Mapping) -> LinComb:
    """Reduced deconcatenation; keys of the result are pairs of words."""
    out = LinComb()
    for w, c in chain.items():
        for i in range(1, len(w)):
            out.add_term((w[:i], w[i:]), c)
    return out


def shuffle(a: Word, b: Word, eps: Sequence[int]) -> LinComb:
    """Signed shuffle product of two words (Koszul signs on desuspended degrees)."""
    return LinComb(_shuffle(tuple(a), tuple(b), tuple(eps)))


@lru_cache(maxsize=None)
def _shuffle(a: Word, b: Word, eps: tuple) -> tuple:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    out = LinComb()
    for w, c in _shuffle(a[1:], b, eps):
        out.add_term((a[0],) + w, c)
    rest_a = sum(eps[i] for i in a)
    sign = -1 if (eps[b[0]] * rest_a) % 2 else 1
    for w, c in _shuffle(a, b[1:], eps):
        out.add_term((b[0],) + w, sign * c)
    return tuple(out.items())


def pullback_words(chain: Mapping, phi: Morphism) -> LinComb:
    out = LinComb()
    for w, c in chain.items():
        out.add_scaled(expand_word([phi.images[i] for i in w]), c)
    return out


def tensor_format(cx, tensor: Mapping) -> str:
    def fmt(key):
        return f"({cx.format(LinComb.single(key[0]))}) ⊗ ({cx.format(LinComb.single(key[1]))})"

    return format_lincomb(tensor, fmt, sort_key=lambda k: (len(k[0]) + len(k[1]), k))


# -- parsing -----------------------------------------------------------------------


def parse_bar(model: Model, text: str) -> LinComb:
    """Parse ``3/2*x|y - (a + b)|c + w`` into a bar chain over ``model``."""
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
                s.fail("a nonzero constant is not a bar chain")
            continue
        slots = [p.product()]
        while s.accept("|"):
            slots.append(p.product())
        total.add_scaled(expand_word(slots), sgn * (c if c is not None else 1))
    s.expect_end()
    return total


def random_words(model: Model, rng, count: int, max_weight: int = 4, max_letter_degree: int | None = None) -> list[Word]:
    letters = [i for i in range(model.dim) if max_letter_degree is None or model.degrees[i] <= max_letter_degree]
    out = []
    for _ in range(count):
        k = rng.randint(1, max_weight)
        out.append(tuple(rng.choice(letters) for _ in range(k)))
    return out


def bar_complex(model: Model, cap: int | None = None) -> BarComplex:
    return BarComplex(model, cap)


__all__ = [
    "BarComplex",
    "bar_complex",
    "coproduct",
    "shuffle",
    "expand_word",
    "pullback_words",
    "parse_bar",
    "tensor_format",
]
