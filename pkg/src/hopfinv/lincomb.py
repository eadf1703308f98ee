"""Sparse exact linear combinations and graded sign helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Sequence


class LinComb(dict):
    """A finitely supported ``key -> Fraction`` map with no zero entries.

    Used for model elements (keys are basis indices), bar chains (keys are
    words) and graph chains (keys are trees).  Arithmetic returns new objects.
    """

    __slots__ = ()

    def __init__(self, terms: Iterable[tuple[Hashable, object]] | dict | None = None):
        super().__init__()
        if terms is None:
            return
        items = terms.items() if isinstance(terms, dict) else terms
        for key, c in items:
            self.add_term(key, c)

    @classmethod
    def single(cls, key, c=1) -> "LinComb":
        return cls([(key, c)])

    def add_term(self, key, c) -> None:
        if not c:
            return
        v = self.get(key, 0) + Fraction(c)
        if v:
            self[key] = v
        else:
            self.pop(key, None)

    def add_scaled(self, other: dict, c=1) -> "LinComb":
        """In-place ``self += c * other``; returns self."""
        if not c:
            return self
        c = Fraction(c)
        for key, v in other.items():
            self.add_term(key, c * v)
        return self

    def copy(self) -> "LinComb":
        out = LinComb()
        dict.update(out, self)
        return out

    def scale(self, c) -> "LinComb":
        c = Fraction(c)
        if not c:
            return LinComb()
        out = LinComb()
        for key, v in self.items():
            dict.__setitem__(out, key, v * c)
        return out

    def __add__(self, other):
        return self.copy().add_scaled(other)

    def __sub__(self, other):
        return self.copy().add_scaled(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return len(self) == 0
        return dict.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None  # mutable

    def filter(self, pred) -> "LinComb":
        out = LinComb()
        for key, v in self.items():
            if pred(key):
                dict.__setitem__(out, key, v)
        return out

    def sorted_items(self):
        return sorted(self.items(), key=lambda kv: _sort_key(kv[0]))


def _sort_key(key):
    return repr(key) if not isinstance(key, (int, tuple)) else (0, key)


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of reordering homogeneous elements.

    ``permutation[k]`` is the original position of the element that ends up
    in slot ``k``; ``degrees[i]`` is the degree of the element originally at
    position ``i``.  Every pair whose relative order is reversed contributes
    ``(-1)^(deg_a * deg_b)``.
    """
    if len(permutation) != len(degrees):
        raise ValueError(
            f"permutation has length {len(permutation)} but {len(degrees)} degrees were given"
        )
    if sorted(permutation) != list(range(len(permutation))):
        raise ValueError(f"not a permutation: {list(permutation)}")
    odd = [p for p in permutation if degrees[p] % 2]
    inversions = 0
    for i in range(len(odd)):
        oi = odd[i]
        for j in range(i + 1, len(odd)):
            if odd[j] < oi:
                inversions += 1
    return -1 if inversions % 2 else 1


def fmt_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
