"""Finite commutative differential graded algebra models and their morphisms.

A :class:`Model` is stored uniformly as a finite graded basis of positive
degree elements together with a multiplication table and a differential.
Free models (graded-commutative polynomial algebras on generators) are
expanded into their monomial basis up to a truncation degree; everything
above the truncation is discarded, which is again a CDGA quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .lincomb import LinComb, koszul_sign
from .parse import ParseError, parse_element

__all__ = [
    "Model",
    "Morphism",
    "Report",
    "UnsupportedModel",
    "koszul_sign",
    "free_model",
    "table_model",
    "sphere_model",
    "sphere_cohomology_model",
    "wedge_model",
    "validate_model",
    "validate_morphism",
]


class UnsupportedModel(ValueError):
    """Raised for inputs outside the simply connected setting."""


Element = LinComb


@dataclass
class Report:
    valid: bool
    violations: list[str] = field(default_factory=list)
    one_connected: bool | None = None

    def summary(self) -> str:
        if not self.valid:
            return "invalid: " + "; ".join(self.violations)
        if self.one_connected is None:
            return "valid"
        return "valid, one-connected" if self.one_connected else "valid, not one-connected"


class Model:
    """A finite CDGA with basis ``names``/``degrees`` (unit left implicit)."""

    def __init__(
        self,
        name: str,
        names: Iterable[str],
        degrees: Iterable[int],
        mul: Mapping[tuple[int, int], Mapping[int, object]],
        diff: Mapping[int, Mapping[int, object]],
        *,
        kind: str = "table",
        truncation: int | None = None,
        generators: Iterable[tuple[str, int]] = (),
        gen_diff: Mapping[str, str] | None = None,
        monomials: Iterable[tuple[int, ...]] = (),
        fundamental: str | None = None,
        bar_only: bool = False,
    ):
        self.name = name
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        self.kind = kind
        self.truncation = truncation
        self.generators = tuple(generators)
        self.gen_diff = dict(gen_diff or {})
        self.monomials = tuple(monomials)
        self.fundamental = fundamental
        self.bar_only = bar_only
        self.aliases: dict[str, LinComb] = {}
        self.relations: tuple[str, ...] = ()
        self._index = {n: i for i, n in enumerate(self.names)}
        self._mul = {k: LinComb(v) for k, v in mul.items() if v}
        self._mul = {k: v for k, v in self._mul.items() if v}
        self._diff = {i: LinComb(v) for i, v in diff.items()}
        self._diff = {i: v for i, v in self._diff.items() if v}

    def __repr__(self):
        return f"Model({self.name!r}, kind={self.kind}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.names)

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def eps(self, i: int) -> int:
        """Degree after desuspension."""
        return self.degrees[i] - 1

    @cached_property
    def one_connected(self) -> bool:
        return all(d >= 2 for d in self.degrees)

    @cached_property
    def min_degree(self) -> int:
        return min(self.degrees, default=2)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a basis element of model {self.name!r}") from None

    def basis_element(self, name_or_index) -> Element:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return LinComb.single(i)

    def by_degree(self, deg: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == deg]

    # -- algebra operations -------------------------------------------------

    def mul_basis(self, i: int, j: int) -> Element:
        return self._mul.get((i, j), _EMPTY)

    def d_basis(self, i: int) -> Element:
        return self._diff.get(i, _EMPTY)

    def multiply(self, a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> Element:
        out = LinComb()
        for i, ca in a.items():
            for j, cb in b.items():
                prod = self._mul.get((i, j))
                if prod:
                    out.add_scaled(prod, ca * cb)
        return out

    def d(self, a: Mapping[int, Fraction]) -> Element:
        out = LinComb()
        for i, c in a.items():
            di = self._diff.get(i)
            if di:
                out.add_scaled(di, c)
        return out

    def homogeneous_degree(self, a: Mapping[int, Fraction]) -> int | None:
        degs = {self.degrees[i] for i in a}
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- parsing / printing -------------------------------------------------

    def atom(self, name: str) -> Element:
        if name in self.aliases:
            return self.aliases[name].copy()
        if self.kind == "free":
            for k, (g, _) in enumerate(self.generators):
                if g == name:
                    exps = tuple(1 if j == k else 0 for j in range(len(self.generators)))
                    idx = self._monomial_index.get(exps)
                    return LinComb.single(idx) if idx is not None else LinComb()
            raise ParseError(f"unknown generator {name!r} of model {self.name!r}")
        if name not in self._index:
            raise ParseError(f"unknown basis element {name!r} of model {self.name!r}")
        return LinComb.single(self._index[name])

    def parse(self, text: str) -> Element:
        return parse_element(text, self.atom, self.multiply)

    def format(self, a: Mapping[int, Fraction]) -> str:
        return format_lincomb(a, lambda i: self.names[i])

    @cached_property
    def _monomial_index(self) -> dict[tuple[int, ...], int]:
        return {m: i for i, m in enumerate(self.monomials)}

    def monomial_exponents(self, i: int) -> tuple[int, ...]:
        if self.kind != "free":
            raise UnsupportedModel(f"model {self.name!r} is not a free model")
        return self.monomials[i]

    def monomial_index(self, exps: tuple[int, ...]) -> int | None:
        return self._monomial_index.get(tuple(exps))

    def truncated(self, n: int) -> "Model":
        """Rebuild a free model with truncation degree ``n``."""
        if self.kind != "free":
            return self
        return free_model(self.name, self.generators, self.gen_diff, n, fundamental=self.fundamental,
                          relations=self.relations)


_EMPTY = LinComb()


def format_lincomb(a: Mapping, fmt_key, sep_mul: str = "*", sort_key=None) -> str:
    from .lincomb import fmt_rational

    if not a:
        return "0"
    parts = []
    order = sort_key or (lambda k: k)
    for key, c in sorted(a.items(), key=lambda kv: order(kv[0])):
        s = fmt_key(key)
        if c == 1:
            term = s
        elif c == -1:
            term = "-" + s
        else:
            term = f"{fmt_rational(c)}{sep_mul}{s}"
        parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# -- free models --------------------------------------------------------------


def _enumerate_monomials(degs: list[int], top: int) -> list[tuple[int, ...]]:
    found = []

    def rec(k, exps, deg):
        if k == len(degs):
            if deg > 0:
                found.append(tuple(exps))
            return
        emax = 1 if degs[k] % 2 else (top - deg) // degs[k]
        for e in range(emax + 1):
            if deg + e * degs[k] > top:
                break
            rec(k + 1, exps + [e], deg + e * degs[k])

    rec(0, [], 0)
    found.sort(key=lambda m: (sum(e * d for e, d in zip(m, degs)), tuple(-e for e in m)))
    return found


def _monomial_product(a, b, degs) -> tuple[int, tuple[int, ...] | None]:
    """Product of canonical monomials as ``(sign, monomial)``; monomial None if zero."""
    exps = []
    for k, (ea, eb) in enumerate(zip(a, b)):
        if degs[k] % 2 and ea and eb:
            return 0, None
        exps.append(ea + eb)
    # move odd letters of b leftwards past odd letters of a that come later
    odd_swaps = 0
    for i, eb in enumerate(b):
        if eb and degs[i] % 2:
            for j in range(i + 1, len(a)):
                if a[j] and degs[j] % 2:
                    odd_swaps += 1
    return (-1 if odd_swaps % 2 else 1), tuple(exps)


def _monomial_name(m, gens) -> str:
    parts = []
    for e, (g, _) in zip(m, gens):
        if e == 1:
            parts.append(g)
        elif e > 1:
            parts.append(f"{g}^{e}")
    return "*".join(parts)


def free_model(
    name: str,
    generators: Iterable[tuple[str, int]],
    differential: Mapping[str, object] | None = None,
    truncation: int | None = None,
    *,
    fundamental: str | None = None,
    relations: Iterable[str] = (),
) -> Model:
    """Graded-commutative free model truncated at ``truncation``.

    ``differential`` maps generator names to polynomials, written either as
    strings (``"x^2"``) or as :class:`LinComb` over the monomial basis.
    ``relations`` lists monomials (``"B*C"``) whose multiples are set to zero;
    their differentials must lie in the ideal they generate.
    """
    gens = [(str(g), int(d)) for g, d in generators]
    seen = set()
    for g, d in gens:
        if g in seen:
            raise ValueError(f"duplicate generator {g!r}")
        seen.add(g)
        if d < 1:
            raise ValueError(f"generator {g!r} has degree {d} < 1")
    degs = [d for _, d in gens]
    if truncation is None:
        truncation = 2 * max(degs, default=1) + 2
    monos = _enumerate_monomials(degs, truncation)
    index = {m: i for i, m in enumerate(monos)}
    names = [_monomial_name(m, gens) for m in monos]
    mdeg = [sum(e * d for e, d in zip(m, degs)) for m in monos]

    mul = {}
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            if mdeg[i] + mdeg[j] > truncation:
                continue
            sign, m = _monomial_product(a, b, degs)
            if m is not None:
                mul[(i, j)] = {index[m]: sign}

    bare = Model(name, names, mdeg, mul, {}, kind="free", truncation=truncation,
                 generators=gens, monomials=monos)
    gen_diff_text = {}
    dgen: dict[int, LinComb] = {}
    for g, poly in (differential or {}).items():
        k = next((k for k, (h, _) in enumerate(gens) if h == g), None)
        if k is None:
            raise ValueError(f"differential given for unknown generator {g!r}")
        if isinstance(poly, str):
            gen_diff_text[g] = poly
            value = bare.parse(poly) if poly.strip() else LinComb()
        else:
            value = LinComb(poly)
            gen_diff_text[g] = bare.format(value)
        dgen[k] = value

    diff: dict[int, LinComb] = {}
    for i, m in enumerate(monos):
        # m = g_k * rest with g_k the first generator present (no sign)
        k = next(k for k, e in enumerate(m) if e)
        rest = tuple(e - 1 if j == k else e for j, e in enumerate(m))
        gk = LinComb.single(index[tuple(1 if j == k else 0 for j in range(len(m)))])
        dg = dgen.get(k, LinComb())
        if not any(rest):
            value = dg.copy()
        else:
            rest_el = LinComb.single(index[rest])
            value = bare.multiply(dg, rest_el)
            value.add_scaled(bare.multiply(gk, diff[index[rest]]), (-1) ** degs[k])
        # drop anything above the truncation (already absent from the basis)
        diff[i] = value
    relations = [str(r) for r in relations]
    if relations:
        return _monomial_quotient(name, names, mdeg, mul, diff, bare, relations, truncation,
                                  gens, gen_diff_text, monos, fundamental)
    return Model(name, names, mdeg, mul, diff, kind="free", truncation=truncation,
                 generators=gens, gen_diff=gen_diff_text, monomials=monos,
                 fundamental=fundamental)


def _monomial_quotient(name, names, mdeg, mul, diff, bare, relations, truncation,
                       gens, gen_diff_text, monos, fundamental) -> Model:
    ideal_gens = []
    for r in relations:
        el = bare.parse(r)
        if len(el) != 1:
            raise ValueError(f"relation {r!r} is not a single monomial")
        ideal_gens.append(monos[next(iter(el))])

    def in_ideal(m):
        return any(all(a >= b for a, b in zip(m, g)) for g in ideal_gens)

    keep = [i for i, m in enumerate(monos) if not in_ideal(m)]
    pos = {i: k for k, i in enumerate(keep)}
    for g in ideal_gens:
        i = monos.index(g)
        stray = [j for j in diff.get(i, {}) if j in pos]
        if stray:
            raise ValueError(f"relation {names[i]} is not closed under the differential")

    def proj(el):
        return {pos[j]: v for j, v in el.items() if j in pos}

    new_mul = {}
    for (i, j), v in mul.items():
        if i in pos and j in pos:
            pv = proj(v)
            if pv:
                new_mul[(pos[i], pos[j])] = pv
    new_diff = {pos[i]: proj(v) for i, v in diff.items() if i in pos}
    m = Model(name, [names[i] for i in keep], [mdeg[i] for i in keep], new_mul, new_diff,
              kind="free", truncation=truncation, generators=gens, gen_diff=gen_diff_text,
              monomials=[monos[i] for i in keep], fundamental=fundamental)
    m.relations = tuple(relations)
    return m


# -- table models ---------------------------------------------------------------


def table_model(
    name: str,
    basis: Iterable[tuple[str, int]],
    products: Mapping[tuple[str, str], object] | None = None,
    differential: Mapping[str, object] | None = None,
    *,
    fundamental: str | None = None,
    bar_only: bool = False,
    aliases: Mapping[str, object] | None = None,
) -> Model:
    """Model given by explicit structure constants.

    Products omitted for a pair default to zero, except that a product given
    for ``(a, b)`` only also determines ``(b, a)`` by graded commutativity.
    ``aliases`` name linear combinations usable in expressions, such as
    ``a31 = -a13``.
    """
    basis = [(str(n), int(d)) for n, d in basis]
    names = [n for n, _ in basis]
    degrees = [d for _, d in basis]
    if len(set(names)) != len(names):
        raise ValueError("basis names are not unique")
    index = {n: i for i, n in enumerate(names)}

    def linear(text_or_comb) -> LinComb:
        if not isinstance(text_or_comb, str):
            return LinComb({index[k] if isinstance(k, str) else k: v for k, v in dict(text_or_comb).items()})

        def atom(nm):
            if nm not in index:
                raise ParseError(f"unknown basis element {nm!r}")
            return LinComb.single(index[nm])

        def no_mul(a, b):
            raise ParseError("products are not allowed here; give a linear combination of basis elements")

        return parse_element(text_or_comb, atom, no_mul)

    mul: dict[tuple[int, int], LinComb] = {}
    given = set()
    for (a, b), rhs in (products or {}).items():
        i, j = index[a], index[b]
        mul[(i, j)] = linear(rhs)
        given.add((i, j))
    for (i, j) in list(given):
        if (j, i) not in given:
            mul[(j, i)] = mul[(i, j)].scale((-1) ** (degrees[i] * degrees[j]))
    diff = {index[a]: linear(rhs) for a, rhs in (differential or {}).items()}
    alias_map = {}
    for a, rhs in (aliases or {}).items():
        if a in index:
            raise ValueError(f"alias {a!r} clashes with a basis element")
        alias_map[a] = linear(rhs)
    m = Model(name, names, degrees, mul, diff, kind="table", fundamental=fundamental,
              bar_only=bar_only or any(d < 2 for d in degrees))
    m.aliases = alias_map
    return m


# -- standard models ------------------------------------------------------------


def sphere_model(n: int, truncation: int | None = None) -> Model:
    """Minimal free model of the n-sphere: ``Λ(w)`` (odd) or ``Λ(w, w'; dw' = w^2)`` (even)."""
    if n < 2:
        raise UnsupportedModel(f"S^{n} is not simply connected; spheres of dimension >= 2 only")
    top = max(truncation or 0, 2 * n)
    if n % 2:
        return free_model(f"S{n}", [("w", n)], {}, top, fundamental="w")
    return free_model(f"S{n}", [("w", n), ("w'", 2 * n - 1)], {"w'": "w^2"}, top, fundamental="w")


def sphere_cohomology_model(n: int) -> Model:
    """The cohomology algebra of the n-sphere (``w^2 = 0``), a formal model."""
    if n < 2:
        raise UnsupportedModel(f"S^{n} is not simply connected; spheres of dimension >= 2 only")
    return table_model(f"HS{n}", [("w", n)], fundamental="w")


def _default_names(k: int) -> list[str]:
    if k <= 3:
        return ["x", "y", "z"][:k]
    return [f"x{i + 1}" for i in range(k)]


def wedge_model(degrees: Iterable[int], names: Iterable[str] | None = None) -> Model:
    """Cohomology of a wedge of spheres: trivial products and differential."""
    degrees = [int(d) for d in degrees]
    for d in degrees:
        if d < 2:
            raise UnsupportedModel(f"wedge summand of dimension {d} is not simply connected")
    names = list(names) if names is not None else _default_names(len(degrees))
    label = "wedge(" + ",".join(map(str, degrees)) + ")"
    return table_model(label, list(zip(names, degrees)))


# -- validation -----------------------------------------------------------------


def validate_model(m: Model, max_violations: int = 20) -> Report:
    bad: list[str] = []

    def flag(msg):
        if len(bad) < max_violations:
            bad.append(msg)

    if len(set(m.names)) != len(m.names):
        flag("basis names are not unique")
    for i, deg in enumerate(m.degrees):
        if deg < 1:
            flag(f"{m.names[i]} has degree {deg} < 1")
    for i in range(m.dim):
        for j in m.d_basis(i):
            if m.degrees[j] != m.degrees[i] + 1:
                flag(f"d({m.names[i]}) has a term {m.names[j]} of degree {m.degrees[j]}, expected {m.degrees[i] + 1}")
        dd = m.d(m.d_basis(i))
        if dd:
            flag(f"d^2 != 0 on {m.names[i]}: d(d({m.names[i]})) = {m.format(dd)}")
    top = m.truncation
    for i in range(m.dim):
        for j in range(m.dim):
            ab = m.mul_basis(i, j)
            for k in ab:
                if m.degrees[k] != m.degrees[i] + m.degrees[j]:
                    flag(f"{m.names[i]}*{m.names[j]} has a term of wrong degree")
            ba = m.mul_basis(j, i)
            if ab != ba.scale((-1) ** (m.degrees[i] * m.degrees[j])):
                flag(f"graded commutativity fails for {m.names[i]}, {m.names[j]}")
            if top is not None and m.degrees[i] + m.degrees[j] + 1 > top:
                continue
            lhs = m.d(ab)
            rhs = m.multiply(m.d_basis(i), LinComb.single(j))
            rhs.add_scaled(m.multiply(LinComb.single(i), m.d_basis(j)), (-1) ** m.degrees[i])
            if lhs != rhs:
                flag(f"Leibniz rule fails for {m.names[i]}, {m.names[j]}")
    for i in range(m.dim):
        for j in range(m.dim):
            ij = m.mul_basis(i, j)
            for k in range(m.dim):
                if top is not None and m.degrees[i] + m.degrees[j] + m.degrees[k] > top:
                    continue
                left = m.multiply(ij, LinComb.single(k))
                right = m.multiply(LinComb.single(i), m.mul_basis(j, k))
                if left != right:
                    flag(f"associativity fails for {m.names[i]}, {m.names[j]}, {m.names[k]}")
    return Report(not bad, bad, m.one_connected)


# -- morphisms --------------------------------------------------------------------


class Morphism:
    """A CDGA map ``source -> target`` given by images of all source basis elements."""

    def __init__(self, name: str, source: Model, target: Model, images: Mapping[int, Mapping[int, object]]):
        self.name = name
        self.source = source
        self.target = target
        self.images = {i: LinComb(images.get(i, {})) for i in range(source.dim)}

    def __repr__(self):
        return f"Morphism({self.name!r}: {self.source.name} -> {self.target.name})"

    @classmethod
    def from_generators(cls, name: str, source: Model, target: Model, gen_images: Mapping[str, object]) -> "Morphism":
        """Build from images of generators (free source) or basis symbols (table source).

        Unlisted generators are sent to zero.
        """
        def to_el(v):
            return target.parse(v) if isinstance(v, str) else LinComb(v)

        if source.kind == "table":
            for k in gen_images:
                source.index(k)
            images = {source.index(k): to_el(v) for k, v in gen_images.items()}
            return cls(name, source, target, images)
        gnames = [g for g, _ in source.generators]
        for k in gen_images:
            if k not in gnames:
                raise KeyError(f"{k!r} is not a generator of {source.name!r}")
        gimg = [to_el(gen_images[g]) if g in gen_images else LinComb() for g in gnames]
        images = {}
        for i, m in enumerate(source.monomials):
            val = None
            for k, e in enumerate(m):
                for _ in range(e):
                    val = gimg[k] if val is None else target.multiply(val, gimg[k])
            images[i] = val
        return cls(name, source, target, images)

    def apply(self, a: Mapping[int, Fraction]) -> Element:
        out = LinComb()
        for i, c in a.items():
            out.add_scaled(self.images[i], c)
        return out

    def then(self, other: "Morphism", name: str | None = None) -> "Morphism":
        """Composite ``other ∘ self``."""
        if other.source is not self.target:
            raise ValueError("morphisms are not composable")
        images = {i: other.apply(v) for i, v in self.images.items()}
        return Morphism(name or f"{other.name}.{self.name}", self.source, other.target, images)


def validate_morphism(phi: Morphism, max_violations: int = 20) -> Report:
    src, tgt = phi.source, phi.target
    bad: list[str] = []

    def flag(msg):
        if len(bad) < max_violations:
            bad.append(msg)

    top = src.truncation
    for i in range(src.dim):
        img = phi.images[i]
        for j in img:
            if tgt.degrees[j] != src.degrees[i]:
                flag(f"{src.names[i]} (degree {src.degrees[i]}) maps to {tgt.names[j]} of degree {tgt.degrees[j]}")
                break
        if top is not None and src.degrees[i] + 1 > top:
            continue
        if phi.apply(src.d_basis(i)) != tgt.d(img):
            flag(f"does not commute with d on {src.names[i]}")
    for i in range(src.dim):
        for j in range(src.dim):
            if top is not None and src.degrees[i] + src.degrees[j] > top:
                continue
            if phi.apply(src.mul_basis(i, j)) != tgt.multiply(phi.images[i], phi.images[j]):
                flag(f"not multiplicative on {src.names[i]}*{src.names[j]}")
    return Report(not bad, bad, None)
