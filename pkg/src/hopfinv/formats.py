"""Line-oriented text files describing models and morphisms.

A file holds any number of blocks.  A model block::

    model hopf
    kind free
    truncate 10
    generator x degree 2
    generator y degree 3
    d y = x^2

A table model lists ``basis <name> degree <d>`` and ``product <a> <b> = <expr>``
lines instead (omitted products are zero).  Optional lines: ``fundamental
<name>``, ``relation <monomial>`` (free models), ``alias <name> = <expr>``
(table models).  A morphism block::

    morphism h from hopf to sphere(3)
    y -> w

Model references are names of earlier blocks or builtins ``sphere(n)``,
``hsphere(n)`` and ``wedge(d1,...,dk)``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import (
    Model,
    Morphism,
    UnsupportedModel,
    free_model,
    sphere_cohomology_model,
    sphere_model,
    table_model,
    wedge_model,
)
from .parse import ParseError

_BUILTIN = re.compile(r"^(sphere|hsphere|wedge)\(\s*([0-9,\s]*)\)$")


def builtin_model(text: str) -> Model | None:
    """Resolve ``sphere(n)``, ``hsphere(n)`` or ``wedge(...)``; ``None`` otherwise."""
    m = _BUILTIN.match(text.strip())
    if not m:
        return None
    kind, args = m.group(1), [a for a in m.group(2).replace(" ", "").split(",") if a]
    nums = [int(a) for a in args]
    if kind == "wedge":
        return wedge_model(nums)
    if len(nums) != 1:
        raise ParseError(f"{kind} takes one dimension")
    return sphere_model(nums[0]) if kind == "sphere" else sphere_cohomology_model(nums[0])


@dataclass
class Document:
    models: dict[str, Model] = field(default_factory=dict)
    morphisms: dict[str, Morphism] = field(default_factory=dict)

    def model(self, name: str | None = None) -> Model:
        if name is None:
            if not self.models:
                raise ParseError("no model given")
            return next(iter(self.models.values()))
        if name in self.models:
            return self.models[name]
        m = builtin_model(name)
        if m is None:
            raise ParseError(f"unknown model {name!r}")
        self.models[name] = m
        return m

    def morphism(self, name: str | None = None) -> Morphism:
        if name is None:
            if not self.morphisms:
                raise ParseError("no morphism given")
            return next(iter(self.morphisms.values()))
        if name not in self.morphisms:
            raise ParseError(f"unknown morphism {name!r}")
        return self.morphisms[name]

    def merge(self, other: "Document") -> None:
        self.models.update(other.models)
        self.morphisms.update(other.morphisms)


@dataclass
class _ModelBlock:
    name: str
    line: int
    kind: str | None = None
    truncate: int | None = None
    entries: list = field(default_factory=list)  # (name, degree, line)
    diffs: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)
    aliases: dict = field(default_factory=dict)
    fundamental: str | None = None


@dataclass
class _MorphismBlock:
    name: str
    source: str
    target: str
    line: int
    images: dict = field(default_factory=dict)


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_RE = {
    "model": re.compile(rf"^model\s+({_NAME})$"),
    "kind": re.compile(r"^kind\s+(free|table)$"),
    "truncate": re.compile(r"^truncate\s+(\d+)$"),
    "generator": re.compile(rf"^(generator|basis)\s+({_NAME})\s+degree\s+(-?\d+)$"),
    "d": re.compile(rf"^d\s+({_NAME})\s*=\s*(.+)$"),
    "product": re.compile(rf"^product\s+({_NAME})\s+({_NAME})\s*=\s*(.+)$"),
    "fundamental": re.compile(rf"^fundamental\s+({_NAME})$"),
    "relation": re.compile(r"^relation\s+(.+)$"),
    "alias": re.compile(rf"^alias\s+({_NAME})\s*=\s*(.+)$"),
    "morphism": re.compile(rf"^morphism\s+({_NAME})\s+from\s+(\S+)\s+to\s+(\S+)$"),
    "image": re.compile(rf"^({_NAME})\s*->\s*(.+)$"),
}


def parse_document(text: str, base: Document | None = None) -> Document:
    """Parse model and morphism blocks; errors carry the offending line number."""
    doc = Document()
    if base is not None:
        doc.merge(base)
    block = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if m := _RE["model"].match(line):
                _finish(doc, block)
                block = _ModelBlock(m.group(1), lineno)
            elif m := _RE["morphism"].match(line):
                _finish(doc, block)
                block = _MorphismBlock(m.group(1), m.group(2), m.group(3), lineno)
            elif block is None:
                raise ParseError("expected 'model <name>' or 'morphism <name> from <a> to <b>'")
            elif isinstance(block, _MorphismBlock):
                m = _RE["image"].match(line)
                if not m:
                    raise ParseError("expected '<symbol> -> <expression>'")
                block.images[m.group(1)] = (m.group(2).strip(), lineno)
            else:
                _model_line(block, line, lineno)
        except ParseError as exc:
            if exc.line is not None:
                raise
            raise ParseError(str(exc), lineno) from None
    _finish(doc, block)
    return doc


def _model_line(block: _ModelBlock, line: str, lineno: int) -> None:
    if m := _RE["kind"].match(line):
        block.kind = m.group(1)
    elif m := _RE["truncate"].match(line):
        block.truncate = int(m.group(1))
    elif m := _RE["generator"].match(line):
        block.entries.append((m.group(2), int(m.group(3)), lineno, m.group(1)))
    elif m := _RE["d"].match(line):
        block.diffs[m.group(1)] = (m.group(2).strip(), lineno)
    elif m := _RE["product"].match(line):
        block.products[(m.group(1), m.group(2))] = (m.group(3).strip(), lineno)
    elif m := _RE["fundamental"].match(line):
        block.fundamental = m.group(1)
    elif m := _RE["relation"].match(line):
        block.relations.append((m.group(1).strip(), lineno))
    elif m := _RE["alias"].match(line):
        block.aliases[m.group(1)] = (m.group(2).strip(), lineno)
    else:
        raise ParseError(f"cannot read {line!r}")


def _finish(doc: Document, block) -> None:
    if block is None:
        return
    if isinstance(block, _MorphismBlock):
        doc.morphisms[block.name] = _build_morphism(doc, block)
    else:
        doc.models[block.name] = _build_model(block)


def _at(line: int, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ParseError as exc:
        raise ParseError(str(exc), line) from None
    except UnsupportedModel:
        raise
    except (KeyError, ValueError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        raise ParseError(str(msg), line) from None


def _build_model(b: _ModelBlock) -> Model:
    kind = b.kind or ("free" if any(e[3] == "generator" for e in b.entries) else "table")
    for name, deg, line, word in b.entries:
        expected = "generator" if kind == "free" else "basis"
        if word != expected:
            raise ParseError(f"use '{expected}' lines in a {kind} model", line)
        if deg < 1:
            raise ParseError(f"degree of {name!r} must be positive", line)
    pairs = [(n, d) for n, d, _, _ in b.entries]
    if kind == "free":
        if b.products:
            raise ParseError("product lines belong to table models", next(iter(b.products.values()))[1])
        if b.aliases:
            raise ParseError("alias lines belong to table models", next(iter(b.aliases.values()))[1])
        bare = _at(b.line, free_model, b.name, pairs, {}, b.truncate)
        for g, (expr, line) in b.diffs.items():
            if g not in {n for n, _ in pairs}:
                raise ParseError(f"unknown generator {g!r}", line)
            _at(line, bare.parse, expr)
        for expr, line in b.relations:
            _at(line, bare.parse, expr)
        diffs = {g: e for g, (e, _) in b.diffs.items()}
        model = _at(b.line, free_model, b.name, pairs, diffs, b.truncate,
                    fundamental=b.fundamental, relations=[r for r, _ in b.relations])
    else:
        if b.relations:
            raise ParseError("relation lines belong to free models", b.relations[0][1])
        names = {n for n, _ in pairs}
        for (x, y), (expr, line) in b.products.items():
            for s in (x, y):
                if s not in names:
                    raise ParseError(f"unknown basis element {s!r}", line)
            _at(line, table_model, b.name, pairs, {(x, y): expr})
        for g, (expr, line) in b.diffs.items():
            if g not in names:
                raise ParseError(f"unknown basis element {g!r}", line)
            _at(line, table_model, b.name, pairs, None, {g: expr})
        for a, (expr, line) in b.aliases.items():
            _at(line, table_model, b.name, pairs, aliases={a: expr})
        model = _at(b.line, table_model, b.name, pairs,
                    {k: e for k, (e, _) in b.products.items()},
                    {k: e for k, (e, _) in b.diffs.items()},
                    fundamental=b.fundamental,
                    aliases={k: e for k, (e, _) in b.aliases.items()})
    if b.fundamental is not None and b.fundamental not in model.names:
        raise ParseError(f"fundamental class {b.fundamental!r} is not a basis element", b.line)
    return model


def _build_morphism(doc: Document, b: _MorphismBlock) -> Morphism:
    source = _at(b.line, doc.model, b.source)
    target = _at(b.line, doc.model, b.target)
    allowed = {g for g, _ in source.generators} if source.kind == "free" else set(source.names)
    images = {}
    for sym, (expr, line) in b.images.items():
        if sym not in allowed:
            raise ParseError(f"{sym!r} is not a generator of {source.name}", line)
        images[sym] = _at(line, target.parse, expr)
    return Morphism.from_generators(b.name, source, target, images)


def format_model(m: Model) -> str:
    """Text form of a model, readable by :func:`parse_document`."""
    lines = [f"model {m.name}", f"kind {m.kind}"]
    if m.kind == "free":
        lines.append(f"truncate {m.truncation}")
        for g, d in m.generators:
            lines.append(f"generator {g} degree {d}")
        for g, _ in m.generators:
            if m.gen_diff.get(g):
                lines.append(f"d {g} = {m.gen_diff[g]}")
        for r in m.relations:
            lines.append(f"relation {r}")
    else:
        for n, d in zip(m.names, m.degrees):
            lines.append(f"basis {n} degree {d}")
        for i in range(m.dim):
            if m.d_basis(i):
                lines.append(f"d {m.names[i]} = {m.format(m.d_basis(i))}")
        for i in range(m.dim):
            for j in range(i, m.dim):
                p = m.mul_basis(i, j)
                if p:
                    lines.append(f"product {m.names[i]} {m.names[j]} = {m.format(p)}")
        for a, v in m.aliases.items():
            lines.append(f"alias {a} = {m.format(v)}")
    if m.fundamental:
        lines.append(f"fundamental {m.fundamental}")
    return "\n".join(lines) + "\n"
