"""Command line interface: ``hopfinv validate|homology|hopf|pair|reduce``.

Exit codes: 0 success, 1 mathematical precondition failure, 2 parse error,
3 piece larger than the dimension cap.
"""

from __future__ import annotations

import argparse
import os
import sys

from .chainalg import NotClosed, PieceTooLarge, homology_rank
from .formats import Document, builtin_model, parse_document
from .graphcx import InvalidTree
from .hopf import (
    Bracket,
    Leaf,
    complex_for,
    generator_leaf,
    hopf_pair,
    integrate,
    leaf,
    reduce_to_weight_one,
    sphere_dimension,
    whitehead_pair,
)
from .lincomb import fmt_rational
from .model import Model, UnsupportedModel, validate_model, validate_morphism
from .parse import ParseError, TokenStream

EXIT_OK, EXIT_MATH, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- input loading ------------------------------------------------------------------


def load(sources: list[str]) -> Document:
    doc = Document()
    for src in sources:
        m = builtin_model(src)
        if m is not None:
            doc.models[src] = m
            continue
        label = "<stdin>" if src == "-" else src
        try:
            text = sys.stdin.read() if src == "-" else open(src, encoding="utf-8").read()
        except OSError as exc:
            raise CommandError(f"{label}: {exc.strerror}", EXIT_PARSE) from None
        try:
            doc = parse_document(text, doc)
        except ParseError as exc:
            raise CommandError(f"{label}: {exc}", EXIT_PARSE) from None
    return doc


def parse_chain(cx, text: str):
    """Bar expression, or tree expression for graph complexes (bar input is mapped to paths)."""
    if cx.tag == "bar":
        return cx.parse(text)
    if "tree" in text:
        return cx.parse(text)
    return cx.phi(complex_for(cx.model, "bar").parse(text))


def parse_bracket(text: str, resolve):
    """Parse ``[f,[g,h]]``; ``resolve(name)`` turns names into leaves."""
    s = TokenStream(text)

    def item():
        if s.accept("["):
            left = item()
            s.expect(",")
            right = item()
            s.expect("]")
            return Bracket(left, right)
        return resolve(s.expect_name())

    b = item()
    s.expect_end()
    return b


def leaf_resolver(doc: Document, model: Model):
    def resolve(name: str) -> Leaf:
        if name in doc.morphisms:
            phi = doc.morphisms[name]
            if phi.source is not model:
                raise ParseError(f"morphism {name} does not start at model {model.name}")
            return leaf(name, phi)
        if name in model.names:
            return generator_leaf(model, name)
        raise ParseError(f"{name!r} is neither a morphism nor a basis element of {model.name}")

    return resolve


def adequate(model: Model, max_degree: int) -> Model:
    """Free models must be truncated at ``max_degree + 2`` to compute through ``max_degree``."""
    if model.kind == "free" and (model.truncation or 0) < max_degree + 2:
        return model.truncated(max_degree + 2)
    return model


# -- commands -----------------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = load(args.files)
    ok = True
    for name, m in doc.models.items():
        rep = validate_model(m)
        ok &= rep.valid
        print(f"model {name}: {rep.summary() if rep.valid else 'invalid'}")
        for v in rep.violations:
            print(f"  {v}")
    for name, phi in doc.morphisms.items():
        rep = validate_morphism(phi)
        ok &= rep.valid
        print(f"morphism {name}: {rep.summary() if rep.valid else 'invalid'}")
        for v in rep.violations:
            print(f"  {v}")
    return EXIT_OK if ok else EXIT_MATH


def _checked_model(doc: Document, name: str | None) -> Model:
    m = doc.model(name)
    rep = validate_model(m)
    if not rep.valid:
        raise CommandError(f"model {m.name} is invalid: {rep.violations[0]}", EXIT_MATH)
    return m


def cmd_homology(args) -> int:
    doc = load(args.files)
    m = adequate(_checked_model(doc, args.model), args.max_degree)
    cx = complex_for(m, args.complex)
    rows = [(t, homology_rank(cx, t)) for t in range(1, args.max_degree + 1)]
    print("degree\trank")
    for t, r in rows:
        print(f"{t}\t{r}")
    return EXIT_OK


def cmd_hopf(args) -> int:
    doc = load(args.files)
    m = _checked_model(doc, args.model)
    phi = doc.morphism(args.morphism)
    rep = validate_morphism(phi)
    if not rep.valid:
        raise CommandError(f"morphism {phi.name} is invalid: {rep.violations[0]}", EXIT_MATH)
    if phi.source is not m:
        raise CommandError(f"morphism {phi.name} does not start at model {m.name}", EXIT_MATH)
    cx = complex_for(m, args.complex)
    gamma = _parse(cx, args.cocycle)
    n = args.sphere if args.sphere is not None else sphere_dimension(phi.target)
    print(fmt_rational(hopf_pair(cx, gamma, phi, n)))
    return EXIT_OK


def cmd_pair(args) -> int:
    doc = load(args.files)
    m = _checked_model(doc, args.model)
    cx = complex_for(m, args.complex)
    gamma = _parse(cx, args.cocycle)
    try:
        b = parse_bracket(args.bracket, leaf_resolver(doc, m))
    except ParseError as exc:
        raise CommandError(f"bracket: {exc}", EXIT_PARSE) from None
    print(fmt_rational(whitehead_pair(cx, gamma, b)))
    return EXIT_OK


def cmd_reduce(args) -> int:
    doc = load(args.files)
    m = _checked_model(doc, args.model)
    cx = complex_for(m, args.complex)
    gamma = _parse(cx, args.cocycle)
    tau, beta = reduce_to_weight_one(cx, gamma)
    print(cx.format(tau))
    print(f"certificate: {cx.format(beta)}")
    if m.fundamental is not None:
        n = sphere_dimension(m)
        print(f"integral: {fmt_rational(integrate(cx, tau, n))}")
    return EXIT_OK


def _parse(cx, text: str):
    try:
        return parse_chain(cx, text)
    except (ParseError, InvalidTree) as exc:
        raise CommandError(f"cocycle: {exc}", EXIT_PARSE) from None


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfinv", description="Exact Hopf invariants of CDGA models.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, complex_default="bar"):
        sp.add_argument("files", nargs="+", help="model/morphism files, '-' for stdin, or sphere(n), hsphere(n), wedge(...)")
        sp.add_argument("--model", help="model name (default: the first model)")
        sp.add_argument("--complex", choices=["bar", "eil"], default=complex_default)
        sp.add_argument("--cap", type=int, help="maximum dimension of a graded piece")

    sp = sub.add_parser("validate", help="check models and morphisms")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("homology", help="ranks of the bar or graph-quotient homology")
    common(sp, "eil")
    sp.add_argument("--max-degree", type=int, required=True)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("hopf", help="Hopf pairing of a cocycle with a map from a sphere")
    common(sp)
    sp.add_argument("--morphism", help="morphism name (default: the first morphism)")
    sp.add_argument("--cocycle", required=True)
    sp.add_argument("--sphere", type=int)
    sp.set_defaults(func=cmd_hopf)

    sp = sub.add_parser("pair", help="evaluate a cocycle on an iterated Whitehead product")
    common(sp)
    sp.add_argument("--cocycle", required=True)
    sp.add_argument("--bracket", required=True)
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("reduce", help="weight-one representative of a sphere-model cocycle")
    common(sp)
    sp.add_argument("--cocycle", required=True)
    sp.set_defaults(func=cmd_reduce)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("HOPFINV_CAP")
    if getattr(args, "cap", None):
        os.environ["HOPFINV_CAP"] = str(args.cap)
    try:
        return _dispatch(args)
    finally:
        if saved is None:
            os.environ.pop("HOPFINV_CAP", None)
        else:
            os.environ["HOPFINV_CAP"] = saved


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PieceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NotClosed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (UnsupportedModel, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
