"""Exact computation of Hopf invariants through bar and graph complexes of CDGA models."""

from .barcx import BarComplex, coproduct, parse_bar, shuffle
from .chainalg import (
    NOT_EXACT,
    NotClosed,
    PieceTooLarge,
    SparseMatrix,
    assemble,
    closed_kunneth_adjust,
    homology_basis,
    homology_rank,
    solve_preimage,
)
from .formats import format_model, parse_document
from .graphcx import (
    EilComplex,
    GraphComplex,
    RelationSpace,
    Tree,
    canonicalize,
    normalize,
    quotient_reduce,
    relation_space,
)
from .hopf import (
    Bracket,
    Leaf,
    NotReducible,
    SphereTarget,
    bracket,
    complex_for,
    config_pair,
    generator_leaf,
    hopf_pair,
    integrate,
    leaf,
    lyndon_brackets,
    pullback,
    reduce_to_weight_one,
    whitehead_pair,
)
from .lincomb import LinComb, koszul_sign
from .model import (
    Model,
    Morphism,
    UnsupportedModel,
    free_model,
    sphere_cohomology_model,
    sphere_model,
    table_model,
    validate_model,
    validate_morphism,
    wedge_model,
)

__version__ = "0.1.0"
