"""Embeddings of 2-polyhedra into homology 3-spheres, and minimal closures.

Exact integer arithmetic throughout; no dependencies beyond the standard
library.
"""

from .abelian import (
    CoefficientRing,
    FGAbelianGroup,
    Integers,
    PrimeField,
    Rationals,
    is_quotient_of,
    smith_normal_form,
)
from .closure import (
    ManifoldPresentation,
    c_of,
    glue_handlebodies,
    lower_bound_field,
    minimal_closure_field,
    minimal_closure_integral,
    obstruction_scan,
    sphere_embeddable,
    validate_hlhd,
)
from .fixtures import complex_fixture, manifold_fixture
from .graphprod import Graph, graph_genus, min_closed_h1_dim, named_graph
from .polyhedron import complex_from_dict, validate_complex
from .thickening import enumerate_se, thicken_all

__version__ = "0.1.0"

__all__ = [
    "CoefficientRing",
    "FGAbelianGroup",
    "Graph",
    "Integers",
    "ManifoldPresentation",
    "PrimeField",
    "Rationals",
    "c_of",
    "complex_fixture",
    "complex_from_dict",
    "enumerate_se",
    "glue_handlebodies",
    "graph_genus",
    "is_quotient_of",
    "lower_bound_field",
    "manifold_fixture",
    "min_closed_h1_dim",
    "minimal_closure_field",
    "minimal_closure_integral",
    "named_graph",
    "obstruction_scan",
    "smith_normal_form",
    "sphere_embeddable",
    "thicken_all",
    "validate_complex",
    "validate_hlhd",
]
