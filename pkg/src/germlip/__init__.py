"""Exact inner bi-Lipschitz classification of parametrized surface germs,
with an independent floating-point cross-checking oracle."""

from .algebraic import AlgebraicNumber, isolate_real_roots
from .classifier import (
    ClassificationReport,
    GermComplexReport,
    Sector,
    build_holder_complex,
    classify_inner,
    sector_decomposition,
    sector_exponent,
)
from .complexes import (
    HolderComplex,
    canonical_form,
    combinatorially_equivalent,
    multigraph_isomorphism,
    parse_complex,
    render_complex,
    simplify,
)
from .contact import (
    INFINITY,
    ContactMatrix,
    PuiseuxArc,
    Verdict,
    contact_matrix,
    contact_order,
    curves_outer_equivalent,
)
from .errors import (
    ComplexTooLargeError,
    FiniteDeterminacyError,
    GermlipError,
    ParseError,
    TruncationError,
    ValidationError,
)
from .germ import (
    CurveGerm,
    MapGerm,
    Ray,
    RaySystem,
    double_point_system,
    double_rays,
    image_arc,
    image_double_curve,
    make_germ,
    parse_germ,
)
from .polynomial import Poly, divided_difference, resultant, squarefree_part
from .puiseux import PuiseuxSeries, radius_reparametrize

__all__ = [
    "AlgebraicNumber",
    "ClassificationReport",
    "ComplexTooLargeError",
    "ContactMatrix",
    "CurveGerm",
    "FiniteDeterminacyError",
    "GermComplexReport",
    "GermlipError",
    "HolderComplex",
    "INFINITY",
    "MapGerm",
    "ParseError",
    "Poly",
    "PuiseuxArc",
    "PuiseuxSeries",
    "Ray",
    "RaySystem",
    "Sector",
    "TruncationError",
    "ValidationError",
    "Verdict",
    "build_holder_complex",
    "canonical_form",
    "classify_inner",
    "combinatorially_equivalent",
    "contact_matrix",
    "contact_order",
    "curves_outer_equivalent",
    "divided_difference",
    "double_point_system",
    "double_rays",
    "image_arc",
    "image_double_curve",
    "isolate_real_roots",
    "make_germ",
    "multigraph_isomorphism",
    "parse_complex",
    "parse_germ",
    "radius_reparametrize",
    "render_complex",
    "resultant",
    "sector_decomposition",
    "sector_exponent",
    "simplify",
    "squarefree_part",
]
