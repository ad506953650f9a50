"""Constructive verification, at small q, of the classification of
rational normal curves totally tangent to a nondegenerate Hermitian
hypersurface: existence, transitivity of the unitary action, the curve
count, the Baer structure of the tangency locus, and uniqueness of the
hypersurface through a marked curve.
"""

from .fields import CapExceededError, FieldTower, GaloisField, make_field_tower
from .polys import HomogPoly, homog_roots_analysis, nth_power_decompose
from .linalg import (
    HermitianVariety,
    SingularMatrixError,
    fermat_matrix,
    gram_schmidt_against_form,
    hermitian_rescale,
    is_hermitian,
    lang_decompose,
    lang_map,
    transform_variety,
)
from .curves import (
    MarkedCurve,
    RationalNormalCurve,
    TangencyCertificate,
    TangencyFailure,
    ZeroPullbackError,
    baer_check,
    canonical_marks,
    canonical_matrix_B,
    canonical_pullback_target,
    curve_point_set,
    mobius_to_ambient,
    phi0,
    pullback,
    total_tangency_check,
)
from .orbit import (
    DEFAULT_MATRIX_CAP,
    GroupOrderTable,
    IncidenceTriple,
    OrbitResult,
    PGL2Record,
    certified_orbit,
    order_pgl2,
    order_pgu,
    orbit_enumerate,
    random_hermitian_invertible,
    random_unitary,
    stabilizer_as_pgl2,
    sweep_orbit_tangency,
    uniqueness_scan,
)
from .conic_scan import ConicScanResult, brute_force_conic_scan

__version__ = "0.1.0"

__all__ = [
    "CapExceededError", "FieldTower", "GaloisField", "make_field_tower",
    "HomogPoly", "homog_roots_analysis", "nth_power_decompose",
    "HermitianVariety", "SingularMatrixError", "fermat_matrix",
    "gram_schmidt_against_form", "hermitian_rescale", "is_hermitian",
    "lang_decompose", "lang_map", "transform_variety",
    "MarkedCurve", "RationalNormalCurve", "TangencyCertificate",
    "TangencyFailure", "ZeroPullbackError", "baer_check", "canonical_marks",
    "canonical_matrix_B", "canonical_pullback_target", "curve_point_set",
    "mobius_to_ambient", "phi0", "pullback", "total_tangency_check",
    "DEFAULT_MATRIX_CAP", "GroupOrderTable", "IncidenceTriple", "OrbitResult",
    "PGL2Record", "certified_orbit", "order_pgl2", "order_pgu",
    "orbit_enumerate", "random_hermitian_invertible", "random_unitary",
    "stabilizer_as_pgl2", "sweep_orbit_tangency", "uniqueness_scan",
    "ConicScanResult", "brute_force_conic_scan",
    "__version__",
]
