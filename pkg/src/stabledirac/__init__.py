"""Exact verification of stable Dirac, Dirac-Jacobi and generalized complex structures.

Everything is computed over the rationals on polynomial coefficient fields
in a single coordinate chart, so each identity is decided exactly.
"""

from .bundle import (
    StableSection,
    TwistData,
    UnsupportedError,
    WadeParams,
    conformal_courant_bracket,
    courant_bracket_h0,
    dL_omega_formula,
    jacobi_anomaly,
    lift_to_product,
    metric_G,
    pairing_Omega,
    restrict_invariant,
    stable_courant_bracket,
    wade_bracket,
)
from .dirac import (
    SubbundleFrame,
    check_dirac,
    check_dirac_jacobi,
    graph_2form,
    graph_poisson,
    prolong_dirac,
    prolong_dirac_jacobi,
    span_equal,
    trivial_extensions,
)
from .docfmt import StructureDoc, parse_document, serialize_document
from .gcs import (
    GacsData,
    GcsData,
    gacs_algebraic_check,
    gacs_normality_check,
    gcs_algebraic_check,
    gcs_integrability_check,
    lift_gacs_to_gcs,
    projection_check,
    prolong_gcs_J0,
    torus_bundle_builder,
)
from .poly import Chart, Poly, parse_poly
from .report import PreconditionError, StructureError, StructureReport
from .runner import run
from .tensors import EndoField, KForm, KVector, VectorField

__version__ = "0.1.0"
