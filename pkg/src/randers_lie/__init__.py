"""Left-invariant Randers metrics on Lie groups, deformed by a vector field.

Algebra-level computations only: structure constants, inner products on the
Lie algebra, Levi-Civita connections, sectional and flag curvatures, and the
Douglas/Berwald classification.
"""
from .algebra import (
    DEFAULT_TOL,
    LieAlgebraSpec,
    MetricTensor,
    ad_matrix,
    ad_transpose,
    bracket,
    change_basis,
    derived_subalgebra_span,
    gram_schmidt,
    structure_norm,
)
from .classification import (
    ClassificationReport,
    classify,
    classify_tilde,
    is_geodesic_vector,
    is_killing_vector,
    transfer_conditions,
)
from .curvature import (
    ConnectionTable,
    CurvatureTensor,
    FlagReport,
    SectionalReport,
    connection_gX_closed_form,
    connection_relation_douglas,
    flag_curvature,
    koszul_connection,
    riemann_tensor,
    sectional_curvature,
    sectional_curvature_closed_form,
    sectional_douglas_closed_form,
    sectional_ratio_berwald,
)
from .errors import (
    DegenerateFieldError,
    GeometryError,
    InputError,
    ParameterError,
    PreconditionError,
    ValidityError,
)
from .randers import (
    AdaptedFrame,
    DeformationField,
    adapted_frame,
    deformed_metric,
    evaluate_F,
    evaluate_F_tilde,
    evaluate_F_tilde_closed_form,
    phi_map,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptedFrame",
    "ClassificationReport",
    "ConnectionTable",
    "CurvatureTensor",
    "DEFAULT_TOL",
    "DeformationField",
    "DegenerateFieldError",
    "FlagReport",
    "GeometryError",
    "InputError",
    "LieAlgebraSpec",
    "MetricTensor",
    "ParameterError",
    "PreconditionError",
    "SectionalReport",
    "ValidityError",
    "ad_matrix",
    "ad_transpose",
    "adapted_frame",
    "bracket",
    "change_basis",
    "classify",
    "classify_tilde",
    "connection_gX_closed_form",
    "connection_relation_douglas",
    "deformed_metric",
    "derived_subalgebra_span",
    "evaluate_F",
    "evaluate_F_tilde",
    "evaluate_F_tilde_closed_form",
    "flag_curvature",
    "gram_schmidt",
    "is_geodesic_vector",
    "is_killing_vector",
    "koszul_connection",
    "phi_map",
    "riemann_tensor",
    "sectional_curvature",
    "sectional_curvature_closed_form",
    "sectional_douglas_closed_form",
    "sectional_ratio_berwald",
    "structure_norm",
    "transfer_conditions",
]
