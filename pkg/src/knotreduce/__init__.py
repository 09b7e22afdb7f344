"""Finite-window model of a continuous reduction from E_1 to homeomorphism of
"open set plus a point" subspaces of the 3-sphere, built from knotted balls.
"""

from .construction import (
    Ball,
    Capsule,
    ComplementComponent,
    Configuration,
    PLCurve,
    PQDescriptor,
    ball_spec,
    capsule,
    complement_components,
    embed_knot_in_ball,
    pq_sets,
    verify_properties,
)
from .chains import ChainConfiguration, build_order_configuration
from .invariants import (
    InvariantCertificate,
    alexander_of_two_braid,
    certify_distinct,
    jones_polynomial,
    kauffman_bracket,
    knot_determinant,
    pd_determinant,
)
from .knots import KnotTypeId, KnotTypeRegistry, PDCode, registry_type, torus_knot_pd, validate_pd
from .laurent import LaurentPolynomial
from .metrics import (
    CompactSample,
    MetricCode,
    check_convergence,
    epsilon_collar_contains,
    hausdorff_distance,
    metric_code_of_points,
    validate_metric_code,
)
from .reduction import (
    BitArray,
    Matching,
    assign_knot_type,
    build_configuration,
    configurations_equivalent_within,
    continuity_bound,
    decode_configuration,
    e1_equivalent_within,
    match_configurations,
    removed_set_sample,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BitArray",
    "Capsule",
    "ChainConfiguration",
    "CompactSample",
    "ComplementComponent",
    "Configuration",
    "InvariantCertificate",
    "KnotTypeId",
    "KnotTypeRegistry",
    "LaurentPolynomial",
    "Matching",
    "MetricCode",
    "PDCode",
    "PLCurve",
    "PQDescriptor",
    "alexander_of_two_braid",
    "assign_knot_type",
    "ball_spec",
    "build_configuration",
    "build_order_configuration",
    "capsule",
    "certify_distinct",
    "check_convergence",
    "complement_components",
    "configurations_equivalent_within",
    "continuity_bound",
    "decode_configuration",
    "e1_equivalent_within",
    "embed_knot_in_ball",
    "epsilon_collar_contains",
    "hausdorff_distance",
    "jones_polynomial",
    "kauffman_bracket",
    "knot_determinant",
    "match_configurations",
    "metric_code_of_points",
    "pd_determinant",
    "pq_sets",
    "registry_type",
    "removed_set_sample",
    "torus_knot_pd",
    "validate_metric_code",
    "validate_pd",
    "verify_properties",
]
