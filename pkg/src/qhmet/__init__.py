"""Hyperbolic-type metrics on plane domains and their inequality harness."""

from .closed_form import (
    h_alpha,
    j_euclid_lower_bound,
    j_lower_bound_jung,
    j_metric,
    jung_radius,
    k_ball_diameter,
    k_ball_radial,
    k_euclid_lower_bound,
    k_lower_bound_jung,
    k_punctured,
    modulus_j,
    modulus_k,
    rho_ball,
)
from .domains import (
    Ball,
    Diamond,
    DistanceToBoundary,
    Domain,
    Punctured,
    PuncturedSpace,
    Superellipse,
    boundary_points,
    delta,
    diam,
    dist_to_outer_boundary,
    format_domain,
    parse_domain,
    project_to_superellipse,
)
from .errors import (
    AlignmentError,
    ConnectivityError,
    ContainmentError,
    DomainMembershipError,
    MethodUnavailableError,
    QhmetError,
    UnknownCheckError,
    UnsupportedPairError,
)
from .qh_solver import (
    GeodesicResult,
    MeshParams,
    k_circle_angle_range,
    k_circle_point,
    k_numeric,
    qh_segment_length,
    relax_path,
)

__version__ = "0.1.0"
