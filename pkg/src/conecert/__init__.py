"""Numerical periodicity certification for monotone dynamical systems on
solid cones."""

from .cones import (
    ConeRep,
    Face,
    Location,
    Order,
    StateSpace,
    boundary_points_near,
    dual_cone,
    exposed_points,
    exposing_witness,
    interval_contains,
    interval_radius,
    locate,
    lorentz,
    order_relation,
    orthant,
    polyhedral_cone,
    project_to_boundary,
    sample_cone,
    second_order_cone,
    state_space,
    support_margin,
    supporting_face,
)
from .errors import ConecertError
from .frames import (
    Frame,
    FunctionalBall,
    SimplicialCone,
    face_in_ball,
    face_in_ball_slack,
    perturbation_radius,
    positivity_margin,
    sample_perturbations,
    select_frame,
)
from .dynamics import (
    DomainSpec,
    MapSpec,
    OrbitRecord,
    SearchBudget,
    affine_map,
    build_trap,
    compose_maps,
    conjugate_by_translation,
    detect_period,
    find_sandwich,
    iterate,
    lcm_capped,
    linear_map,
    make_example_system,
    open_ball,
    open_box,
    probe_boundary_density,
    trap_invariance_check,
    verify_monotone,
    whole_space,
)
from .certify import (
    Certificate,
    CertifyFailure,
    CertifyOptions,
    GlobalReport,
    PinchMargins,
    certify_point,
    global_report,
    pinch_shadow,
    verify_pinch,
)
from .scenario import Scenario, load_scenario, parse_scenario
from .serialize import (
    certificate_from_jsonable,
    certificate_to_jsonable,
    validate_certificate,
)
from .report import RunReport, emit_report, run_scenario, summary_text

__all__ = [
    "Certificate",
    "CertifyFailure",
    "CertifyOptions",
    "ConeRep",
    "ConecertError",
    "DomainSpec",
    "Face",
    "Frame",
    "FunctionalBall",
    "GlobalReport",
    "Location",
    "MapSpec",
    "OrbitRecord",
    "Order",
    "PinchMargins",
    "RunReport",
    "Scenario",
    "SearchBudget",
    "SimplicialCone",
    "StateSpace",
    "affine_map",
    "boundary_points_near",
    "build_trap",
    "certificate_from_jsonable",
    "certificate_to_jsonable",
    "certify_point",
    "compose_maps",
    "conjugate_by_translation",
    "detect_period",
    "dual_cone",
    "emit_report",
    "exposed_points",
    "exposing_witness",
    "face_in_ball",
    "face_in_ball_slack",
    "find_sandwich",
    "global_report",
    "interval_contains",
    "interval_radius",
    "iterate",
    "lcm_capped",
    "linear_map",
    "load_scenario",
    "locate",
    "lorentz",
    "make_example_system",
    "open_ball",
    "open_box",
    "order_relation",
    "orthant",
    "parse_scenario",
    "perturbation_radius",
    "pinch_shadow",
    "polyhedral_cone",
    "positivity_margin",
    "probe_boundary_density",
    "project_to_boundary",
    "run_scenario",
    "sample_cone",
    "sample_perturbations",
    "second_order_cone",
    "select_frame",
    "state_space",
    "summary_text",
    "support_margin",
    "supporting_face",
    "trap_invariance_check",
    "validate_certificate",
    "verify_monotone",
    "verify_pinch",
    "whole_space",
]

__version__ = "0.1.0"
