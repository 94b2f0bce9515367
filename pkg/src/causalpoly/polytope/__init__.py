"""Exact characterization of causal polytopes: vertices, facets, bounds, symmetries."""

from .tables import (
    BINARY,
    CausalOrder,
    CorrelationTable,
    DeterministicStrategy,
    Scenario,
    SignalingReport,
    check_signaling,
    project_signaling_plane,
    q_mix,
    table_from_function,
    uniform_table,
)
from .vertices import (
    DEFAULT_VERTEX_LIMIT,
    ScenarioTooLargeError,
    enumerate_vertices,
    vertex_count,
    vertex_tables,
)
from .inequalities import (
    CausalInequality,
    FacetReport,
    affine_dimension,
    causal_bound,
    facet_report,
    gyni_inequality,
    inequality_from_json,
    inequality_to_json,
    lgyni_inequality,
    nonnegativity_inequality,
    weighted_signaling_inequality,
)
from .dd import facets_of_points
from .facets import (
    FacetOrbit,
    Relabeling,
    UnsupportedScenarioError,
    classify_facets,
    enumerate_facets,
    relabel_inequality,
    relabel_table,
    relabeling_group,
)

__all__ = [
    "BINARY",
    "CausalInequality",
    "CausalOrder",
    "CorrelationTable",
    "DEFAULT_VERTEX_LIMIT",
    "DeterministicStrategy",
    "FacetOrbit",
    "FacetReport",
    "Relabeling",
    "Scenario",
    "ScenarioTooLargeError",
    "SignalingReport",
    "UnsupportedScenarioError",
    "affine_dimension",
    "causal_bound",
    "check_signaling",
    "classify_facets",
    "enumerate_facets",
    "enumerate_vertices",
    "facet_report",
    "facets_of_points",
    "gyni_inequality",
    "inequality_from_json",
    "inequality_to_json",
    "lgyni_inequality",
    "nonnegativity_inequality",
    "project_signaling_plane",
    "q_mix",
    "relabel_inequality",
    "relabel_table",
    "relabeling_group",
    "table_from_function",
    "uniform_table",
    "vertex_count",
    "vertex_tables",
    "weighted_signaling_inequality",
]
