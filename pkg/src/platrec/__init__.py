"""Ontology-driven architecture reconstruction for computing platforms."""

__version__ = "0.1.0"

from .catalog import Bundle, Fixture, list_fixtures, load_fixture
from .errors import (
    FixtureError,
    InputFormatError,
    MappingError,
    OntologyValidationError,
    PatchError,
    PlatrecError,
    PlonSyntaxError,
    RepositoryError,
    SchemaError,
    SemanticError,
    SourceViewError,
    ViewError,
)
from .export import RenderOptions, export_dot, export_graphml, render_report
from .mapper import MappingDirectives, MappingReport, coverage_scan, load_directives, map_entities, reconstruct
from .metrics import (
    DEFAULT_WEIGHTS,
    ComparisonReport,
    MetricsReport,
    WeightTable,
    compare_ontologies,
    compute_metrics,
    weighted_score,
)
from .ontology import (
    ComponentAttributes,
    Individual,
    Ontology,
    OntologyClass,
    OntologyPatch,
    RelationKind,
    apply_patch,
    lookup,
    normalize_term,
    validate_ontology,
)
from .plon import convert_json, load_ontology, parse_plon, serialize_plon
from .repository import repo_list, repo_load, repo_store
from .sourceview import SourceView, load_source_view, normalize_view
from .viewgraph import (
    ComponentGraph,
    CrossContextReport,
    TargetView,
    ViewpointSpec,
    cross_context_report,
    derive_view,
)
