import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from platrec.catalog import load_fixture
from platrec.errors import MappingError, SchemaError
from platrec.mapper import (
    ComponentSpec,
    ConnectionDecl,
    ContextTag,
    EntityMap,
    MappingDirectives,
    MappingReport,
    build_connections,
    coverage_scan,
    directives_to_json,
    load_directives,
    map_entities,
    reconstruct,
)
from platrec.ontology import ComponentAttributes, Ontology, apply_patch, normalize_term
from platrec.sourceview import EvidenceRef, SourceEntity, SourceView
from platrec.viewgraph import graph_to_json

from strategies import FREE_TEXT, source_views

PLATONT = load_fixture("platont")
EV = (EvidenceRef("reference manual", "ch. 1"),)


def entity(eid, name=None, **kw):
    kw.setdefault("evidence", EV)
    return SourceEntity(eid, name or eid, **kw)


# ------------------------------------------------------------ by-individual


def test_xen_maps_by_individual():
    v = SourceView("p", (entity("xen", "XEN"),))
    components, report = map_entities(v, PLATONT, MappingDirectives())
    assert [(c.id, c.class_id) for c in components] == [("xen", "virtual-machine-monitor")]
    assert report.mapped[0].mechanism == "by-individual"
    assert report.mapped[0].individual == "XEN"


def test_alias_and_spacing_variants_hit():
    v = SourceView("p", (entity("a", "  vmware_workstation "),))
    components, _ = map_entities(v, PLATONT, MappingDirectives())
    assert components[0].class_id == PLATONT.individual_map["VMware-Workstation"].class_id


def test_unknown_entity_skips_lookup():
    v = SourceView("p", (SourceEntity("xen", "XEN", unknown=True),))
    components, report = map_entities(v, PLATONT, MappingDirectives())
    assert components == () and report.unmapped == ("xen",)


def test_default_attributes_unknown():
    components, _ = map_entities(SourceView("p", (entity("xen", "XEN"),)), PLATONT, MappingDirectives())
    assert components[0].attributes == ComponentAttributes()
    assert components[0].attributes.implementation == "unknown"


# ---------------------------------------------------------------- unmapped


def test_unmapped_entity_gets_suggestion(rpi_bundle):
    report = rpi_bundle.expected_report
    assert report.unmapped == ("bcm2835-subblock-x",)
    (s,) = report.patch_suggestions
    assert s.entity == "bcm2835-subblock-x" and s.suggested_class == "co-processor"
    patched = apply_patch(PLATONT, s.patch)
    assert patched.individual_map["bcm2835-subblock-x"].class_id == "co-processor"


def test_unmapped_without_hint_has_empty_patch():
    v = SourceView("p", (entity("mystery", "Mystery block"),))
    _, report = map_entities(v, PLATONT, MappingDirectives())
    (s,) = report.patch_suggestions
    assert s.suggested_class is None and len(s.patch) == 0
    assert "Mystery block" in s.rationale


# -------------------------------------------------------------- directives


def test_tza_ram_partition(arm_bundle):
    graph = arm_bundle.expected_graph
    comps = {c.id: c for c in graph.components}
    parts = [c for c in graph.components if c.origin_entity == "tza-ram" and c.id != "main-ram"]
    assert {c.class_id for c in parts} == {"memory-device"}
    assert sorted(c.context() for c in parts) == ["normal", "secure"]
    partition = [e for e in graph.connections if e.target == "main-ram" and e.relation_kind == "partitions"]
    assert sorted(e.source for e in partition) == ["normal-ram", "secure-ram"]
    assert comps["main-ram"].class_id == "memory-device"


def test_processor_contexts_give_two_core_sets(arm_bundle):
    cores = [c for c in arm_bundle.expected_graph.components if c.origin_entity == "processor-security-contexts"]
    assert [(c.class_id, c.context()) for c in cores] == [("virtual-core", "normal"), ("virtual-core", "secure")]


def test_table_connections_present(arm_bundle):
    edges = {(e.source, e.relation_kind, e.target) for e in arm_bundle.expected_graph.connections}
    assert ("monitor-code", "redirects-execution", "cpu-cores") in edges
    assert ("hyp-code", "interprets", "normal-os") in edges
    kinds = PLATONT.relation_map
    assert (kinds["redirects-execution"].family, kinds["redirects-execution"].subkind) == ("control", "execution-redirection")
    assert (kinds["interprets"].family, kinds["interprets"].subkind) == ("sequential", "interpreting")


def test_shared_cache_lines(arm_bundle):
    edges = [e for e in arm_bundle.expected_graph.connections if e.target == "l2-cache" and e.relation_kind == "shares"]
    assert sorted(e.source for e in edges) == ["normal-cache-lines", "secure-cache-lines"]


def test_directive_beats_individual_lookup():
    v = SourceView("p", (entity("xen", "XEN"),))
    d = MappingDirectives((EntityMap("xen", (ComponentSpec("xen-cpu", "cpu"),)),))
    components, report = map_entities(v, PLATONT, d)
    assert [(c.id, c.class_id) for c in components] == [("xen-cpu", "cpu")]
    assert report.mapped[0].mechanism == "by-directive"


def test_context_tags_applied():
    v = SourceView("p", (entity("xen", "XEN"),))
    d = MappingDirectives(context_tags=(ContextTag("xen", "normal"), ContextTag("xen", "arm", key="subsystem")))
    components, _ = map_entities(v, PLATONT, d)
    assert dict(components[0].contexts) == {"context": "normal", "subsystem": "arm"}


@pytest.mark.parametrize(
    "directives, needle",
    [
        (MappingDirectives((EntityMap("ghost", (ComponentSpec("g", "cpu"),)),)), "'ghost'"),
        (MappingDirectives((EntityMap("xen", (ComponentSpec("g", "no-such-class"),)),)), "'no-such-class'"),
        (MappingDirectives((EntityMap("xen", (ComponentSpec("bad name", "cpu"),)),)), "'bad name'"),
        (MappingDirectives(connections=(ConnectionDecl("a", "no-such-kind", "b"),)), "'no-such-kind'"),
    ],
)
def test_bad_directives_rejected_before_mapping(directives, needle):
    v = SourceView("p", (entity("xen", "XEN"),))
    with pytest.raises(MappingError) as info:
        reconstruct(v, PLATONT, directives)
    assert any(needle in p for p in info.value.problems)


def test_component_name_clash_rejected():
    v = SourceView("p", (entity("xen", "XEN"), entity("other", "Thing")))
    d = MappingDirectives((EntityMap("other", (ComponentSpec("xen", "cpu"),)),))
    with pytest.raises(MappingError, match="produced twice"):
        map_entities(v, PLATONT, d)


# ------------------------------------------------------------- connections


def test_no_declarations_no_connections():
    assert build_connections([], PLATONT, MappingDirectives()) == []


def test_connection_errors_list_every_offender():
    v = SourceView("p", (entity("xen", "XEN"), entity("linux", "Linux")))
    d = MappingDirectives(
        connections=(
            ConnectionDecl("xen", "interprets", "linux"),
            ConnectionDecl("xen", "interprets", "nowhere"),
            ConnectionDecl("ghost", "loads", "linux"),
        )
    )
    with pytest.raises(MappingError) as info:
        reconstruct(v, PLATONT, d)
    problems = info.value.problems
    assert len(problems) == 2
    assert "'nowhere'" in problems[0] and "'ghost'" in problems[1]


def test_missing_whole_reported():
    v = SourceView("p", (entity("ram", "RAM"),))
    d = MappingDirectives((EntityMap("ram", (ComponentSpec("a", "memory-device"), ComponentSpec("b", "memory-device")), whole="ram-main"),))
    with pytest.raises(MappingError, match="ram-main"):
        reconstruct(v, PLATONT, d)


def test_every_edge_resolves(arm_bundle, rpi_bundle):
    for bundle in (arm_bundle, rpi_bundle):
        g = bundle.expected_graph
        ids = {c.id for c in g.components}
        kinds = {r.id for r in bundle.ontology.relation_kinds}
        for e in g.connections:
            assert e.source in ids and e.target in ids and e.relation_kind in kinds


# ------------------------------------------------------------- reconstruct


def test_fixtures_reconstruct_to_golden(arm_bundle, rpi_bundle):
    for bundle, n in ((arm_bundle, 32), (rpi_bundle, 50)):
        graph, report = reconstruct(bundle.source_view, bundle.ontology, bundle.directives)
        assert len(graph.components) == n
        assert graph_to_json(graph) == graph_to_json(bundle.expected_graph)
        assert report == bundle.expected_report


def test_empty_view_overlooks_everything():
    graph, report = reconstruct(SourceView("empty"), PLATONT, MappingDirectives())
    assert graph.components == () and graph.connections == ()
    assert report.overlooked_classes == tuple(sorted(c.id for c in PLATONT.classes))


def test_empty_ontology_has_nothing_to_overlook():
    assert coverage_scan(SourceView("p", (entity("x"),)), Ontology(), MappingDirectives()) == []


def test_no_boot_entities_overlooks_boot_subtree():
    v = SourceView("p", (entity("xen", "XEN"), entity("linux", "Linux")))
    overlooked = set(coverage_scan(v, PLATONT, MappingDirectives()))
    assert PLATONT.descendants("boot-components") <= overlooked


def _brute_coverage(v: SourceView, o: Ontology, d: MappingDirectives) -> list[str]:
    """Test every (class, entity) pair directly against the directive table and individuals."""

    def produced(e):
        for em in d.entity_maps:
            if em.entity == e.id:
                return [c.class_id for c in em.components]
        if e.unknown:
            return []
        for term in (e.display_name, *e.aliases, e.id):
            for ind in o.individuals:
                if normalize_term(term) in {normalize_term(t) for t in (ind.id, *ind.aliases)}:
                    return [ind.class_id]
        return []

    def is_sub(child, ancestor):
        if child == ancestor:
            return True
        return any(is_sub(p, ancestor) for p in o.class_map[child].parents)

    return sorted(
        cls.id for cls in o.classes if not any(is_sub(k, cls.id) for e in v.entities for k in produced(e))
    )


def test_coverage_matches_brute_force_on_fixtures(arm_bundle, rpi_bundle):
    for bundle in (arm_bundle, rpi_bundle):
        expected = _brute_coverage(bundle.source_view, bundle.ontology, bundle.directives)
        assert coverage_scan(bundle.source_view, bundle.ontology, bundle.directives) == expected
        assert list(bundle.expected_report.overlooked_classes) == expected


# -------------------------------------------------------------- properties

_TERMS = sorted({t for ind in PLATONT.individuals for t in (ind.id, *ind.aliases)} | {c.name for c in PLATONT.classes})
_NAMES = st.one_of(FREE_TEXT, st.sampled_from(_TERMS))
_CLASSES = [c.id for c in PLATONT.classes]


@st.composite
def mapping_inputs(draw):
    v = draw(source_views(max_entities=8, names=_NAMES))
    maps = []
    for e in v.entities:
        if draw(st.integers(0, 3)) == 0:
            n = draw(st.integers(1, 3))
            specs = tuple(ComponentSpec(f"{e.id}--component-part{k}", draw(st.sampled_from(_CLASSES))) for k in range(n))
            maps.append(EntityMap(e.id, specs))
    return v, MappingDirectives(tuple(maps))


@settings(max_examples=100)
@given(mapping_inputs())
def test_entity_conservation(inputs):
    v, d = inputs
    graph, report = reconstruct(v, PLATONT, d)
    mapped = [m.entity for m in report.mapped]
    assert len(mapped) + len(report.unmapped) == len(v.entities)
    assert set(mapped) | set(report.unmapped) == set(v.ids())
    assert len(report.patch_suggestions) == len(report.unmapped)
    assert {m.entity for m in report.mapped if m.mechanism == "by-directive"} == {em.entity for em in d.entity_maps}
    origins = {c.origin_entity for c in graph.components}
    assert origins == set(mapped) - {em.entity for em in d.entity_maps if not em.components}


@settings(max_examples=100)
@given(mapping_inputs(), st.randoms(use_true_random=False))
def test_determinism(inputs, rnd):
    v, d = inputs
    g1, r1 = reconstruct(v, PLATONT, d)
    g2, r2 = reconstruct(v, PLATONT, d)
    assert graph_to_json(g1) == graph_to_json(g2) and r1 == r2
    entities = list(v.entities)
    rnd.shuffle(entities)
    g3, r3 = reconstruct(SourceView(v.platform_name, tuple(entities), v.notes), PLATONT, d)
    assert g3.components == g1.components and g3.connections == g1.connections
    assert r3.mapped == r1.mapped and r3.unmapped == r1.unmapped


@settings(max_examples=100)
@given(mapping_inputs())
def test_coverage_matches_brute_force(inputs):
    v, d = inputs
    assert coverage_scan(v, PLATONT, d) == _brute_coverage(v, PLATONT, d)


# ---------------------------------------------------------- serialization


def test_directives_json_round_trip(arm_bundle, rpi_bundle):
    for d in (arm_bundle.directives, rpi_bundle.directives):
        assert load_directives(directives_to_json(d)) == d


def test_directive_schema_error_path():
    with pytest.raises(SchemaError) as info:
        load_directives({"entity_maps": [{"entity": "x", "components": [{"name": "a"}]}]})
    assert info.value.path == "entity_maps[0].components[0]"
    with pytest.raises(SchemaError) as info:
        load_directives({"entity_maps": [{"entity": "x", "components": [{"name": "a", "class": "c", "attributes": {"implementation": "wood"}}]}]})
    assert info.value.path == "entity_maps[0].components[0].attributes"


def test_report_json_round_trip(rpi_bundle):
    r = rpi_bundle.expected_report
    assert MappingReport.from_json(r.to_json()) == r
    with pytest.raises(SchemaError):
        MappingReport.from_json({"format": "x"})
