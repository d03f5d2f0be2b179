import shutil

import pytest

from platrec.catalog import (
    BUNDLES,
    FIXTURE_KINDS,
    Bundle,
    export_fixture,
    fixture_bytes,
    fixtures_root,
    list_fixtures,
    load_fixture,
)
from platrec.errors import FixtureError
from platrec.mapper import reconstruct
from platrec.ontology import Ontology, hierarchy_stats
from platrec.plon import parse_plon
from platrec.viewgraph import dumps_graph


def test_manifest_lists_every_kind():
    fixtures = list_fixtures()
    assert {f.kind for f in fixtures} == set(FIXTURE_KINDS)
    assert [f.id for f in fixtures] == sorted(f.id for f in fixtures)
    assert {"platont", "platont-shape", "preuveneers-shape"} <= {f.id for f in fixtures}


def test_every_fixture_loads():
    for f in list_fixtures():
        assert load_fixture(f.id) is not None


def test_platont_has_seven_roots():
    o = load_fixture("platont")
    assert isinstance(o, Ontology)
    assert len(o.roots) == 7


@pytest.mark.parametrize(
    "fixture_id, classes, links, parents, relations, individuals, populated, depth_sum",
    [
        ("platont-shape", 84, 83, 20, 33, 107, 60, 206),
        ("preuveneers-shape", 17, 13, 4, 3, 0, 0, 54),
    ],
)
def test_shape_aggregates(fixture_id, classes, links, parents, relations, individuals, populated, depth_sum):
    o = load_fixture(fixture_id)
    h = hierarchy_stats(o)
    assert len(o.classes) == classes
    assert h.subclass_link_count == links
    assert h.parent_class_count == parents
    assert len(o.relation_kinds) == relations
    assert len(o.individuals) == individuals
    assert len({i.class_id for i in o.individuals}) == populated
    assert h.depth_sum == depth_sum


def test_arm_bundle(arm_bundle):
    assert isinstance(arm_bundle, Bundle)
    graph, _ = reconstruct(arm_bundle.source_view, arm_bundle.ontology, arm_bundle.directives)
    assert len(graph.components) == 32
    tzic_parts = [c for c in graph.components if c.origin_entity == "tzic" and c.id != "tzic"]
    assert len(tzic_parts) == 2
    assert {c.class_id for c in tzic_parts} == {"interrupt-controller"}


def test_rpi_bundle(rpi_bundle):
    graph, _ = reconstruct(rpi_bundle.source_view, rpi_bundle.ontology, rpi_bundle.directives)
    assert len(graph.components) == 50
    subtree = lambda cls: [c for c in graph.components if graph.in_subtree(c, cls)]
    assert len(subtree("processors")) >= 6
    assert len(subtree("operating-system")) == 3
    assert len(subtree("boot-components")) >= 4


@pytest.mark.parametrize("bundle_id", BUNDLES)
def test_reconstruction_bit_for_bit(bundle_id):
    b = load_fixture(bundle_id)
    graph, report = reconstruct(b.source_view, b.ontology, b.directives)
    golden = fixture_bytes(f"{bundle_id}/expected-graph").decode("utf-8")
    assert dumps_graph(graph) == golden


def test_unknown_id():
    with pytest.raises(FixtureError, match="unknown fixture"):
        load_fixture("no-such-thing")
    with pytest.raises(FixtureError):
        fixture_bytes("no-such-thing")
    with pytest.raises(FixtureError):
        export_fixture("no-such-thing", ".")


def test_hash_mismatch_detected(tmp_path):
    root = tmp_path / "v1"
    shutil.copytree(fixtures_root(), root)
    assert load_fixture("platont", root) == load_fixture("platont")
    target = root / "platont.plon"
    target.write_bytes(target.read_bytes() + b"# tampered\n")
    with pytest.raises(FixtureError, match="corrupt"):
        load_fixture("platont", root)
    with pytest.raises(FixtureError):
        load_fixture("arm-tee", root)


def test_missing_manifest(tmp_path):
    with pytest.raises(FixtureError, match="manifest"):
        list_fixtures(tmp_path)


def test_export_bundle_copies_ontology(tmp_path):
    written = export_fixture("rpi", tmp_path)
    names = {p.relative_to(tmp_path).as_posix() for p in written}
    assert "platont.plon" in names and "rpi/source-view.json" in names
    assert parse_plon((tmp_path / "platont.plon").read_bytes()) == load_fixture("platont")
