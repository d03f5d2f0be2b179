"""Bundled fixtures with integrity checks.

Every payload is listed in ``fixtures/v1/manifest.json`` with its SHA-256;
a mismatch means a corrupted install and raises :class:`FixtureError`.
Bundle ids (``arm-tee``, ``rpi``) load every file of a case study at once.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import FixtureError
from .mapper import MappingDirectives, MappingReport, load_directives
from .ontology import Ontology
from .plon import parse_plon
from .sourceview import SourceView, load_source_view
from .viewgraph import ComponentGraph, TargetView, ViewpointSpec, graph_from_json, view_from_json

FIXTURE_KINDS = ("ontology", "source-view", "directives", "expected-graph", "expected-view", "mapping-report", "viewpoint")
BUNDLES = ("arm-tee", "rpi")
BUNDLE_ONTOLOGY = "platont"


@dataclass(frozen=True)
class Fixture:
    id: str
    kind: str
    path: str
    sha256: str


@dataclass(frozen=True)
class Bundle:
    """One case study: inputs, golden outputs and viewpoints."""

    id: str
    ontology: Ontology
    source_view: SourceView
    directives: MappingDirectives
    expected_graph: ComponentGraph
    expected_report: MappingReport
    viewpoints: dict[str, ViewpointSpec] = field(default_factory=dict)
    expected_views: dict[str, TargetView] = field(default_factory=dict)


def fixtures_root() -> Path:
    return Path(str(resources.files("platrec") / "fixtures" / "v1"))


def _manifest(root: Path) -> dict[str, Fixture]:
    try:
        doc = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FixtureError(f"fixture manifest missing under {root}") from None
    return {e["id"]: Fixture(e["id"], e["kind"], e["path"], e["sha256"]) for e in doc["fixtures"]}


def list_fixtures(root: Path | None = None) -> list[Fixture]:
    return sorted(_manifest(root or fixtures_root()).values(), key=lambda f: f.id)


def fixture_bytes(fixture_id: str, root: Path | None = None) -> bytes:
    root = root or fixtures_root()
    entry = _manifest(root).get(fixture_id)
    if entry is None:
        raise FixtureError(f"unknown fixture {fixture_id!r}")
    data = (root / entry.path).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if digest != entry.sha256:
        raise FixtureError(f"fixture {fixture_id!r} is corrupt: sha256 {digest} does not match the manifest")
    return data


def _parse(kind: str, data: bytes) -> Any:
    if kind == "ontology":
        return parse_plon(data)
    doc = json.loads(data.decode("utf-8"))
    if kind == "source-view":
        return load_source_view(doc)
    if kind == "directives":
        return load_directives(doc)
    if kind == "expected-graph":
        return graph_from_json(doc)
    if kind == "expected-view":
        return view_from_json(doc)
    if kind == "mapping-report":
        return MappingReport.from_json(doc)
    if kind == "viewpoint":
        return ViewpointSpec.from_json(doc)
    raise FixtureError(f"unknown fixture kind {kind!r}")


def bundle_members(bundle_id: str, root: Path | None = None) -> list[Fixture]:
    return [f for f in list_fixtures(root) if f.id.startswith(bundle_id + "/")]


def load_fixture(fixture_id: str, root: Path | None = None):
    """Parsed and validated payload; bundle ids return a :class:`Bundle`."""
    root = root or fixtures_root()
    if fixture_id in BUNDLES:
        return _load_bundle(fixture_id, root)
    entry = _manifest(root).get(fixture_id)
    if entry is None:
        raise FixtureError(f"unknown fixture {fixture_id!r}")
    return _parse(entry.kind, fixture_bytes(fixture_id, root))


def _load_bundle(bundle_id: str, root: Path) -> Bundle:
    parts: dict[str, Any] = {}
    viewpoints, views = {}, {}
    for f in bundle_members(bundle_id, root):
        payload = _parse(f.kind, fixture_bytes(f.id, root))
        if f.kind == "viewpoint":
            viewpoints[payload.name] = payload
        elif f.kind == "expected-view":
            views[payload.name] = payload
        else:
            parts[f.kind] = payload
    return Bundle(
        id=bundle_id,
        ontology=load_fixture(BUNDLE_ONTOLOGY, root),
        source_view=parts["source-view"],
        directives=parts["directives"],
        expected_graph=parts["expected-graph"],
        expected_report=parts["mapping-report"],
        viewpoints=viewpoints,
        expected_views=views,
    )


def export_fixture(fixture_id: str, out_dir, root: Path | None = None) -> list[Path]:
    """Copy a fixture (or a bundle plus its ontology) into ``out_dir``, verifying hashes."""
    root = root or fixtures_root()
    manifest = _manifest(root)
    if fixture_id in BUNDLES:
        entries = [manifest[BUNDLE_ONTOLOGY], *bundle_members(fixture_id, root)]
    elif fixture_id in manifest:
        entries = [manifest[fixture_id]]
    else:
        raise FixtureError(f"unknown fixture {fixture_id!r}")
    written = []
    for f in entries:
        data = fixture_bytes(f.id, root)
        target = Path(out_dir) / f.path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
        written.append(target)
    return written
