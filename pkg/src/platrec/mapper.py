"""Ontology-based mapping of a source view onto a component-and-connector graph.

The analyst's judgement enters only through :class:`MappingDirectives`
(entity expansions, declared connections, context tags).  Everything else is
mechanical: each entity is resolved by, in order,

1. an explicit directive expansion,
2. an exact normalized hit on an ontology individual or alias,
3. otherwise it is reported unmapped together with a draft ontology patch.

Entities tagged ``unknown`` skip step 2.  Nothing is ever dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from ._canon import content_hash, pretty_dumps
from .errors import MappingError, SchemaError
from .ontology import (
    ClassHit,
    ComponentAttributes,
    Individual,
    IndividualHit,
    Ontology,
    OntologyPatch,
    PatchAddition,
    ensure_valid,
    is_identifier,
    lookup,
)
from .plon import check_schema, ontology_hash
from .sourceview import SourceEntity, SourceView, source_view_hash
from .viewgraph import (
    DEFAULT_CONTEXT_KEY,
    Component,
    ComponentGraph,
    Connection,
    OntologyRef,
    schema_snapshot,
)

_ATTRS = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "implementation": {"type": "string"},
        "source_status": {"type": "string"},
        "trust_status": {"type": "string"},
    },
}
DIRECTIVES_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "entity_maps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["entity", "components"],
                "additionalProperties": False,
                "properties": {
                    "entity": {"type": "string"},
                    "whole": {"type": "string"},
                    "components": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["name", "class"],
                            "additionalProperties": False,
                            "properties": {
                                "name": {"type": "string", "minLength": 1},
                                "class": {"type": "string"},
                                "attributes": _ATTRS,
                                "context": {
                                    "oneOf": [
                                        {"type": "string"},
                                        {"type": "object", "additionalProperties": {"type": "string"}},
                                    ]
                                },
                            },
                        },
                    },
                },
            },
        },
        "connections": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "relation", "to"],
                "additionalProperties": False,
                "properties": {
                    "from": {"type": "string"},
                    "relation": {"type": "string"},
                    "to": {"type": "string"},
                    "note": {"type": "string"},
                },
            },
        },
        "context_tags": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["component", "context"],
                "additionalProperties": False,
                "properties": {
                    "component": {"type": "string"},
                    "context": {"type": "string"},
                    "key": {"type": "string", "minLength": 1},
                },
            },
        },
    },
}
_VALIDATOR = jsonschema.Draft202012Validator(DIRECTIVES_SCHEMA)


@dataclass(frozen=True)
class ComponentSpec:
    name: str
    class_id: str
    attributes: ComponentAttributes = ComponentAttributes()
    contexts: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class EntityMap:
    entity: str
    components: tuple[ComponentSpec, ...]
    whole: str | None = None  # when set, the other components partition this one


@dataclass(frozen=True)
class ConnectionDecl:
    source: str
    relation: str
    target: str
    note: str = ""


@dataclass(frozen=True)
class ContextTag:
    component: str
    context: str
    key: str = DEFAULT_CONTEXT_KEY


@dataclass(frozen=True)
class MappingDirectives:
    entity_maps: tuple[EntityMap, ...] = ()
    connections: tuple[ConnectionDecl, ...] = ()
    context_tags: tuple[ContextTag, ...] = ()

    def for_entity(self, entity_id: str) -> EntityMap | None:
        for em in self.entity_maps:
            if em.entity == entity_id:
                return em
        return None


def load_directives(document: Any) -> MappingDirectives:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from None
    check_schema(document, _VALIDATOR)
    maps = []
    for i, em in enumerate(document.get("entity_maps", ())):
        specs = []
        for j, c in enumerate(em["components"]):
            try:
                attrs = ComponentAttributes(**c.get("attributes", {}))
            except ValueError as exc:
                raise SchemaError(f"entity_maps[{i}].components[{j}].attributes", str(exc)) from None
            ctx = c.get("context")
            if ctx is None:
                contexts = ()
            elif isinstance(ctx, str):
                contexts = ((DEFAULT_CONTEXT_KEY, ctx),)
            else:
                contexts = tuple(sorted(ctx.items()))
            specs.append(ComponentSpec(c["name"], c["class"], attrs, contexts))
        maps.append(EntityMap(em["entity"], tuple(specs), em.get("whole")))
    conns = tuple(
        ConnectionDecl(c["from"], c["relation"], c["to"], c.get("note", "")) for c in document.get("connections", ())
    )
    tags = tuple(
        ContextTag(t["component"], t["context"], t.get("key", DEFAULT_CONTEXT_KEY))
        for t in document.get("context_tags", ())
    )
    return MappingDirectives(tuple(maps), conns, tags)


def read_directives(path) -> MappingDirectives:
    return load_directives(Path(path).read_bytes().decode("utf-8"))


def directives_to_json(d: MappingDirectives) -> dict:
    maps = []
    for em in d.entity_maps:
        comps = []
        for c in em.components:
            item: dict[str, Any] = {"name": c.name, "class": c.class_id, "attributes": c.attributes.to_dict()}
            ctx = dict(c.contexts)
            if list(ctx) == [DEFAULT_CONTEXT_KEY]:
                item["context"] = ctx[DEFAULT_CONTEXT_KEY]
            elif ctx:
                item["context"] = ctx
            comps.append(item)
        entry: dict[str, Any] = {"entity": em.entity, "components": comps}
        if em.whole is not None:
            entry["whole"] = em.whole
        maps.append(entry)
    conns = []
    for c in d.connections:
        item = {"from": c.source, "relation": c.relation, "to": c.target}
        if c.note:
            item["note"] = c.note
        conns.append(item)
    tags = []
    for t in d.context_tags:
        item = {"component": t.component, "context": t.context}
        if t.key != DEFAULT_CONTEXT_KEY:
            item["key"] = t.key
        tags.append(item)
    return {"entity_maps": maps, "connections": conns, "context_tags": tags}


def directives_hash(d: MappingDirectives) -> str:
    return content_hash(directives_to_json(d))


# -------------------------------------------------------------------- report


@dataclass(frozen=True)
class MappedEntity:
    entity: str
    components: tuple[str, ...]
    mechanism: str  # by-directive | by-individual
    individual: str | None = None


@dataclass(frozen=True)
class PatchSuggestion:
    entity: str
    display_name: str
    kind_hint: str | None
    suggested_class: str | None
    rationale: str
    patch: OntologyPatch = OntologyPatch()


@dataclass(frozen=True)
class MappingReport:
    platform_name: str = ""
    mapped: tuple[MappedEntity, ...] = ()
    unmapped: tuple[str, ...] = ()
    overlooked_classes: tuple[str, ...] = ()
    patch_suggestions: tuple[PatchSuggestion, ...] = ()
    warnings: tuple[str, ...] = ()
    ontology: OntologyRef = OntologyRef()
    source_view_hash: str = ""

    def to_json(self) -> dict:
        return {
            "format": "platrec/mapping-report@1",
            "platform_name": self.platform_name,
            "ontology": {"name": self.ontology.name, "version": self.ontology.version, "hash": self.ontology.hash},
            "source_view_hash": self.source_view_hash,
            "mapped": [
                {"entity": m.entity, "components": list(m.components), "mechanism": m.mechanism, "individual": m.individual}
                for m in self.mapped
            ],
            "unmapped": list(self.unmapped),
            "overlooked_classes": list(self.overlooked_classes),
            "patch_suggestions": [suggestion_to_json(s) for s in self.patch_suggestions],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "MappingReport":
        if doc.get("format") != "platrec/mapping-report@1":
            raise SchemaError("format", "expected 'platrec/mapping-report@1'")
        try:
            onto = doc.get("ontology", {})
            return cls(
                doc.get("platform_name", ""),
                tuple(MappedEntity(m["entity"], tuple(m["components"]), m["mechanism"], m.get("individual")) for m in doc["mapped"]),
                tuple(doc["unmapped"]),
                tuple(doc["overlooked_classes"]),
                tuple(suggestion_from_json(s) for s in doc.get("patch_suggestions", ())),
                tuple(doc.get("warnings", ())),
                OntologyRef(onto.get("name", ""), onto.get("version", ""), onto.get("hash", "")),
                doc.get("source_view_hash", ""),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise SchemaError("", f"malformed mapping report: {exc}") from None


def suggestion_to_json(s: PatchSuggestion) -> dict:
    return {
        "entity": s.entity,
        "display_name": s.display_name,
        "kind_hint": s.kind_hint,
        "suggested_class": s.suggested_class,
        "rationale": s.rationale,
        "additions": [
            {"individual": {"id": a.item.id, "class_id": a.item.class_id, "aliases": list(a.item.aliases)}, "rationale": a.rationale}
            for a in s.patch.additions
        ],
    }


def suggestion_from_json(doc: Mapping) -> PatchSuggestion:
    additions = tuple(
        PatchAddition(Individual(a["individual"]["id"], a["individual"]["class_id"], tuple(a["individual"]["aliases"])), a.get("rationale", ""))
        for a in doc.get("additions", ())
    )
    return PatchSuggestion(
        doc["entity"], doc.get("display_name", ""), doc.get("kind_hint"), doc.get("suggested_class"), doc.get("rationale", ""), OntologyPatch(additions)
    )


# ------------------------------------------------------------------- mapping


def validate_directives(v: SourceView, o: Ontology, d: MappingDirectives) -> list[str]:
    """Problems detectable before mapping: unknown entities, classes, relations, names."""
    problems = []
    entity_ids = set(v.ids())
    seen_entities: set[str] = set()
    names: set[str] = set()
    for i, em in enumerate(d.entity_maps):
        where = f"entity_maps[{i}]"
        if em.entity not in entity_ids:
            problems.append(f"{where}: entity {em.entity!r} is not in the source view")
        if em.entity in seen_entities:
            problems.append(f"{where}: entity {em.entity!r} has more than one directive")
        seen_entities.add(em.entity)
        for j, c in enumerate(em.components):
            if c.class_id not in o.class_map:
                problems.append(f"{where}.components[{j}]: class {c.class_id!r} is not in the ontology")
            if not is_identifier(c.name):
                problems.append(f"{where}.components[{j}]: component name {c.name!r} is not an identifier")
            if c.name in names:
                problems.append(f"{where}.components[{j}]: component name {c.name!r} is used twice")
            names.add(c.name)
        if em.whole is not None and em.whole in {c.name for c in em.components} and len(em.components) < 2:
            problems.append(f"{where}: partition of {em.whole!r} has no parts")
    for i, c in enumerate(d.connections):
        if c.relation not in o.relation_map:
            problems.append(f"connections[{i}]: relation kind {c.relation!r} is not in the ontology")
    return problems


def _individual_for(entity: SourceEntity, o: Ontology) -> IndividualHit | None:
    if entity.unknown:
        return None
    for term in entity.terms():
        hit = lookup(o, term)
        if isinstance(hit, IndividualHit):
            return hit
    return None


def _suggest(entity: SourceEntity, o: Ontology) -> PatchSuggestion:
    suggested = None
    if entity.kind_hint:
        hit = lookup(o, entity.kind_hint)
        if isinstance(hit, ClassHit):
            suggested = hit.class_id
        elif isinstance(hit, IndividualHit):
            suggested = hit.class_id
    status = "tagged unknown" if entity.unknown else "matches no ontology individual"
    rationale = f"source entity {entity.display_name!r} {status}"
    if entity.kind_hint:
        rationale += f"; analyst hint: {entity.kind_hint!r}"
    patch = OntologyPatch()
    if suggested is not None:
        aliases = tuple(a for a in (entity.display_name, *entity.aliases) if a.strip())
        patch = OntologyPatch.of(Individual(entity.id, suggested, aliases), rationale=rationale)
    return PatchSuggestion(entity.id, entity.display_name, entity.kind_hint, suggested, rationale, patch)


def _covered(components: Mapping[str, Component] | list, o: Ontology) -> set[str]:
    covered: set[str] = set()
    for cls in {c.class_id for c in components}:
        covered |= o.ancestors(cls)
    return covered


def coverage_scan(v: SourceView, o: Ontology, d: MappingDirectives) -> list[str]:
    """Classes with no mapped entity (directly or through a subclass); empty means full coverage."""
    covered: set[str] = set()
    entity_ids = set(v.ids())
    for em in d.entity_maps:
        if em.entity in entity_ids:
            for c in em.components:
                if c.class_id in o.class_map:
                    covered |= o.ancestors(c.class_id)
    for e in v.entities:
        if d.for_entity(e.id) is None:
            hit = _individual_for(e, o)
            if hit is not None:
                covered |= o.ancestors(hit.class_id)
    return sorted(c.id for c in o.classes if c.id not in covered)


def map_entities(v: SourceView, o: Ontology, d: MappingDirectives) -> tuple[tuple[Component, ...], MappingReport]:
    ensure_valid(o)
    problems = [p for p in validate_directives(v, o, d) if not p.startswith("connections[")]
    if problems:
        raise MappingError(problems)

    components: list[Component] = []
    mapped, unmapped, suggestions, warnings = [], [], [], []
    for entity in sorted(v.entities, key=lambda e: e.id):
        em = d.for_entity(entity.id)
        if em is not None:
            made = [Component(c.name, c.name, c.class_id, c.attributes, c.contexts, entity.id) for c in em.components]
            components += made
            mapped.append(MappedEntity(entity.id, tuple(c.id for c in made), "by-directive"))
            continue
        hit = _individual_for(entity, o)
        if hit is not None:
            if hit.warning:
                warnings.append(hit.warning)
            components.append(Component(entity.id, entity.display_name, hit.class_id, origin_entity=entity.id))
            mapped.append(MappedEntity(entity.id, (entity.id,), "by-individual", hit.individual_id))
            continue
        unmapped.append(entity.id)
        suggestions.append(_suggest(entity, o))

    by_id: dict[str, Component] = {}
    clashes = []
    for c in components:
        if c.id in by_id:
            clashes.append(f"component id {c.id!r} produced twice (entities {by_id[c.id].origin_entity!r}, {c.origin_entity!r})")
        by_id[c.id] = c
    for i, tag in enumerate(d.context_tags):
        comp = by_id.get(tag.component)
        if comp is None:
            clashes.append(f"context_tags[{i}]: component {tag.component!r} does not exist")
            continue
        contexts = dict(comp.contexts)
        contexts[tag.key] = tag.context
        by_id[tag.component] = Component(comp.id, comp.name, comp.class_id, comp.attributes, contexts, comp.origin_entity)
    if clashes:
        raise MappingError(clashes)

    final = tuple(sorted(by_id.values(), key=lambda c: c.id))
    covered = _covered(list(final), o)
    report = MappingReport(
        platform_name=v.platform_name,
        mapped=tuple(mapped),
        unmapped=tuple(unmapped),
        overlooked_classes=tuple(sorted(c.id for c in o.classes if c.id not in covered)),
        patch_suggestions=tuple(suggestions),
        warnings=tuple(warnings),
        ontology=OntologyRef(o.name, o.version, ontology_hash(o)),
        source_view_hash=source_view_hash(v),
    )
    return final, report


def _partition_kind(o: Ontology) -> str | None:
    for r in o.relation_kinds:
        if r.family == "implementation" and r.subkind == "partitioned":
            return r.id
    return None


def build_connections(components, o: Ontology, d: MappingDirectives) -> list[Connection]:
    """Validate declared connections and add the implied part-to-whole partition edges."""
    ids = {c.id for c in components}
    problems = []
    out: dict[str, Connection] = {}
    for i, decl in enumerate(d.connections):
        bad = [f"endpoint {end!r} is not a component" for end in (decl.source, decl.target) if end not in ids]
        if decl.relation not in o.relation_map:
            bad.append(f"relation kind {decl.relation!r} is not in the ontology")
        if bad:
            problems.append(f"connections[{i}] ({decl.source} -[{decl.relation}]-> {decl.target}): " + "; ".join(bad))
            continue
        conn = Connection(decl.source, decl.target, decl.relation, decl.note)
        if conn.id in out:
            problems.append(f"connections[{i}]: duplicate connection {conn.id!r}")
        out[conn.id] = conn

    partition_kind = _partition_kind(o)
    for i, em in enumerate(d.entity_maps):
        if em.whole is None:
            continue
        if em.whole not in ids:
            problems.append(f"entity_maps[{i}]: partitioned whole {em.whole!r} is not a component")
            continue
        if partition_kind is None:
            problems.append(f"entity_maps[{i}]: ontology declares no implementation/partitioned relation kind")
            continue
        for c in em.components:
            if c.name == em.whole or c.name not in ids:
                continue
            conn = Connection(c.name, em.whole, partition_kind, "partition")
            out.setdefault(conn.id, conn)
    if problems:
        raise MappingError(problems)
    return sorted(out.values(), key=lambda c: c.id)


def reconstruct(v: SourceView, o: Ontology, d: MappingDirectives) -> tuple[ComponentGraph, MappingReport]:
    """Coverage scan, entity mapping and connection building in one pass."""
    ensure_valid(o)
    problems = validate_directives(v, o, d)
    if problems:
        raise MappingError(problems)
    overlooked = coverage_scan(v, o, d)
    components, report = map_entities(v, o, d)
    connections = build_connections(components, o, d)
    graph = ComponentGraph(
        platform_name=v.platform_name,
        ontology=report.ontology,
        schema=schema_snapshot(o),
        components=components,
        connections=tuple(connections),
        source_view_hash=report.source_view_hash,
        directives_hash=directives_hash(d),
    )
    return graph, replace(report, overlooked_classes=tuple(overlooked))


def dumps_report(report: MappingReport) -> str:
    return pretty_dumps(report.to_json())
