"""Source views: the analyst's raw inventory of platform entities.

A known entity must cite at least one piece of evidence; an entity tagged
``unknown`` may not, and it is carried through mapping as unmapped rather
than dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import jsonschema

from ._canon import content_hash, pretty_dumps
from .errors import SchemaError, SourceViewError
from .ontology import normalize_term
from .plon import check_schema

SOURCE_VIEW_SCHEMA = {
    "type": "object",
    "required": ["platform_name", "entities"],
    "additionalProperties": False,
    "properties": {
        "platform_name": {"type": "string"},
        "notes": {"type": "string"},
        "entities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "display_name"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "display_name": {"type": "string"},
                    "aliases": {"type": "array", "items": {"type": "string"}},
                    "kind_hint": {"type": ["string", "null"]},
                    "evidence": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["document", "locator"],
                            "additionalProperties": False,
                            "properties": {
                                "document": {"type": "string", "minLength": 1},
                                "locator": {"type": "string"},
                            },
                        },
                    },
                    "unknown": {"type": "boolean"},
                },
            },
        },
    },
}
_VALIDATOR = jsonschema.Draft202012Validator(SOURCE_VIEW_SCHEMA)


@dataclass(frozen=True)
class EvidenceRef:
    document: str
    locator: str = ""


@dataclass(frozen=True)
class SourceEntity:
    id: str
    display_name: str
    aliases: tuple[str, ...] = ()
    kind_hint: str | None = None
    evidence: tuple[EvidenceRef, ...] = ()
    unknown: bool = False

    def terms(self) -> tuple[str, ...]:
        """Strings tried against the ontology, in priority order."""
        return (self.display_name, *self.aliases, self.id)


@dataclass(frozen=True)
class SourceView:
    platform_name: str
    entities: tuple[SourceEntity, ...] = ()
    notes: str = ""

    def entity(self, entity_id: str) -> SourceEntity:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KeyError(entity_id)

    def ids(self) -> list[str]:
        return [e.id for e in self.entities]


def validate_source_view(v: SourceView) -> list[str]:
    problems = []
    seen = set()
    for e in v.entities:
        if e.id in seen:
            problems.append(f"duplicate entity id {e.id!r}")
        seen.add(e.id)
        if not e.unknown and not e.evidence:
            problems.append(f"entity {e.id!r} is not tagged unknown but cites no evidence")
        for ev in e.evidence:
            if not ev.document:
                problems.append(f"entity {e.id!r} has evidence with an empty document")
    return problems


def load_source_view(document: Any) -> SourceView:
    """Build a validated :class:`SourceView` from its JSON form (dict or text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from None
    check_schema(document, _VALIDATOR)
    entities = tuple(
        SourceEntity(
            id=e["id"],
            display_name=e["display_name"],
            aliases=tuple(e.get("aliases", ())),
            kind_hint=e.get("kind_hint"),
            evidence=tuple(EvidenceRef(ev["document"], ev["locator"]) for ev in e.get("evidence", ())),
            unknown=e.get("unknown", False),
        )
        for e in document["entities"]
    )
    view = SourceView(document["platform_name"], entities, document.get("notes", ""))
    problems = validate_source_view(view)
    if problems:
        raise SourceViewError("; ".join(problems))
    return view


def source_view_to_json(v: SourceView) -> dict:
    doc: dict[str, Any] = {"platform_name": v.platform_name}
    if v.notes:
        doc["notes"] = v.notes
    entities = []
    for e in v.entities:
        item: dict[str, Any] = {"id": e.id, "display_name": e.display_name, "aliases": list(e.aliases)}
        if e.kind_hint is not None:
            item["kind_hint"] = e.kind_hint
        item["evidence"] = [{"document": ev.document, "locator": ev.locator} for ev in e.evidence]
        item["unknown"] = e.unknown
        entities.append(item)
    doc["entities"] = entities
    return doc


def dumps_source_view(v: SourceView) -> str:
    return pretty_dumps(source_view_to_json(v))


def source_view_hash(v: SourceView) -> str:
    return content_hash(source_view_to_json(v))


def read_source_view(path) -> SourceView:
    return load_source_view(Path(path).read_bytes().decode("utf-8"))


def normalize_view(v: SourceView) -> SourceView:
    """Replace each entity's aliases with the normalized forms of its name and aliases.

    Ids, display names and entity order are untouched; the operation is idempotent.
    """
    out = []
    for e in v.entities:
        forms = {normalize_term(t) for t in (e.display_name, *e.aliases)}
        forms.discard("")
        out.append(replace(e, aliases=tuple(sorted(forms))))
    return replace(v, entities=tuple(out))
