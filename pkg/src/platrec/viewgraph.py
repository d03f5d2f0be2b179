"""Component-and-connector graphs, viewpoint derivation, cross-context analysis.

A :class:`ComponentGraph` is self-describing: besides the ontology reference
(name, version, content hash) it embeds a schema snapshot holding the class
hierarchy and relation kinds, so views can be derived without the ontology.
"""

from __future__ import annotations

import fnmatch
import heapq
import json
from collections import defaultdict, deque
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping

from ._canon import content_hash, pretty_dumps
from .errors import SchemaError, ViewError
from .ontology import (
    FAMILIES,
    SUBKINDS,
    ComponentAttributes,
    Ontology,
    OntologyClass,
    RelationKind,
)
from .plon import ontology_hash

DEFAULT_CONTEXT_KEY = "context"
GRAPH_FORMAT = "platrec/graph@1"
VIEW_FORMAT = "platrec/view@1"
CLOSURES = ("seeds-only", "neighbors", "reachable", "undirected-reach")


def _pairs(mapping) -> tuple[tuple[str, str], ...]:
    if isinstance(mapping, Mapping):
        mapping = mapping.items()
    return tuple(sorted((str(k), str(v)) for k, v in mapping))


@dataclass(frozen=True)
class Component:
    id: str
    name: str
    class_id: str
    attributes: ComponentAttributes = ComponentAttributes()
    contexts: tuple[tuple[str, str], ...] = ()
    origin_entity: str = ""

    def __post_init__(self):
        object.__setattr__(self, "contexts", _pairs(self.contexts))

    def context(self, key: str = DEFAULT_CONTEXT_KEY) -> str | None:
        return dict(self.contexts).get(key)


@dataclass(frozen=True)
class Connection:
    source: str
    target: str
    relation_kind: str
    note: str = ""

    @property
    def id(self) -> str:
        return f"{self.source} -[{self.relation_kind}]-> {self.target}"


@dataclass(frozen=True)
class OntologyRef:
    name: str = ""
    version: str = ""
    hash: str = ""

    @classmethod
    def of(cls, o: Ontology) -> "OntologyRef":
        return cls(o.name, o.version, ontology_hash(o))


def schema_snapshot(o: Ontology) -> Ontology:
    """Hierarchy and relation kinds of ``o`` without descriptions or individuals."""
    return Ontology(
        o.name,
        o.version,
        tuple(OntologyClass(c.id, c.name, c.parents) for c in o.classes),
        o.relation_kinds,
    )


@dataclass(frozen=True)
class ComponentGraph:
    platform_name: str
    ontology: OntologyRef = OntologyRef()
    schema: Ontology = Ontology()
    components: tuple[Component, ...] = ()
    connections: tuple[Connection, ...] = ()
    source_view_hash: str = ""
    directives_hash: str = ""

    def __post_init__(self):
        rel = self.schema.relation_map
        canon = []
        for c in self.connections:
            kind = rel.get(c.relation_kind)
            if kind is not None and not kind.directed and c.target < c.source:
                c = replace(c, source=c.target, target=c.source)
            canon.append(c)
        object.__setattr__(self, "components", tuple(sorted(self.components, key=lambda c: c.id)))
        object.__setattr__(self, "connections", tuple(sorted(canon, key=lambda c: c.id)))

    @cached_property
    def component_map(self) -> dict[str, Component]:
        return {c.id: c for c in self.components}

    @cached_property
    def connection_map(self) -> dict[str, Connection]:
        return {c.id: c for c in self.connections}

    def relation(self, connection: Connection) -> RelationKind:
        return self.schema.relation_map[connection.relation_kind]

    def class_lineage(self, class_id: str) -> frozenset[str]:
        return self.schema.ancestors(class_id)

    def in_subtree(self, component: Component, class_id: str) -> bool:
        return class_id in self.class_lineage(component.class_id)

    def context_labels(self, key: str = DEFAULT_CONTEXT_KEY) -> set[str]:
        return {label for c in self.components if (label := c.context(key)) is not None}

    @cached_property
    def hash(self) -> str:
        return content_hash(graph_to_json(self))

    def subgraph(self, component_ids: Iterable[str], connection_ids: Iterable[str]) -> "ComponentGraph":
        keep = set(component_ids)
        edges = set(connection_ids)
        return replace(
            self,
            components=tuple(c for c in self.components if c.id in keep),
            connections=tuple(c for c in self.connections if c.id in edges),
        )


def validate_graph(g: ComponentGraph) -> list[str]:
    problems = []
    seen: set[str] = set()
    for c in g.components:
        if c.id in seen:
            problems.append(f"duplicate component id {c.id!r}")
        seen.add(c.id)
        if c.class_id not in g.schema.class_map:
            problems.append(f"component {c.id!r} has unknown class {c.class_id!r}")
    edge_ids: set[str] = set()
    for e in g.connections:
        if e.id in edge_ids:
            problems.append(f"duplicate connection {e.id!r}")
        edge_ids.add(e.id)
        for end in (e.source, e.target):
            if end not in seen:
                problems.append(f"connection {e.id!r} has dangling endpoint {end!r}")
        if e.relation_kind not in g.schema.relation_map:
            problems.append(f"connection {e.id!r} has unknown relation kind {e.relation_kind!r}")
    return problems


# ------------------------------------------------------------------ JSON I/O


def _component_json(c: Component) -> dict:
    return {
        "id": c.id,
        "name": c.name,
        "class_id": c.class_id,
        "attributes": c.attributes.to_dict(),
        "context": dict(c.contexts),
        "origin_entity": c.origin_entity,
    }


def _connection_json(e: Connection) -> dict:
    return {"from": e.source, "to": e.target, "relation_kind": e.relation_kind, "note": e.note}


def graph_to_json(g: ComponentGraph) -> dict:
    return {
        "format": GRAPH_FORMAT,
        "platform_name": g.platform_name,
        "ontology": {"name": g.ontology.name, "version": g.ontology.version, "hash": g.ontology.hash},
        "provenance": {"source_view_hash": g.source_view_hash, "directives_hash": g.directives_hash},
        "schema": {
            "classes": [{"id": c.id, "name": c.name, "parents": list(c.parents)} for c in g.schema.classes],
            "relation_kinds": [
                {"id": r.id, "family": r.family, "subkind": r.subkind, "directed": r.directed}
                for r in g.schema.relation_kinds
            ],
        },
        "components": [_component_json(c) for c in g.components],
        "connections": [_connection_json(e) for e in g.connections],
    }


def _get(doc: Mapping, key: str, path: str, kind=None):
    if not isinstance(doc, Mapping) or key not in doc:
        raise SchemaError(path, f"missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}" if path else key, f"expected {getattr(kind, '__name__', kind)}")
    return value


def graph_from_json(doc: Any) -> ComponentGraph:
    if _get(doc, "format", "") != GRAPH_FORMAT:
        raise SchemaError("format", f"expected {GRAPH_FORMAT!r}")
    onto = _get(doc, "ontology", "", dict)
    prov = _get(doc, "provenance", "", dict)
    schema = _get(doc, "schema", "", dict)
    classes = []
    for i, c in enumerate(_get(schema, "classes", "schema", list)):
        path = f"schema.classes[{i}]"
        classes.append(OntologyClass(_get(c, "id", path, str), _get(c, "name", path, str), tuple(_get(c, "parents", path, list))))
    relations = []
    for i, r in enumerate(_get(schema, "relation_kinds", "schema", list)):
        path = f"schema.relation_kinds[{i}]"
        relations.append(
            RelationKind(
                _get(r, "id", path, str), _get(r, "family", path, str), _get(r, "subkind", path, str), _get(r, "directed", path, bool)
            )
        )
    components = []
    for i, c in enumerate(_get(doc, "components", "", list)):
        path = f"components[{i}]"
        attrs = _get(c, "attributes", path, dict)
        try:
            attributes = ComponentAttributes(**attrs)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}.attributes", str(exc)) from None
        components.append(
            Component(
                _get(c, "id", path, str),
                _get(c, "name", path, str),
                _get(c, "class_id", path, str),
                attributes,
                _get(c, "context", path, dict),
                _get(c, "origin_entity", path, str),
            )
        )
    connections = []
    for i, e in enumerate(_get(doc, "connections", "", list)):
        path = f"connections[{i}]"
        connections.append(
            Connection(_get(e, "from", path, str), _get(e, "to", path, str), _get(e, "relation_kind", path, str), _get(e, "note", path, str))
        )
    g = ComponentGraph(
        _get(doc, "platform_name", "", str),
        OntologyRef(_get(onto, "name", "ontology", str), _get(onto, "version", "ontology", str), _get(onto, "hash", "ontology", str)),
        Ontology(onto["name"], onto["version"], tuple(classes), tuple(relations)),
        tuple(components),
        tuple(connections),
        _get(prov, "source_view_hash", "provenance", str),
        _get(prov, "directives_hash", "provenance", str),
    )
    problems = validate_graph(g)
    if problems:
        raise ViewError("invalid component graph: " + "; ".join(problems))
    return g


def dumps_graph(g: ComponentGraph) -> str:
    return pretty_dumps(graph_to_json(g))


def read_graph(path) -> ComponentGraph:
    return graph_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


# ------------------------------------------------------------------ viewpoint


@dataclass(frozen=True)
class ViewpointSpec:
    """Concern-driven selection: seed selectors, a relation filter, and a closure rule.

    Seeds are the components matching every selector kind that is present
    (alternatives within one kind are OR-ed).  With no selectors every
    component is a seed.  The relation filter likewise ANDs its three
    criteria (families, subkinds, relation kind ids).
    """

    name: str
    concern: str = ""
    classes: tuple[str, ...] = ()
    name_patterns: tuple[str, ...] = ()
    attributes: tuple[tuple[str, str], ...] = ()
    contexts: tuple[tuple[str, str], ...] = ()
    families: tuple[str, ...] = ()
    subkinds: tuple[str, ...] = ()
    relations: tuple[str, ...] = ()
    closure: str = "seeds-only"
    hops: int = 1

    def __post_init__(self):
        for name in ("classes", "name_patterns", "families", "subkinds", "relations"):
            object.__setattr__(self, name, tuple(sorted(set(getattr(self, name)))))
        object.__setattr__(self, "attributes", _pairs(self.attributes))
        object.__setattr__(self, "contexts", _pairs(self.contexts))

    @property
    def has_selectors(self) -> bool:
        return bool(self.classes or self.name_patterns or self.attributes or self.contexts)

    @property
    def has_filter(self) -> bool:
        return bool(self.families or self.subkinds or self.relations)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "concern": self.concern,
            "selectors": {
                "classes": list(self.classes),
                "name_patterns": list(self.name_patterns),
                "attributes": dict(self.attributes),
                "contexts": dict(self.contexts),
            },
            "relation_filter": {
                "families": list(self.families),
                "subkinds": list(self.subkinds),
                "relations": list(self.relations),
            },
            "closure": {"mode": self.closure, "hops": self.hops},
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ViewpointSpec":
        sel = doc.get("selectors", {}) or {}
        flt = doc.get("relation_filter", {}) or {}
        clo = doc.get("closure", {"mode": "seeds-only"})
        if isinstance(clo, str):
            clo = {"mode": clo}
        if not isinstance(doc.get("name"), str) or not doc["name"]:
            raise SchemaError("name", "viewpoint name must be a non-empty string")
        try:
            spec = cls(
                name=doc["name"],
                concern=doc.get("concern", ""),
                classes=tuple(sel.get("classes", ())),
                name_patterns=tuple(sel.get("name_patterns", ())),
                attributes=sel.get("attributes", {}),
                contexts=sel.get("contexts", {}),
                families=tuple(flt.get("families", ())),
                subkinds=tuple(flt.get("subkinds", ())),
                relations=tuple(flt.get("relations", ())),
                closure=clo.get("mode", "seeds-only"),
                hops=int(clo.get("hops", 1)),
            )
        except (TypeError, AttributeError, ValueError) as exc:
            raise SchemaError("", f"malformed viewpoint spec: {exc}") from None
        return spec


def check_spec(g: ComponentGraph, s: ViewpointSpec) -> list[str]:
    problems = []
    if not (s.has_selectors or s.has_filter):
        problems.append("viewpoint needs at least one selector or relation filter")
    if s.closure not in CLOSURES:
        problems.append(f"unknown closure {s.closure!r}")
    if s.closure == "neighbors" and s.hops < 0:
        problems.append("neighbors closure needs hops >= 0")
    for cid in s.classes:
        if cid not in g.schema.class_map:
            problems.append(f"unknown class {cid!r}")
    for fam in s.families:
        if fam not in FAMILIES:
            problems.append(f"unknown relation family {fam!r}")
    known_subkinds = {sk for values in SUBKINDS.values() for sk in values}
    known_subkinds |= {r.subkind for r in g.schema.relation_kinds}
    for sk in s.subkinds:
        if sk not in known_subkinds:
            problems.append(f"unknown relation subkind {sk!r}")
    for rid in s.relations:
        if rid not in g.schema.relation_map:
            problems.append(f"unknown relation kind {rid!r}")
    for key, _ in s.attributes:
        if key not in ("implementation", "source_status", "trust_status"):
            problems.append(f"unknown attribute {key!r}")
    return problems


def _is_seed(g: ComponentGraph, s: ViewpointSpec, c: Component) -> bool:
    if s.classes and not any(g.in_subtree(c, cid) for cid in s.classes):
        return False
    if s.name_patterns:
        names = (c.id.casefold(), c.name.casefold())
        if not any(fnmatch.fnmatchcase(n, p.casefold()) for p in s.name_patterns for n in names):
            return False
    if s.attributes:
        attrs = c.attributes.to_dict()
        wanted = defaultdict(set)
        for key, value in s.attributes:
            wanted[key].add(value)
        if not all(attrs[key] in values for key, values in wanted.items()):
            return False
    if s.contexts:
        wanted = defaultdict(set)
        for key, value in s.contexts:
            wanted[key].add(value)
        if not all(c.context(key) in values for key, values in wanted.items()):
            return False
    return True


def passes_filter(g: ComponentGraph, s: ViewpointSpec, e: Connection) -> bool:
    kind = g.relation(e)
    if s.families and kind.family not in s.families:
        return False
    if s.subkinds and kind.subkind not in s.subkinds:
        return False
    if s.relations and kind.id not in s.relations:
        return False
    return True


def topological_order(ids: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[str]:
    """Kahn's algorithm with smallest-id tie-breaking; cycles are broken by smallest id."""
    ids = set(ids)
    succ = defaultdict(set)
    indeg = {i: 0 for i in ids}
    for a, b in edges:
        if a in ids and b in ids and a != b and b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    ready = [i for i, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    done: list[str] = []
    placed: set[str] = set()
    while len(done) < len(ids):
        if not ready:
            stuck = min(i for i in ids if i not in placed)
            indeg[stuck] = 0
            ready = [stuck]
        node = heapq.heappop(ready)
        if node in placed:
            continue
        placed.add(node)
        done.append(node)
        for nxt in sorted(succ[node]):
            if nxt in placed:
                continue
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(ready, nxt)
    return done


@dataclass(frozen=True)
class TargetView:
    spec: ViewpointSpec
    graph: ComponentGraph  # the induced subgraph
    component_order: tuple[str, ...] = ()
    parent_hash: str = ""
    derived_at: str = ""

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def component_ids(self) -> tuple[str, ...]:
        return self.component_order

    @property
    def connection_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.graph.connections)

    def components(self) -> list[Component]:
        return [self.graph.component_map[i] for i in self.component_order]


def derive_view(g: ComponentGraph, s: ViewpointSpec, timestamp: str | None = None) -> TargetView:
    """Select seeds, expand them per the closure rule over filtered relations, induce the subgraph."""
    problems = check_spec(g, s)
    if problems:
        raise ViewError("; ".join(problems))
    seeds = {c.id for c in g.components if _is_seed(g, s, c)}
    allowed = [e for e in g.connections if passes_filter(g, s, e)]

    forward = defaultdict(set)
    both = defaultdict(set)
    for e in allowed:
        forward[e.source].add(e.target)
        both[e.source].add(e.target)
        both[e.target].add(e.source)
        if not g.relation(e).directed:
            forward[e.target].add(e.source)

    if s.closure == "seeds-only":
        included = set(seeds)
    else:
        adjacency = forward if s.closure == "reachable" else both
        limit = s.hops if s.closure == "neighbors" else None
        dist = {c: 0 for c in seeds}
        queue = deque(sorted(seeds))
        while queue:
            node = queue.popleft()
            if limit is not None and dist[node] >= limit:
                continue
            for nxt in sorted(adjacency[node]):
                if nxt not in dist:
                    dist[nxt] = dist[node] + 1
                    queue.append(nxt)
        included = set(dist)

    edges = [e for e in allowed if e.source in included and e.target in included]
    order = topological_order(
        included, [(e.source, e.target) for e in edges if g.relation(e).directed]
    )
    sub = g.subgraph(included, (e.id for e in edges))
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    return TargetView(s, sub, tuple(order), g.hash, timestamp)


def view_to_json(v: TargetView) -> dict:
    return {
        "format": VIEW_FORMAT,
        "name": v.name,
        "spec": v.spec.to_json(),
        "parent_graph_hash": v.parent_hash,
        "derived_at": v.derived_at,
        "components": list(v.component_order),
        "connections": list(v.connection_ids),
        "subgraph": graph_to_json(v.graph),
    }


def view_from_json(doc: Any) -> TargetView:
    if _get(doc, "format", "") != VIEW_FORMAT:
        raise SchemaError("format", f"expected {VIEW_FORMAT!r}")
    spec = ViewpointSpec.from_json(_get(doc, "spec", "", dict))
    try:
        sub = graph_from_json(_get(doc, "subgraph", "", dict))
    except SchemaError as exc:
        raise SchemaError(f"subgraph.{exc.path}" if exc.path else "subgraph", str(exc)) from None
    order = tuple(_get(doc, "components", "", list))
    if set(order) != set(sub.component_map) or len(order) != len(sub.components):
        raise SchemaError("components", "component list does not match the embedded subgraph")
    if list(_get(doc, "connections", "", list)) != [e.id for e in sub.connections]:
        raise SchemaError("connections", "connection list does not match the embedded subgraph")
    return TargetView(spec, sub, order, _get(doc, "parent_graph_hash", "", str), _get(doc, "derived_at", "", str))


def dumps_view(v: TargetView) -> str:
    return pretty_dumps(view_to_json(v))


# -------------------------------------------------------------- cross context


@dataclass(frozen=True)
class CrossEdge:
    connection: Connection
    relation_label: str
    source_context: str
    target_context: str


@dataclass(frozen=True)
class CrossContextReport:
    context_key: str
    privileged: str
    privileged_to_other: tuple[CrossEdge, ...] = ()
    other_to_privileged: tuple[CrossEdge, ...] = ()
    intra_context: int = 0
    unlabeled: int = 0
    lateral: int = 0  # both endpoints labeled, different, neither privileged
    graph_hash: str = ""
    platform_name: str = ""

    @property
    def cross_count(self) -> int:
        return len(self.privileged_to_other) + len(self.other_to_privileged)

    def to_json(self) -> dict:
        def edges(items):
            return [
                {**_connection_json(x.connection), "relation": x.relation_label, "from_context": x.source_context, "to_context": x.target_context}
                for x in items
            ]

        return {
            "format": "platrec/cross-context@1",
            "platform_name": self.platform_name,
            "graph_hash": self.graph_hash,
            "context_key": self.context_key,
            "privileged": self.privileged,
            "privileged_to_other": edges(self.privileged_to_other),
            "other_to_privileged": edges(self.other_to_privileged),
            "intra_context": self.intra_context,
            "unlabeled": self.unlabeled,
            "lateral": self.lateral,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "CrossContextReport":
        if _get(doc, "format", "") != "platrec/cross-context@1":
            raise SchemaError("format", "expected 'platrec/cross-context@1'")

        def edges(key):
            out = []
            for i, item in enumerate(_get(doc, key, "", list)):
                where = f"{key}[{i}]"
                c = Connection(
                    _get(item, "from", where, str), _get(item, "to", where, str),
                    _get(item, "relation_kind", where, str), item.get("note", ""),
                )
                out.append(CrossEdge(c, _get(item, "relation", where, str),
                                     _get(item, "from_context", where, str), _get(item, "to_context", where, str)))
            return tuple(out)

        return cls(
            context_key=_get(doc, "context_key", "", str),
            privileged=_get(doc, "privileged", "", str),
            privileged_to_other=edges("privileged_to_other"),
            other_to_privileged=edges("other_to_privileged"),
            intra_context=_get(doc, "intra_context", "", int),
            unlabeled=_get(doc, "unlabeled", "", int),
            lateral=_get(doc, "lateral", "", int),
            graph_hash=_get(doc, "graph_hash", "", str),
            platform_name=_get(doc, "platform_name", "", str),
        )


def cross_context_report(
    g: ComponentGraph, privileged_context: str, context_key: str = DEFAULT_CONTEXT_KEY
) -> CrossContextReport:
    """Bucket every connection by the contexts of its endpoints.

    Undirected connections are classified by their stored orientation.
    """
    labels = g.context_labels(context_key)
    if privileged_context not in labels:
        raise ViewError(f"context {privileged_context!r} does not occur under key {context_key!r}")
    p_to_o, o_to_p = [], []
    intra = unlabeled = lateral = 0
    comps = g.component_map
    for e in g.connections:
        a = comps[e.source].context(context_key)
        b = comps[e.target].context(context_key)
        if a is None or b is None:
            unlabeled += 1
        elif a == b:
            intra += 1
        elif a == privileged_context:
            p_to_o.append(CrossEdge(e, g.relation(e).label, a, b))
        elif b == privileged_context:
            o_to_p.append(CrossEdge(e, g.relation(e).label, a, b))
        else:
            lateral += 1
    return CrossContextReport(
        context_key, privileged_context, tuple(p_to_o), tuple(o_to_p), intra, unlabeled, lateral, g.hash, g.platform_name
    )
