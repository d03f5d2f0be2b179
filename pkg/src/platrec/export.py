"""Deterministic DOT, GraphML and plain-text rendering."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Union

from .mapper import MappingReport
from .metrics import NONCONFORMANT, ComparisonReport, MetricsReport, display, metrics_table, truncate2
from .viewgraph import DEFAULT_CONTEXT_KEY, Component, ComponentGraph, CrossContextReport, TargetView

FORMATS = ("dot", "graphml", "report")
CLUSTERINGS = ("context", "class-subtree", "none")

EDGE_STYLE = {"control": "solid", "sequential": "dashed", "implementation": "dotted"}
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


@dataclass(frozen=True)
class RenderOptions:
    format: str = "dot"
    cluster_by: str = "none"
    include_legend: bool = False
    context_key: str = DEFAULT_CONTEXT_KEY

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.cluster_by not in CLUSTERINGS:
            raise ValueError(f"cluster_by must be one of {CLUSTERINGS}")


def _graph_of(g: Union[ComponentGraph, TargetView]) -> tuple[ComponentGraph, str]:
    if isinstance(g, TargetView):
        return g.graph, f"{g.graph.platform_name}:{g.name}"
    return g, g.platform_name


def _root_class(g: ComponentGraph, c: Component) -> str:
    roots = sorted(a for a in g.class_lineage(c.class_id) if not g.schema.class_map[a].parents)
    return roots[0] if roots else c.class_id


def cluster_of(g: ComponentGraph, c: Component, opt: RenderOptions) -> str | None:
    if opt.cluster_by == "context":
        return c.context(opt.context_key)
    if opt.cluster_by == "class-subtree":
        return _root_class(g, c)
    return None


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(g: Union[ComponentGraph, TargetView], opt: RenderOptions = RenderOptions()) -> str:
    graph, title = _graph_of(g)
    lines = [f"digraph {_q(title)} {{"]
    graph_attrs = ["rankdir=LR"]
    if opt.include_legend:
        legend = ", ".join(f"{fam}: {style}" for fam, style in EDGE_STYLE.items())
        graph_attrs.append(f"label={_q('edge styles - ' + legend)}")
    lines.append(f"  graph [{', '.join(graph_attrs)}];")
    lines.append("  node [shape=box];")

    groups: dict[str | None, list[Component]] = defaultdict(list)
    for c in graph.components:
        groups[cluster_of(graph, c, opt)].append(c)

    def node_line(c: Component, indent: str) -> str:
        label = f"{c.name}\n<{c.class_id}>"
        return f"{indent}{_q(c.id)} [label={_q(label)}];"

    for name in sorted(k for k in groups if k is not None):
        lines.append(f"  subgraph {_q('cluster_' + name)} {{")
        lines.append(f"    label={_q(name)};")
        lines += [node_line(c, "    ") for c in groups[name]]
        lines.append("  }")
    lines += [node_line(c, "  ") for c in groups.get(None, ())]

    for e in graph.connections:
        kind = graph.relation(e)
        attrs = [f"label={_q(kind.label)}", f"style={EDGE_STYLE[kind.family]}"]
        if not kind.directed:
            attrs.append("dir=none")
        lines.append(f"  {_q(e.source)} -> {_q(e.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# XML 1.0 cannot carry these code points at all, not even as character references.
_XML_ILLEGAL = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ufffe\uffff\ud800-\udfff]")


def xml_safe(text: str) -> str:
    """Replace code points XML 1.0 forbids with U+FFFD."""
    return _XML_ILLEGAL.sub("\ufffd", text)


NODE_KEYS = ("name", "class_id", "implementation", "source_status", "trust_status", "context", "contexts", "origin_entity", "cluster")
EDGE_KEYS = ("relation_kind", "family", "subkind", "directed", "note")


def export_graphml(g: Union[ComponentGraph, TargetView], opt: RenderOptions = RenderOptions(format="graphml")) -> str:
    graph, title = _graph_of(g)
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(f"{{{GRAPHML_NS}}}graphml")
    for key in NODE_KEYS:
        ET.SubElement(root, f"{{{GRAPHML_NS}}}key", {"id": f"n_{key}", "for": "node", "attr.name": key, "attr.type": "string"})
    for key in EDGE_KEYS:
        kind = "boolean" if key == "directed" else "string"
        ET.SubElement(root, f"{{{GRAPHML_NS}}}key", {"id": f"e_{key}", "for": "edge", "attr.name": key, "attr.type": kind})
    body = ET.SubElement(root, f"{{{GRAPHML_NS}}}graph", {"id": xml_safe(title), "edgedefault": "directed"})

    def data(parent, key, value):
        el = ET.SubElement(parent, f"{{{GRAPHML_NS}}}data", {"key": key})
        el.text = xml_safe(value)

    for c in graph.components:
        node = ET.SubElement(body, f"{{{GRAPHML_NS}}}node", {"id": c.id})
        values = {
            "name": c.name,
            "class_id": c.class_id,
            **c.attributes.to_dict(),
            "context": c.context(opt.context_key),
            "contexts": ";".join(f"{k}={v}" for k, v in c.contexts) or None,
            "origin_entity": c.origin_entity or None,
            "cluster": cluster_of(graph, c, opt),
        }
        for key in NODE_KEYS:
            if values[key] is not None:
                data(node, f"n_{key}", values[key])
    for i, e in enumerate(graph.connections):
        kind = graph.relation(e)
        edge = ET.SubElement(body, f"{{{GRAPHML_NS}}}edge", {"id": f"e{i}", "source": e.source, "target": e.target})
        data(edge, "e_relation_kind", e.relation_kind)
        data(edge, "e_family", kind.family)
        data(edge, "e_subkind", kind.subkind)
        data(edge, "e_directed", "true" if kind.directed else "false")
        if e.note:
            data(edge, "e_note", e.note)
    ET.indent(root, space="  ")
    # a literal CR would be normalized to LF by any XML reader
    body_text = ET.tostring(root, encoding="unicode").replace("\r", "&#13;")
    return "<?xml version='1.0' encoding='utf-8'?>\n" + body_text + "\n"


# -------------------------------------------------------------------- reports


def _section(title: str, body: list[str]) -> list[str]:
    return [f"== {title} ==", *body, ""]


def _metrics_report(m: MetricsReport) -> list[str]:
    out = _section(
        "Summary",
        [
            f"ontology: {m.ontology_name or '(unnamed)'} {m.ontology_version}".rstrip(),
            f"variant: {m.variant}",
            f"total score: {truncate2(m.total_score)}",
        ],
    )
    out += _section("Details", metrics_table([m], [m.ontology_name or "value"]).splitlines())
    out += _section(
        "Provenance",
        [f"ontology hash: {m.ontology_hash}", f"unscored, nonconformant: {', '.join(NONCONFORMANT)}"],
    )
    return out


def _comparison_report(r: ComparisonReport) -> list[str]:
    out = _section(
        "Summary",
        [
            f"{r.label_a}: {truncate2(r.a.total_score)}",
            f"{r.label_b}: {truncate2(r.b.total_score)}",
            f"score delta ({r.label_a} - {r.label_b}): {truncate2(r.score_delta)}",
        ],
    )
    details = metrics_table([r.a, r.b], [r.label_a, r.label_b]).splitlines()
    details.append("")
    details += [f"delta {name}: {display(value)}" for name, value in r.deltas.items()]
    out += _section("Details", details)
    out += _section("Provenance", [f"{r.label_a} hash: {r.a.ontology_hash}", f"{r.label_b} hash: {r.b.ontology_hash}"])
    return out


def _mapping_report(r: MappingReport) -> list[str]:
    by_mech = Counter(m.mechanism for m in r.mapped)
    n_components = sum(len(m.components) for m in r.mapped)
    out = _section(
        "Summary",
        [
            f"platform: {r.platform_name}",
            f"entities: {len(r.mapped) + len(r.unmapped)}",
            f"mapped: {len(r.mapped)} (by-directive {by_mech['by-directive']}, by-individual {by_mech['by-individual']})",
            f"components: {n_components}",
            f"unmapped: {len(r.unmapped)}",
            f"overlooked classes: {len(r.overlooked_classes)}",
            f"patch suggestions: {len(r.patch_suggestions)}",
        ],
    )
    details = ["mapped entities:"]
    for m in r.mapped:
        via = f" via {m.individual}" if m.individual else ""
        details.append(f"  {m.entity} -> {', '.join(m.components)} [{m.mechanism}{via}]")
    details.append("unmapped entities:")
    details += [f"  {e}" for e in r.unmapped]
    details.append("patch suggestions:")
    for s in r.patch_suggestions:
        details.append(f"  {s.entity}: class {s.suggested_class or '?'} ({s.rationale})")
    details.append("overlooked classes:")
    details += [f"  {c}" for c in r.overlooked_classes]
    if r.warnings:
        details.append("warnings:")
        details += [f"  {w}" for w in r.warnings]
    out += _section("Details", details)
    out += _section(
        "Provenance",
        [
            f"ontology: {r.ontology.name} {r.ontology.version}".rstrip(),
            f"ontology hash: {r.ontology.hash}",
            f"source view hash: {r.source_view_hash}",
        ],
    )
    return out


def _cross_report(r: CrossContextReport) -> list[str]:
    out = _section(
        "Summary",
        [
            f"platform: {r.platform_name}",
            f"context key: {r.context_key}; privileged context: {r.privileged}",
            f"cross-context edges: {r.cross_count}",
            f"  privileged -> other: {len(r.privileged_to_other)}",
            f"  other -> privileged: {len(r.other_to_privileged)}",
            f"intra-context edges: {r.intra_context}",
            f"edges with an unlabeled endpoint: {r.unlabeled}",
            f"lateral edges (neither endpoint privileged): {r.lateral}",
        ],
    )

    def rows(items):
        return [
            f"  {x.connection.source} -> {x.connection.target} [{x.relation_label}] ({x.source_context} -> {x.target_context})"
            + (f" - {x.connection.note}" if x.connection.note else "")
            for x in items
        ] or ["  (none)"]

    details = [f"privileged ({r.privileged}) -> other:", *rows(r.privileged_to_other)]
    details += [f"other -> privileged ({r.privileged}):", *rows(r.other_to_privileged)]
    out += _section("Details", details)
    out += _section("Provenance", [f"graph hash: {r.graph_hash}"])
    return out


def _graph_report(g: ComponentGraph, view: TargetView | None = None) -> list[str]:
    families = Counter(g.relation(e).family for e in g.connections)
    summary = [f"platform: {g.platform_name}"]
    if view is not None:
        summary.append(f"view: {view.name} ({view.spec.concern})" if view.spec.concern else f"view: {view.name}")
    summary += [
        f"components: {len(g.components)}",
        f"connections: {len(g.connections)} "
        + "(" + ", ".join(f"{fam} {families.get(fam, 0)}" for fam in EDGE_STYLE) + ")",
    ]
    order = view.component_order if view is not None else [c.id for c in g.components]
    details = ["components:"]
    for cid in order:
        c = g.component_map[cid]
        ctx = ", ".join(f"{k}={v}" for k, v in c.contexts)
        details.append(f"  {c.id} <{c.class_id}>" + (f" [{ctx}]" if ctx else ""))
    details.append("connections:")
    details += [f"  {e.source} -> {e.target} [{g.relation(e).label}]" for e in g.connections]
    prov = [f"ontology: {g.ontology.name} {g.ontology.version}".rstrip(), f"ontology hash: {g.ontology.hash}"]
    prov += [f"source view hash: {g.source_view_hash}", f"directives hash: {g.directives_hash}"]
    if view is not None:
        prov += [f"parent graph hash: {view.parent_hash}", f"derived at: {view.derived_at}"]
    return _section("Summary", summary) + _section("Details", details) + _section("Provenance", prov)


def render_report(item) -> str:
    """Plain-text report with Summary, Details and Provenance sections, in that order."""
    if isinstance(item, MetricsReport):
        lines = _metrics_report(item)
    elif isinstance(item, ComparisonReport):
        lines = _comparison_report(item)
    elif isinstance(item, MappingReport):
        lines = _mapping_report(item)
    elif isinstance(item, CrossContextReport):
        lines = _cross_report(item)
    elif isinstance(item, TargetView):
        lines = _graph_report(item.graph, item)
    elif isinstance(item, ComponentGraph):
        lines = _graph_report(item)
    else:
        raise TypeError(f"cannot render {type(item).__name__}")
    return "\n".join(lines).rstrip("\n") + "\n"


def export(item, opt: RenderOptions) -> str:
    if opt.format == "dot":
        return export_dot(item, opt)
    if opt.format == "graphml":
        return export_graphml(item, opt)
    return render_report(item)
