"""Command-line front end.

Exit codes: 0 success, 1 validation or semantic error, 2 parse or schema
error, 3 I/O error.  Results go to standard output (or ``--out``); progress
text goes to standard error and is silenced by ``--quiet``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from ._canon import pretty_dumps
from .catalog import BUNDLES, export_fixture, list_fixtures
from .errors import InputFormatError, PlonSyntaxError, SchemaError, SemanticError
from .export import CLUSTERINGS, FORMATS, RenderOptions, export
from .mapper import MappingReport, dumps_report, read_directives, reconstruct, suggestion_to_json
from .metrics import VARIANTS, ComparisonReport, MetricsReport, compare_ontologies, compute_metrics, metrics_table
from .ontology import ensure_valid, hierarchy_stats, validate_ontology
from .plon import (
    dumps_ontology_json,
    load_ontology,
    ontology_from_json,
    ontology_hash,
    parse_plon_unchecked,
    serialize_plon,
)
from .repository import default_repo, repo_list, repo_load, repo_store
from .sourceview import read_source_view
from .viewgraph import (
    DEFAULT_CONTEXT_KEY,
    GRAPH_FORMAT,
    VIEW_FORMAT,
    ComponentGraph,
    CrossContextReport,
    ViewpointSpec,
    cross_context_report,
    derive_view,
    dumps_graph,
    dumps_view,
    graph_from_json,
    view_from_json,
)

EXIT_OK, EXIT_SEMANTIC, EXIT_FORMAT, EXIT_IO = 0, 1, 2, 3


class _Console:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def progress(self, text: str) -> None:
        if not self.quiet:
            print(text, file=sys.stderr)


def _read_json(path) -> object:
    text = Path(path).read_bytes().decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _emit(text: str, out: str | None, console: _Console) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
        console.progress(f"wrote {out}")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- subcommands


def cmd_ontology_validate(args, console) -> int:
    path = Path(args.file)
    if path.suffix == ".json":
        ontology_from_json(_read_json(path))  # raises on any problem
        violations = []
    else:
        o = parse_plon_unchecked(path.read_bytes())
        violations = list(validate_ontology(o))
    if violations:
        for v in violations:
            print(f"{args.file}: {v}", file=sys.stderr)
        print(f"{args.file}: {len(violations)} violation(s)", file=sys.stderr)
        return EXIT_SEMANTIC
    console.progress(f"{args.file}: ok")
    return EXIT_OK


def cmd_ontology_stats(args, console) -> int:
    o = load_ontology(args.file)
    h = hierarchy_stats(o)
    stats = {
        "name": o.name,
        "version": o.version,
        "hash": ontology_hash(o),
        "classes": len(o.classes),
        "roots": list(o.roots),
        "subclass_links": h.subclass_link_count,
        "parent_classes": h.parent_class_count,
        "leaf_classes": h.leaf_count,
        "depth_sum": h.depth_sum,
        "max_depth": h.max_depth,
        "relation_kinds": len(o.relation_kinds),
        "individuals": len(o.individuals),
        "populated_classes": len({i.class_id for i in o.individuals}),
    }
    if args.json:
        sys.stdout.write(pretty_dumps(stats))
    else:
        width = max(len(k) for k in stats)
        for key, value in stats.items():
            shown = ", ".join(value) if isinstance(value, list) else value
            print(f"{key.ljust(width)}  {shown}")
    return EXIT_OK


def cmd_ontology_convert(args, console) -> int:
    o = ensure_valid(load_ontology(args.file))
    text = dumps_ontology_json(o) if args.to == "json" else serialize_plon(o)
    _emit(text, args.out, console)
    return EXIT_OK


def cmd_metrics_compute(args, console) -> int:
    report = compute_metrics(load_ontology(args.file), args.variant)
    if args.json:
        text = pretty_dumps(report.to_json())
    else:
        text = metrics_table([report], [report.ontology_name or Path(args.file).stem])
    _emit(text, args.out, console)
    return EXIT_OK


def cmd_metrics_compare(args, console) -> int:
    a, b = load_ontology(args.a), load_ontology(args.b)
    labels = (a.name or Path(args.a).stem, b.name or Path(args.b).stem)
    report = compare_ontologies(a, b, variant=args.variant, labels=labels)
    if args.json:
        text = pretty_dumps(report.to_json())
    else:
        text = metrics_table([report.a, report.b], list(labels))
    _emit(text, args.out, console)
    return EXIT_OK


def cmd_map(args, console) -> int:
    ontology = load_ontology(args.ontology)
    view = read_source_view(args.source)
    directives = read_directives(args.directives)
    graph, report = reconstruct(view, ontology, directives)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "graph.json": dumps_graph(graph),
        "mapping-report.json": dumps_report(report),
        "patch-suggestions.json": pretty_dumps([suggestion_to_json(s) for s in report.patch_suggestions]),
    }
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8", newline="\n")
    console.progress(
        f"{len(graph.components)} components, {len(graph.connections)} connections, "
        f"{len(report.unmapped)} unmapped entities, {len(report.overlooked_classes)} overlooked classes"
    )
    console.progress(f"wrote {', '.join(str(out / n) for n in files)}")
    return EXIT_OK


def _load_graph(path) -> ComponentGraph:
    doc = _read_json(path)
    if isinstance(doc, dict) and doc.get("format") == VIEW_FORMAT:
        return view_from_json(doc).graph
    return graph_from_json(doc)


def cmd_view_derive(args, console) -> int:
    graph = _load_graph(args.graph)
    spec = ViewpointSpec.from_json(_read_json(args.spec))
    view = derive_view(graph, spec, args.timestamp)
    if args.store:
        repo = default_repo(args.repo)
        if repo is None:
            raise SemanticError("--store needs a repository: pass --repo or set PLATREC_REPO")
        repo_store(view, repo, overwrite=args.overwrite)
        console.progress(f"stored view {view.name!r} in {repo}")
    if args.out or not args.store:
        _emit(dumps_view(view), args.out, console)
    console.progress(f"view {view.name!r}: {len(view.component_ids)} components, {len(view.connection_ids)} connections")
    return EXIT_OK


def cmd_view_cross(args, console) -> int:
    report = cross_context_report(_load_graph(args.graph), args.privileged, args.key)
    text = pretty_dumps(report.to_json()) if args.json else export(report, RenderOptions(format="report"))
    _emit(text, args.out, console)
    return EXIT_OK


def _load_renderable(path):
    p = Path(path)
    if p.suffix == ".plon":
        return compute_metrics(load_ontology(p))
    doc = _read_json(p)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    loaders = {
        GRAPH_FORMAT: graph_from_json,
        VIEW_FORMAT: view_from_json,
        "platrec/metrics@1": MetricsReport.from_json,
        "platrec/comparison@1": ComparisonReport.from_json,
        "platrec/mapping-report@1": MappingReport.from_json,
        "platrec/cross-context@1": CrossContextReport.from_json,
    }
    if fmt not in loaders:
        raise SchemaError("format", f"{path}: unrecognized document format {fmt!r}")
    return loaders[fmt](doc)


def cmd_export(args, console) -> int:
    item = _load_renderable(args.input)
    opt = RenderOptions(args.format, args.cluster_by, args.legend, args.context_key)
    if opt.format != "report" and not hasattr(item, "components"):
        raise SemanticError(f"format {opt.format!r} needs a graph or view input")
    _emit(export(item, opt), args.out, console)
    return EXIT_OK


def _need_repo(args):
    repo = default_repo(args.repo)
    if repo is None:
        raise SemanticError("no repository: pass --repo or set PLATREC_REPO")
    return repo


def cmd_repo_list(args, console) -> int:
    entries = repo_list(_need_repo(args))
    if args.json:
        sys.stdout.write(pretty_dumps(entries))
    else:
        for e in entries:
            print(f"{e['name']}\t{e['timestamp']}\t{e['graph_hash'][:12]}\t{e['concern']}")
    return EXIT_OK


def cmd_repo_show(args, console) -> int:
    view = repo_load(_need_repo(args), args.name)
    text = dumps_view(view) if args.json else export(view, RenderOptions(format="report"))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_fixture_list(args, console) -> int:
    for f in list_fixtures():
        print(f"{f.id}\t{f.kind}")
    for b in BUNDLES:
        print(f"{b}\tbundle")
    return EXIT_OK


def cmd_fixture_load(args, console) -> int:
    written = export_fixture(args.id, args.out)
    for path in written:
        console.progress(f"wrote {path}")
    return EXIT_OK


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", "-q", action="store_true", default=argparse.SUPPRESS, help="suppress progress text")
    common.add_argument("--repo", default=argparse.SUPPRESS, help="view repository (default: $PLATREC_REPO)")

    parser = argparse.ArgumentParser(prog="platrec", description="Ontology-driven platform architecture reconstruction.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--quiet", "-q", action="store_true", default=False, help="suppress progress text")
    parser.add_argument("--repo", default=None, help="view repository (default: $PLATREC_REPO)")
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    onto = sub.add_parser("ontology", help="validate, inspect or convert an ontology").add_subparsers(dest="action", required=True)
    p = leaf(onto, "validate", cmd_ontology_validate, "report every violation in a .plon or .json ontology")
    p.add_argument("file")
    p = leaf(onto, "stats", cmd_ontology_stats, "hierarchy and population statistics")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p = leaf(onto, "convert", cmd_ontology_convert, "convert between PLON and JSON")
    p.add_argument("file")
    p.add_argument("--to", choices=("json", "plon"), required=True)
    p.add_argument("--out")

    met = sub.add_parser("metrics", help="ontology quality metrics").add_subparsers(dest="action", required=True)
    p = leaf(met, "compute", cmd_metrics_compute, "metrics table for one ontology")
    p.add_argument("file")
    p.add_argument("--variant", choices=VARIANTS, default="paper")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p = leaf(met, "compare", cmd_metrics_compare, "side-by-side metrics for two ontologies")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--variant", choices=VARIANTS, default="paper")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = leaf(sub, "map", cmd_map, "reconstruct a component graph from a source view")
    p.add_argument("--ontology", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--directives", required=True)
    p.add_argument("--out", required=True, help="output directory")

    view = sub.add_parser("view", help="target views").add_subparsers(dest="action", required=True)
    p = leaf(view, "derive", cmd_view_derive, "derive a target view from a graph and a viewpoint spec")
    p.add_argument("--graph", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--out")
    p.add_argument("--store", action="store_true", help="also store the view in the repository")
    p.add_argument("--overwrite", action="store_true")
    p.add_argument("--timestamp", help="fixed derivation timestamp (default: now, UTC)")
    p = leaf(view, "cross-context", cmd_view_cross, "classify edges crossing a privileged context")
    p.add_argument("--graph", required=True)
    p.add_argument("--privileged", required=True)
    p.add_argument("--key", default=DEFAULT_CONTEXT_KEY)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = leaf(sub, "export", cmd_export, "render a graph, view or report")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=FORMATS, required=True)
    p.add_argument("--out")
    p.add_argument("--cluster-by", choices=CLUSTERINGS, default="none")
    p.add_argument("--legend", action="store_true")
    p.add_argument("--context-key", default=DEFAULT_CONTEXT_KEY)

    repo = sub.add_parser("repo", help="stored target views").add_subparsers(dest="action", required=True)
    p = leaf(repo, "list", cmd_repo_list, "list stored views")
    p.add_argument("--json", action="store_true")
    p = leaf(repo, "show", cmd_repo_show, "show one stored view")
    p.add_argument("name")
    p.add_argument("--json", action="store_true")

    fix = sub.add_parser("fixture", help="bundled fixtures").add_subparsers(dest="action", required=True)
    leaf(fix, "list", cmd_fixture_list, "list bundled fixtures")
    p = leaf(fix, "load", cmd_fixture_load, "copy a fixture or bundle into a directory")
    p.add_argument("id")
    p.add_argument("--out", required=True)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2
        return int(exc.code or 0)
    console = _Console(args.quiet)
    try:
        return args.func(args, console)
    except PlonSyntaxError as exc:
        where = exc.source or getattr(args, "file", None)
        print(f"error: {where}: {exc}" if where else f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except UnicodeDecodeError as exc:
        print(f"error: input is not valid UTF-8: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())
