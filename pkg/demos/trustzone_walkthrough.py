"""Rebuild the ARM TrustZone component graph and list edges that cross worlds.

Run: python3 demos/trustzone_walkthrough.py [OUT_DIR]
Writes a context-clustered DOT file when OUT_DIR is given.
"""

import sys
from pathlib import Path

from platrec import RenderOptions, cross_context_report, export_dot, load_fixture, reconstruct, render_report


def main(argv):
    bundle = load_fixture("arm-tee")
    graph, report = reconstruct(bundle.source_view, bundle.ontology, bundle.directives)
    print(f"{len(graph.components)} components, {len(graph.connections)} connections")
    print(f"unmapped entities: {', '.join(report.unmapped) or 'none'}")

    print(render_report(cross_context_report(graph, "secure")))

    if argv:
        out = Path(argv[0])
        out.mkdir(parents=True, exist_ok=True)
        dot = export_dot(graph, RenderOptions(cluster_by="context", include_legend=True))
        (out / "arm-tee.dot").write_text(dot, encoding="utf-8")
        print(f"wrote {out / 'arm-tee.dot'}")


if __name__ == "__main__":
    main(sys.argv[1:])
