"""Derive the Raspberry Pi boot and memory views and store them in a view repository.

Run: python3 demos/rpi_boot_chain.py REPO_DIR
"""

import sys

from platrec import derive_view, load_fixture, reconstruct, repo_list, repo_store


def main(argv):
    if len(argv) != 1:
        sys.exit(__doc__)
    bundle = load_fixture("rpi")
    graph, _ = reconstruct(bundle.source_view, bundle.ontology, bundle.directives)

    boot = derive_view(graph, bundle.viewpoints["boot"])
    print("boot chain:")
    for c in boot.components():
        print(f"  {c.context('subsystem'):>4}  {c.id} ({c.class_id})")

    memory = derive_view(graph, bundle.viewpoints["memory"])
    print(f"memory view: {len(memory.component_ids)} components")

    for view in (boot, memory):
        repo_store(view, argv[0], overwrite=True)
    for entry in repo_list(argv[0]):
        print(f"stored {entry['name']} from graph {entry['graph_hash'][:12]}")


if __name__ == "__main__":
    main(sys.argv[1:])
