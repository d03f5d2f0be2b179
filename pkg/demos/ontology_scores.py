"""Score the two shape ontologies and print the side-by-side metric table."""

from platrec import compare_ontologies, load_fixture, render_report


def main():
    ours, baseline = load_fixture("platont-shape"), load_fixture("preuveneers-shape")
    print(render_report(compare_ontologies(ours, baseline)))


if __name__ == "__main__":
    main()
