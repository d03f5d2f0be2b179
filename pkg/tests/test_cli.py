import json
import os
import subprocess
import sys

import pytest

from platrec.catalog import export_fixture
from platrec.cli import EXIT_FORMAT, EXIT_IO, EXIT_OK, EXIT_SEMANTIC, run


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    for fid in ("platont-shape", "preuveneers-shape", "arm-tee", "rpi"):
        export_fixture(fid, root)
    return root


def cli(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- ontology


def test_validate_ok(capsys, corpus):
    code, out, err = cli(capsys, "ontology", "validate", corpus / "platont.plon")
    assert code == EXIT_OK and "ok" in err
    code, _, err = cli(capsys, "ontology", "validate", "-q", corpus / "platont.plon")
    assert code == EXIT_OK and err == ""


def test_validate_syntax_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.plon"
    bad.write_text("platont 1\nclass a extends 9\n")
    code, _, err = cli(capsys, "ontology", "validate", bad)
    assert code == EXIT_FORMAT
    assert "line 2, column 17" in err and "bad.plon" in err


def test_validate_semantic_error_exit_1(capsys, tmp_path):
    bad = tmp_path / "dangling.plon"
    bad.write_text("platont 1\nclass a extends b\nindividual x of c\n")
    code, _, err = cli(capsys, "ontology", "validate", bad)
    assert code == EXIT_SEMANTIC
    assert "dangling-parent" in err and "dangling-class" in err and "2 violation(s)" in err


def test_validate_json_forms(capsys, tmp_path):
    good = tmp_path / "o.json"
    good.write_text(json.dumps({"name": "n", "version": "", "classes": [], "relation_kinds": [], "individuals": []}))
    assert cli(capsys, "ontology", "validate", good)[0] == EXIT_OK
    broken = tmp_path / "b.json"
    broken.write_text("{")
    assert cli(capsys, "ontology", "validate", broken)[0] == EXIT_FORMAT
    wrong = tmp_path / "w.json"
    wrong.write_text(json.dumps({"name": 3, "version": "", "classes": [], "relation_kinds": [], "individuals": []}))
    code, _, err = cli(capsys, "ontology", "validate", wrong)
    assert code == EXIT_FORMAT and "name" in err
    dangling = tmp_path / "d.json"
    dangling.write_text(json.dumps({"name": "", "version": "", "classes": [], "relation_kinds": [],
                                    "individuals": [{"id": "x", "class_id": "nope", "aliases": []}]}))
    code, _, err = cli(capsys, "ontology", "validate", dangling)
    assert code == EXIT_SEMANTIC and "individuals[0].class_id" in err


def test_missing_file_exit_3(capsys, tmp_path):
    code, _, err = cli(capsys, "ontology", "validate", tmp_path / "absent.plon")
    assert code == EXIT_IO and "absent.plon" in err


def test_invalid_utf8_exit_2(capsys, tmp_path):
    bad = tmp_path / "bin.json"
    bad.write_bytes(b"\xff\xfe")
    assert cli(capsys, "ontology", "stats", bad)[0] == EXIT_FORMAT


def test_usage_error_exit_2(capsys):
    assert cli(capsys, "ontology")[0] == 2
    assert cli(capsys, "metrics", "compute", "x", "--variant", "odd")[0] == 2


def test_stats_and_convert(capsys, corpus, tmp_path):
    code, out, _ = cli(capsys, "ontology", "stats", "--json", corpus / "platont-shape.plon")
    stats = json.loads(out)
    assert code == 0 and stats["classes"] == 84 and stats["subclass_links"] == 83
    target = tmp_path / "shape.json"
    assert cli(capsys, "ontology", "convert", corpus / "platont-shape.plon", "--to", "json", "--out", target)[0] == 0
    back = tmp_path / "shape.plon"
    assert cli(capsys, "ontology", "convert", target, "--to", "plon", "--out", back)[0] == 0
    assert back.read_text() == (corpus / "platont-shape.plon").read_text()


# ----------------------------------------------------------------- metrics


def test_metrics_compare_table(capsys, corpus):
    code, out, _ = cli(capsys, "metrics", "compare", corpus / "platont-shape.plon", corpus / "preuveneers-shape.plon")
    assert code == EXIT_OK
    assert out.rstrip("\n").splitlines()[-1].endswith("24.16 | 3.86")


def test_metrics_compute_json(capsys, corpus, tmp_path):
    out_file = tmp_path / "m.json"
    code, out, _ = cli(capsys, "metrics", "compute", corpus / "platont-shape.plon", "--json", "--out", out_file)
    assert code == 0 and out == ""
    doc = json.loads(out_file.read_text())
    assert doc["metrics"]["class_count"] == 84
    code, out, _ = cli(capsys, "metrics", "compute", corpus / "platont-shape.plon", "--variant", "ontoqa-standard")
    assert code == 0 and "0.98" in out


# --------------------------------------------------------------------- map


def _map_args(corpus, bundle, out, directives=None):
    return ("map", "--ontology", corpus / "platont.plon", "--source", corpus / bundle / "source-view.json",
            "--directives", directives or corpus / bundle / "directives.json", "--out", out)


def test_map_matches_golden(capsys, corpus, tmp_path):
    code, _, err = cli(capsys, *_map_args(corpus, "arm-tee", tmp_path / "out"))
    assert code == EXIT_OK and "32 components" in err
    assert (tmp_path / "out" / "graph.json").read_bytes() == (corpus / "arm-tee" / "expected-graph.json").read_bytes()
    assert (tmp_path / "out" / "mapping-report.json").read_bytes() == (corpus / "arm-tee" / "expected-report.json").read_bytes()
    suggestions = json.loads((tmp_path / "out" / "patch-suggestions.json").read_text())
    assert [s["entity"] for s in suggestions] == ["smc-dispatch-quirks"]


def test_map_missing_entity_exit_1(capsys, corpus, tmp_path):
    directives = json.loads((corpus / "rpi" / "directives.json").read_text())
    directives["entity_maps"].append({"entity": "phantom-block", "components": [{"name": "ph", "class": "gpu"}]})
    path = tmp_path / "directives.json"
    path.write_text(json.dumps(directives))
    code, _, err = cli(capsys, *_map_args(corpus, "rpi", tmp_path / "out", path))
    assert code == EXIT_SEMANTIC and "phantom-block" in err
    assert not (tmp_path / "out").exists()


def test_map_schema_error_exit_2(capsys, corpus, tmp_path):
    path = tmp_path / "directives.json"
    path.write_text(json.dumps({"entity_maps": [{"entity": "x"}]}))
    code, _, err = cli(capsys, *_map_args(corpus, "rpi", tmp_path / "out", path))
    assert code == EXIT_FORMAT and "entity_maps[0]" in err


def test_map_quiet_does_not_change_outputs(capsys, corpus, tmp_path):
    cli(capsys, *_map_args(corpus, "rpi", tmp_path / "loud"))
    code, out, err = cli(capsys, *_map_args(corpus, "rpi", tmp_path / "quiet"), "--quiet")
    assert code == 0 and out == "" and err == ""
    for name in ("graph.json", "mapping-report.json", "patch-suggestions.json"):
        assert (tmp_path / "loud" / name).read_bytes() == (tmp_path / "quiet" / name).read_bytes()


# -------------------------------------------------------------------- view


def test_view_derive_store_and_repo(capsys, corpus, tmp_path):
    repo = tmp_path / "repo"
    graph = corpus / "rpi" / "expected-graph.json"
    for name in ("boot", "memory"):
        spec = corpus / "rpi" / "viewpoints" / f"{name}.json"
        code, out, _ = cli(capsys, "view", "derive", "--graph", graph, "--spec", spec, "--store", "--repo", repo,
                           "--timestamp", "2000-01-01T00:00:00+00:00")
        assert code == 0 and out == ""
        expected = (corpus / "rpi" / "expected-views" / f"{name}.json").read_text()
        assert (repo / "views" / f"{name}.json").read_text() == expected
    code, out, _ = cli(capsys, "repo", "list", "--repo", repo)
    assert code == 0 and [line.split("\t")[0] for line in out.splitlines()] == ["boot", "memory"]
    code, out, _ = cli(capsys, "repo", "show", "boot", "--repo", repo)
    assert code == 0 and "== Summary ==" in out
    spec = corpus / "rpi" / "viewpoints" / "boot.json"
    code, _, err = cli(capsys, "view", "derive", "--graph", graph, "--spec", spec, "--store", "--repo", repo)
    assert code == EXIT_SEMANTIC and "already stored" in err
    assert cli(capsys, "view", "derive", "--graph", graph, "--spec", spec, "--store", "--overwrite", "--repo", repo)[0] == 0
    assert cli(capsys, "repo", "show", "nope", "--repo", repo)[0] == EXIT_SEMANTIC


def test_repo_from_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("PLATREC_REPO", str(tmp_path))
    code, out, _ = cli(capsys, "repo", "list", "--json")
    assert code == 0 and json.loads(out) == []
    monkeypatch.delenv("PLATREC_REPO")
    assert cli(capsys, "repo", "list")[0] == EXIT_SEMANTIC


def test_view_derive_bad_spec(capsys, corpus, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"name": "x", "selectors": {"classes": ["not-a-class"]}}))
    code, _, err = cli(capsys, "view", "derive", "--graph", corpus / "rpi" / "expected-graph.json", "--spec", spec)
    assert code == EXIT_SEMANTIC and "not-a-class" in err


def test_cross_context(capsys, corpus):
    graph = corpus / "arm-tee" / "expected-graph.json"
    code, out, _ = cli(capsys, "view", "cross-context", "--graph", graph, "--privileged", "secure", "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["privileged_to_other"]) == 3 and len(doc["other_to_privileged"]) == 1
    code, _, err = cli(capsys, "view", "cross-context", "--graph", graph, "--privileged", "trusted")
    assert code == EXIT_SEMANTIC and "'trusted'" in err


# ------------------------------------------------------------------ export


def test_export_formats(capsys, corpus, tmp_path):
    graph = corpus / "arm-tee" / "expected-graph.json"
    code, dot, _ = cli(capsys, "export", "--in", graph, "--format", "dot", "--cluster-by", "context", "--legend")
    assert code == 0 and 'subgraph "cluster_secure"' in dot
    out = tmp_path / "g.graphml"
    assert cli(capsys, "export", "--in", graph, "--format", "graphml", "--out", out)[0] == 0
    assert out.read_text().startswith("<?xml")
    code, text, _ = cli(capsys, "export", "--in", corpus / "platont-shape.plon", "--format", "report")
    assert code == 0 and "total score: 24.16" in text
    code, text, _ = cli(capsys, "export", "--in", corpus / "arm-tee" / "expected-report.json", "--format", "report")
    assert code == 0 and "unmapped: 1" in text


def test_export_rejects_unknown_documents(capsys, tmp_path):
    doc = tmp_path / "x.json"
    doc.write_text(json.dumps({"format": "mystery"}))
    assert cli(capsys, "export", "--in", doc, "--format", "report")[0] == EXIT_FORMAT


def test_export_graph_format_needs_graph(capsys, corpus):
    code, _, err = cli(capsys, "export", "--in", corpus / "platont-shape.plon", "--format", "dot")
    assert code == EXIT_SEMANTIC


def test_export_to_unwritable_path_exit_3(capsys, corpus, tmp_path):
    target = tmp_path / "missing-dir" / "g.dot"
    code, _, _ = cli(capsys, "export", "--in", corpus / "arm-tee" / "expected-graph.json", "--format", "dot", "--out", target)
    assert code == EXIT_IO


# ----------------------------------------------------------------- fixture


def test_fixture_list_and_load(capsys, tmp_path):
    code, out, _ = cli(capsys, "fixture", "list")
    assert code == 0 and "arm-tee\tbundle" in out and "platont\tontology" in out
    assert cli(capsys, "fixture", "load", "rpi", "--out", tmp_path, "-q")[0] == 0
    assert (tmp_path / "rpi" / "directives.json").exists()
    assert cli(capsys, "fixture", "load", "nothing", "--out", tmp_path)[0] == EXIT_SEMANTIC


def test_writes_only_where_told(capsys, corpus, tmp_path, monkeypatch):
    work = tmp_path / "cwd"
    work.mkdir()
    monkeypatch.chdir(work)
    cli(capsys, "metrics", "compare", corpus / "platont-shape.plon", corpus / "preuveneers-shape.plon")
    cli(capsys, "export", "--in", corpus / "arm-tee" / "expected-graph.json", "--format", "graphml")
    cli(capsys, *_map_args(corpus, "arm-tee", tmp_path / "mapped"))
    assert list(work.iterdir()) == []


def test_module_entry_point(corpus):
    env = {**os.environ, "PYTHONIOENCODING": "utf-8"}
    proc = subprocess.run(
        [sys.executable, "-m", "platrec", "metrics", "compare", str(corpus / "platont-shape.plon"), str(corpus / "preuveneers-shape.plon")],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.rstrip().endswith("24.16 | 3.86")
