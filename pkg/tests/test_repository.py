import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import pytest

from platrec.errors import RepositoryError
from platrec.repository import default_repo, repo_list, repo_load, repo_store
from platrec.viewgraph import ViewpointSpec, derive_view, dumps_view

TS = "2000-01-01T00:00:00+00:00"


def test_store_then_load_is_lossless(tmp_path, rpi_bundle):
    view = rpi_bundle.expected_views["boot"]
    assert repo_store(view, tmp_path) == "boot"
    loaded = repo_load(tmp_path, "boot")
    assert loaded == view
    assert dumps_view(loaded) == dumps_view(view)
    on_disk = (tmp_path / "views" / "boot.json").read_bytes()
    assert hashlib.sha256(on_disk).hexdigest() == hashlib.sha256(dumps_view(view).encode()).hexdigest()


def test_empty_repository_lists_nothing(tmp_path):
    assert repo_list(tmp_path) == []
    assert repo_list(tmp_path / "missing") == []


def test_two_views_listed_sorted(tmp_path, rpi_bundle):
    repo_store(rpi_bundle.expected_views["memory"], tmp_path)
    repo_store(rpi_bundle.expected_views["boot"], tmp_path)
    index = repo_list(tmp_path)
    assert [e["name"] for e in index] == ["boot", "memory"]
    assert index[0]["graph_hash"] == rpi_bundle.expected_graph.hash
    assert index[0]["timestamp"] == TS
    assert index[0]["concern"] == rpi_bundle.viewpoints["boot"].concern
    assert sorted(p.stem for p in (tmp_path / "views").iterdir()) == ["boot", "memory"]


def test_name_collision_needs_overwrite(tmp_path, rpi_bundle):
    view = rpi_bundle.expected_views["boot"]
    repo_store(view, tmp_path)
    later = replace(view, derived_at="2001-01-01T00:00:00+00:00")
    with pytest.raises(RepositoryError, match="already stored"):
        repo_store(later, tmp_path)
    assert repo_load(tmp_path, "boot").derived_at == TS
    repo_store(later, tmp_path, overwrite=True)
    assert repo_load(tmp_path, "boot").derived_at == later.derived_at
    assert len(repo_list(tmp_path)) == 1


def test_missing_name_not_found(tmp_path):
    with pytest.raises(RepositoryError, match="not found"):
        repo_load(tmp_path, "boot")
    with pytest.raises(RepositoryError):
        repo_load(tmp_path, "../escape")


def test_invalid_view_name_rejected(tmp_path, rpi_bundle):
    view = rpi_bundle.expected_views["boot"]
    bad = replace(view, spec=replace(view.spec, name="a/b"))
    with pytest.raises(RepositoryError):
        repo_store(bad, tmp_path)


def test_concurrent_writers_keep_index_consistent(tmp_path, rpi_bundle):
    g = rpi_bundle.expected_graph
    views = [derive_view(g, ViewpointSpec(f"v{i:02d}", name_patterns=(f"*{i}*",)), TS) for i in range(12)]
    with ThreadPoolExecutor(max_workers=6) as pool:
        list(pool.map(lambda v: repo_store(v, tmp_path), views))
    assert [e["name"] for e in repo_list(tmp_path)] == [v.name for v in views]
    for v in views:
        assert repo_load(tmp_path, v.name) == v


def test_default_repo_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv("PLATREC_REPO", raising=False)
    assert default_repo() is None
    monkeypatch.setenv("PLATREC_REPO", str(tmp_path))
    assert default_repo() == tmp_path
    assert default_repo("elsewhere").name == "elsewhere"
