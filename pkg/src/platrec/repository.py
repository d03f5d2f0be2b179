"""On-disk repository of derived target views.

Layout::

    <repo>/index.json          # [{name, concern, graph_hash, timestamp}, ...] sorted by name
    <repo>/views/<name>.json   # one TargetView document per view
    <repo>/.lock               # advisory writer lock

Writers serialize on the lock file; readers never take it.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from filelock import FileLock

from ._canon import pretty_dumps
from .errors import RepositoryError
from .ontology import is_identifier
from .viewgraph import TargetView, dumps_view, view_from_json

ENV_VAR = "PLATREC_REPO"


def _paths(repo_path) -> tuple[Path, Path, Path]:
    root = Path(repo_path)
    return root / "index.json", root / "views", root / ".lock"


def _read_index(index_path: Path) -> list[dict]:
    if not index_path.exists():
        return []
    return json.loads(index_path.read_text(encoding="utf-8"))


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def repo_store(view: TargetView, repo_path, overwrite: bool = False) -> str:
    """Write ``view`` under its spec name and update the index; returns the name."""
    name = view.name
    if not is_identifier(name):
        raise RepositoryError(f"view name {name!r} is not a valid identifier")
    index_path, views_dir, lock_path = _paths(repo_path)
    views_dir.mkdir(parents=True, exist_ok=True)
    with FileLock(str(lock_path)):
        index = _read_index(index_path)
        exists = any(e["name"] == name for e in index)
        if exists and not overwrite:
            raise RepositoryError(f"view {name!r} already stored (use overwrite)")
        _atomic_write(views_dir / f"{name}.json", dumps_view(view))
        index = [e for e in index if e["name"] != name]
        index.append(
            {
                "name": name,
                "concern": view.spec.concern,
                "graph_hash": view.parent_hash,
                "timestamp": view.derived_at,
            }
        )
        index.sort(key=lambda e: e["name"])
        _atomic_write(index_path, pretty_dumps(index))
    return name


def repo_load(repo_path, name: str) -> TargetView:
    _, views_dir, _ = _paths(repo_path)
    path = views_dir / f"{name}.json"
    if not is_identifier(name) or not path.exists():
        raise RepositoryError(f"view {name!r} not found in {repo_path}")
    return view_from_json(json.loads(path.read_text(encoding="utf-8")))


def repo_list(repo_path) -> list[dict]:
    index_path, _, _ = _paths(repo_path)
    return sorted(_read_index(index_path), key=lambda e: e["name"])


def default_repo(explicit=None) -> Path | None:
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None
