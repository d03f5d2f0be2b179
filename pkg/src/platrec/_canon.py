"""Canonical JSON encoding and content hashing shared by every module."""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(obj: Any) -> str:
    """SHA-256 hex digest of the canonical JSON form of ``obj``."""
    return hashlib.sha256(canonical_dumps(obj).encode("utf-8")).hexdigest()


def pretty_dumps(obj: Any) -> str:
    """Stable human-readable JSON (key order as built, LF line endings)."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
