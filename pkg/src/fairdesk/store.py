"""Append-only JSONL persistence, one file per record kind.

Every line is one canonical JSON document (sorted keys, no whitespace), so
rewriting the same logical state always produces identical bytes and a
restart rebuilds exactly what was stored. A malformed line anywhere fails
loudly with the file named; silent truncation must never look like an empty
store.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Mapping

from .errors import StoreCorruptError


def canonical_dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class JsonlStore:
    """Directory of ``<kind>.jsonl`` files with append/replay semantics."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, kind: str) -> Path:
        if not kind.replace("_", "").isalnum():
            raise ValueError(f"bad record kind {kind!r}")
        return self.directory / f"{kind}.jsonl"

    def append(self, kind: str, doc: Mapping) -> None:
        line = canonical_dumps(doc)
        with open(self.path(kind), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def read_all(self, kind: str) -> list[dict]:
        """Every stored document in append order; corrupt lines abort."""
        path = self.path(kind)
        if not path.exists():
            return []
        docs = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped:
                    continue
                try:
                    doc = json.loads(stripped)
                except json.JSONDecodeError as exc:
                    raise StoreCorruptError(
                        f"store file {path} line {lineno} is not valid JSON: {exc}") from None
                if not isinstance(doc, dict):
                    raise StoreCorruptError(
                        f"store file {path} line {lineno} is not a JSON object")
                docs.append(doc)
        return docs

    def latest_by(self, kind: str, key: str) -> dict[str, dict]:
        """Last-written document per key, keys in first-appearance order."""
        latest: dict[str, dict] = {}
        for doc in self.read_all(kind):
            if key not in doc:
                raise StoreCorruptError(
                    f"store file {self.path(kind)}: document missing key field {key!r}")
            latest[str(doc[key])] = doc
        return latest
