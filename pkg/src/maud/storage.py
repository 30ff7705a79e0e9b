"""Embedded document store: a directory of validated JSON documents plus an
index file, with atomic writes and creation-ordered listings.

Desk-scale by design; no external database.  Writes are atomic per
document (temp file + rename) and index updates are serialized behind a
process-local lock.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import uuid
from pathlib import Path

from .documents import canonical_json, fingerprint
from .errors import ConflictError, DocumentError, NotFoundError


class DocumentStore:
    """One collection of documents under ``root/<kind>/``."""

    def __init__(self, root: str | os.PathLike, kind: str):
        self.kind = kind
        self.dir = Path(root) / kind
        self.dir.mkdir(parents=True, exist_ok=True)
        self._index_path = self.dir / "index.json"
        self._lock = threading.Lock()
        if not self._index_path.exists():
            self._write_index({})

    def _read_index(self) -> dict:
        try:
            return json.loads(self._index_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DocumentError(f"corrupt index for {self.kind}: {exc}") from exc

    def _write_index(self, index: dict) -> None:
        _atomic_write(self._index_path, json.dumps(index, indent=1, sort_keys=True))

    def put(self, document: dict, *, doc_id: str | None = None) -> tuple[str, str]:
        """Store a document; returns (id, content fingerprint)."""
        doc_id = doc_id if doc_id else uuid.uuid4().hex
        if "/" in doc_id or doc_id.startswith("."):
            raise DocumentError(f"invalid document id {doc_id!r}", field="id")
        digest = fingerprint(document)
        with self._lock:
            index = self._read_index()
            created = index.get(doc_id, {}).get("created_at", time.time())
            _atomic_write(self.dir / f"{doc_id}.json", canonical_json(document))
            index[doc_id] = {"created_at": created, "fingerprint": digest}
            self._write_index(index)
        return doc_id, digest

    def put_new(self, document: dict, *, doc_id: str | None = None) -> tuple[str, str]:
        """Like put, but refuses to overwrite an existing id."""
        with self._lock:
            index = self._read_index()
            if doc_id is not None and doc_id in index:
                raise ConflictError(f"{self.kind} id {doc_id!r} already exists")
        return self.put(document, doc_id=doc_id)

    def get(self, doc_id: str) -> dict:
        path = self.dir / f"{doc_id}.json"
        if not path.exists():
            raise NotFoundError(f"no {self.kind} with id {doc_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def exists(self, doc_id: str) -> bool:
        return (self.dir / f"{doc_id}.json").exists()

    def entries(self) -> list[dict]:
        """Listing in creation order: [{id, created_at, fingerprint}, ...]."""
        index = self._read_index()
        rows = [{"id": doc_id, **meta} for doc_id, meta in index.items()]
        rows.sort(key=lambda r: (r["created_at"], r["id"]))
        return rows


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
