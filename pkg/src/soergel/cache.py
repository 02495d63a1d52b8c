"""Append-only JSON-lines store for Kazhdan-Lusztig basis elements.

One record per line::

    {"v":1,"key":"<sha256 hex>","x":"s t s","cprime":[["","1*v^3"],["s","1*v^3"],...]}

``cprime`` lists the coefficients of C'_x in the T basis.  The key hashes the
canonical Coxeter matrix JSON together with the element word, so records for
different groups can share one file.  Lines that fail to parse, carry another
version tag, or disagree with their own key are skipped, which keeps readers
safe against a writer that crashed mid-line or a concurrent append.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import logging
import os
import threading
from pathlib import Path

from .hecke import HeckeAlgebra, HeckeElt
from .laurent import LaurentPoly

__all__ = ["CACHE_VERSION", "KLCache", "default_cache_path", "record_key", "attach_cache"]

CACHE_VERSION = 1
log = logging.getLogger(__name__)


def default_cache_path() -> Path:
    env = os.environ.get("SOERGEL_CACHE")
    if env:
        return Path(env).expanduser()
    base = os.environ.get("XDG_DATA_HOME") or os.path.join(os.path.expanduser("~"), ".local", "share")
    return Path(base) / "soergel" / "kl-cache.jsonl"


def record_key(matrix_json: str, word: str) -> str:
    return hashlib.sha256(f"{matrix_json}\n{word}".encode("utf-8")).hexdigest()


class KLCache:
    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else default_cache_path()
        self._records: dict[str, list] = {}
        self._offset = 0
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.skipped = 0

    def __repr__(self):
        return f"KLCache({str(self.path)!r}, records={len(self._records)})"

    # ---- reading ----
    def _refresh(self):
        """Read complete lines appended since the last refresh."""
        try:
            with open(self.path, "rb") as fh:
                fh.seek(self._offset)
                data = fh.read()
        except OSError:  # missing or unreadable: behave like an empty cache
            return
        end = data.rfind(b"\n")
        if end < 0:
            return
        chunk, self._offset = data[:end + 1], self._offset + end + 1
        for raw in chunk.splitlines():
            rec = self._parse(raw)
            if rec is None:
                self.skipped += 1
                continue
            self._records.setdefault(rec["key"], rec["cprime"])

    @staticmethod
    def _parse(raw: bytes):
        try:
            rec = json.loads(raw)
        except (ValueError, UnicodeDecodeError):
            return None
        if not isinstance(rec, dict) or rec.get("v") != CACHE_VERSION:
            return None
        key, x, cp = rec.get("key"), rec.get("x"), rec.get("cprime")
        if not isinstance(key, str) or not isinstance(x, str) or not isinstance(cp, list):
            return None
        if not all(isinstance(p, list) and len(p) == 2 and all(isinstance(q, str) for q in p) for p in cp):
            return None
        return rec

    def lookup(self, matrix_json: str, word: str):
        key = record_key(matrix_json, word)
        with self._lock:
            got = self._records.get(key)
            if got is None:
                self._refresh()
                got = self._records.get(key)
        return got

    def get(self, H: HeckeAlgebra, x) -> HeckeElt | None:
        pairs = self.lookup(H.system.matrix.canonical_json(), x.word_str)
        if pairs is None:
            self.misses += 1
            return None
        try:
            coeffs = {H.system.element(w): LaurentPoly.parse(c) for w, c in pairs}
        except ValueError:
            log.warning("ignoring unreadable cache record for %s", x)
            self.misses += 1
            return None
        self.hits += 1
        return H.t_to_ttilde(coeffs)

    # ---- writing ----
    def put(self, H: HeckeAlgebra, x, C: HeckeElt) -> None:
        mj = H.system.matrix.canonical_json()
        key = record_key(mj, x.word_str)
        pairs = C.to_pairs("t")
        line = json.dumps({"v": CACHE_VERSION, "key": key, "x": x.word_str, "cprime": pairs},
                          sort_keys=True, separators=(",", ":")) + "\n"
        with self._lock:
            if key in self._records:
                return
            self._records[key] = pairs
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fcntl.flock(fh, fcntl.LOCK_EX)
                    try:
                        fh.write(line)
                        fh.flush()
                    finally:
                        fcntl.flock(fh, fcntl.LOCK_UN)
            except OSError as exc:  # a read-only cache must not break computations
                log.warning("could not append to KL cache %s: %s", self.path, exc)

    def __len__(self):
        with self._lock:
            self._refresh()
            return len(self._records)


def attach_cache(H: HeckeAlgebra, cache: KLCache | None) -> HeckeAlgebra:
    H.cache = cache
    return H
