"""Read-through on-disk cache for expensive tables.

Entries are JSON files named by the SHA-256 of their key.  The key includes
the package version, so a version bump is a cache miss.  Each entry stores a
checksum of its payload; a corrupted entry is recomputed and rewritten.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable

from . import __version__

log = logging.getLogger(__name__)

ENV_VAR = "TITSLAB_CACHE_DIR"
SCHEMA = 1


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class Cache:
    def __init__(self, directory: str | os.PathLike | None, version: str = __version__):
        self.directory = Path(directory) if directory else None
        self.version = version

    def key_text(self, op: str, args: dict) -> str:
        return json.dumps({"op": op, "args": args, "version": self.version, "schema": SCHEMA},
                          sort_keys=True)

    def path_for(self, key_text: str) -> Path:
        assert self.directory is not None
        return self.directory / f"{_digest(key_text)}.json"

    def load(self, key_text: str) -> str | None:
        if self.directory is None:
            return None
        path = self.path_for(key_text)
        try:
            entry = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None
        payload = entry.get("payload")
        if (entry.get("key") != key_text or not isinstance(payload, str)
                or entry.get("checksum") != _digest(payload)):
            log.warning("ignoring corrupted cache entry %s", path)
            return None
        return payload

    def store(self, key_text: str, payload: str) -> None:
        if self.directory is None:
            return
        entry = json.dumps({"key": key_text, "checksum": _digest(payload), "payload": payload})
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    fh.write(entry)
                os.replace(tmp, self.path_for(key_text))
            except BaseException:
                Path(tmp).unlink(missing_ok=True)
                raise
        except OSError as exc:
            log.warning("cache write failed, continuing without cache: %s", exc)

    def get_or_compute(self, op: str, args: dict, compute: Callable[[], str]) -> tuple[str, bool]:
        """Return (payload, served_from_cache)."""
        key = self.key_text(op, args)
        hit = self.load(key)
        if hit is not None:
            return hit, True
        payload = compute()
        self.store(key, payload)
        return payload, False


def cache_io(cache: Cache, op: str, args: dict, compute: Callable[[], str]) -> str:
    return cache.get_or_compute(op, args, compute)[0]
