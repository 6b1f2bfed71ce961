"""On-disk cache of factor graphs, one checksummed file per task spec."""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from growthbound.exponent import TaskSpec
from growthbound.graph import FactorGraph, build_graph

log = logging.getLogger(__name__)

CACHE_VERSION = 1
MAGIC = "growthbound-cache"
ENV_VAR = "GROWTHBOUND_CACHE"


class CacheCorruptError(ValueError):
    pass


def cache_filename(spec: TaskSpec) -> str:
    return "g_" + spec.key().replace("/", "_") + ".txt"


def encode(g: FactorGraph) -> str:
    body = g.serialize()
    digest = hashlib.sha256(body.encode("ascii")).hexdigest()
    return f"{MAGIC} v{CACHE_VERSION} sha256={digest}\n{body}"


def decode(text: str, spec: Optional[TaskSpec] = None) -> FactorGraph:
    head, _, body = text.partition("\n")
    parts = head.split()
    if len(parts) != 3 or parts[0] != MAGIC:
        raise CacheCorruptError("missing cache header")
    if parts[1] != f"v{CACHE_VERSION}":
        raise CacheCorruptError(f"cache version {parts[1]} != v{CACHE_VERSION}")
    if parts[2] != "sha256=" + hashlib.sha256(body.encode("ascii")).hexdigest():
        raise CacheCorruptError("cache checksum mismatch")
    try:
        g = FactorGraph.deserialize(body, spec)
    except ValueError as exc:
        raise CacheCorruptError(str(exc)) from exc
    if spec is not None:
        e = spec.exponent
        got = g.serialize().split("\n", 1)[0].split()[:6]
        want = [str(spec.k), str(e.numerator), str(e.denominator), str(int(e.strict)), str(spec.m), str(int(spec.symmetry))]
        if got != want:
            raise CacheCorruptError("cached graph belongs to a different spec")
    return g


class GraphCache:
    """Build-or-load graphs; falls back to memory when the directory is unusable."""

    def __init__(self, directory: Optional[str | os.PathLike] = None):
        env = os.environ.get(ENV_VAR)
        if env:
            directory = env
        self.directory = Path(directory) if directory else None
        self._memory: dict[str, FactorGraph] = {}
        self.events: list[str] = []
        if self.directory is not None:
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
                probe = tempfile.NamedTemporaryFile(dir=self.directory, delete=True)
                probe.close()
            except OSError as exc:
                log.warning("cache directory %s unusable (%s); using memory", self.directory, exc)
                self.events.append(f"unwritable cache directory {self.directory}")
                self.directory = None

    def path(self, spec: TaskSpec) -> Optional[Path]:
        return None if self.directory is None else self.directory / cache_filename(spec)

    def store(self, g: FactorGraph) -> None:
        spec = g.spec
        self._memory[spec.key()] = g
        path = self.path(spec)
        if path is None:
            return
        try:
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".txt")
            with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
                fh.write(encode(g))
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("could not write cache file %s: %s", path, exc)
            self.events.append(f"write failed: {path}")

    def load(self, spec: TaskSpec) -> Optional[FactorGraph]:
        key = spec.key()
        if key in self._memory:
            return self._memory[key]
        path = self.path(spec)
        if path is None or not path.exists():
            return None
        try:
            g = decode(path.read_text(encoding="ascii"), spec)
        except (CacheCorruptError, UnicodeDecodeError) as exc:
            log.warning("discarding cache file %s: %s", path, exc)
            self.events.append(f"checksum failure: {path.name}: {exc}")
            return None
        self._memory[key] = g
        return g

    def get(self, spec: TaskSpec) -> FactorGraph:
        g = self.load(spec)
        if g is None:
            g = build_graph(spec)
            self.store(g)
        return g

    __call__ = get

    def verify(self) -> list[tuple[str, Optional[str]]]:
        """Check every cache file; returns ``(name, error or None)`` pairs."""
        if self.directory is None:
            return []
        out = []
        for path in sorted(self.directory.glob("g_*.txt")):
            try:
                decode(path.read_text(encoding="ascii"))
                out.append((path.name, None))
            except (CacheCorruptError, UnicodeDecodeError, ValueError) as exc:
                out.append((path.name, str(exc)))
        return out
