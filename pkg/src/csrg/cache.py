"""On-disk cache of trace-count tables.

One file per (p, f, k), named p_f_k.csrg, in the table format of the gauss
module.  The directory comes from the argument, else $CSRG_CACHE_DIR, else
~/.cache/csrg.  Writes go to a temporary file that is renamed into place, so
readers never see a partial table.
"""

from __future__ import annotations

import logging
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import CacheFormatError
from .gauss import TraceCountTable, build_trace_counts, read_table, write_table
from .gf import VERIFY_CAP, build_field

log = logging.getLogger(__name__)

ENV_VAR = "CSRG_CACHE_DIR"
_NAME = re.compile(r"^(\d+)_(\d+)_(\d+)\.csrg$")


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "csrg"


@dataclass(frozen=True)
class CacheEntry:
    p: int
    f: int
    k: int
    path: Path
    size: int


class TraceCache:
    def __init__(self, directory: str | Path | None = None):
        self.dir = Path(directory) if directory is not None else default_cache_dir()
        self.hits = 0
        self.misses = 0

    def path_for(self, p: int, f: int, k: int) -> Path:
        return self.dir / f"{p}_{f}_{k}.csrg"

    def entries(self) -> list[CacheEntry]:
        if not self.dir.is_dir():
            return []
        out = []
        for path in sorted(self.dir.iterdir()):
            m = _NAME.match(path.name)
            if m:
                p, f, k = map(int, m.groups())
                out.append(CacheEntry(p, f, k, path, path.stat().st_size))
        return out

    def load(self, p: int, f: int, k: int) -> TraceCountTable | None:
        """The cached table, or one folded down from a cached multiple of k."""
        path = self.path_for(p, f, k)
        candidates = [path] if path.exists() else []
        candidates += [
            e.path for e in self.entries() if (e.p, e.f) == (p, f) and e.k != k and e.k % k == 0
        ]
        for c in candidates:
            try:
                table = read_table(c)
            except CacheFormatError as exc:
                log.warning("ignoring unreadable cache file: %s", exc)
                continue
            if (table.p, table.f) != (p, f) or table.k % k:
                log.warning("ignoring mislabelled cache file %s", c)
                continue
            return table if table.k == k else table.fold(k)
        return None

    def store(self, table: TraceCountTable) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        dest = self.path_for(table.p, table.f, table.k)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".csrg")
        os.close(fd)
        try:
            write_table(table, tmp)
            os.replace(tmp, dest)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return dest

    def get_or_build(
        self, p: int, f: int, k: int, *, threads: int = 1, max_q: int = VERIFY_CAP
    ) -> TraceCountTable:
        table = self.load(p, f, k)
        if table is not None:
            self.hits += 1
            return table
        self.misses += 1
        table = build_trace_counts(build_field(p, f), k, threads=threads, max_q=max_q)
        try:
            self.store(table)
        except OSError as exc:
            log.warning("could not write cache: %s", exc)
        return table

    def clear(self) -> int:
        n = 0
        for e in self.entries():
            e.path.unlink(missing_ok=True)
            n += 1
        return n
