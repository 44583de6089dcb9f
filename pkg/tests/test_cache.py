import logging

import numpy as np
import pytest

from csrg.cache import ENV_VAR, TraceCache, default_cache_dir
from csrg.gauss import build_trace_counts, write_table
from csrg.gf import build_field


def test_default_dir_follows_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "x"))
    assert default_cache_dir() == tmp_path / "x"
    monkeypatch.delenv(ENV_VAR)
    assert default_cache_dir().name == "csrg"


def test_miss_then_hit(tmp_path):
    c = TraceCache(tmp_path)
    a = c.get_or_build(3, 4, 16)
    b = c.get_or_build(3, 4, 16)
    assert a == b == build_trace_counts(build_field(3, 4), 16)
    assert (c.misses, c.hits) == (1, 1)
    assert [(e.p, e.f, e.k) for e in c.entries()] == [(3, 4, 16)]


def test_fold_from_cached_multiple(tmp_path):
    c = TraceCache(tmp_path)
    c.get_or_build(3, 4, 80)
    t = c.get_or_build(3, 4, 10)
    assert c.hits == 1
    assert t == build_trace_counts(build_field(3, 4), 10)


def test_corrupt_file_is_rebuilt(tmp_path, caplog):
    c = TraceCache(tmp_path)
    c.path_for(5, 2, 12).parent.mkdir(parents=True, exist_ok=True)
    c.path_for(5, 2, 12).write_bytes(b"garbage")
    with caplog.at_level(logging.WARNING):
        t = c.get_or_build(5, 2, 12)
    assert c.misses == 1 and "unreadable" in caplog.text
    assert t == build_trace_counts(build_field(5, 2), 12)
    # the rebuilt table replaced the bad file
    assert TraceCache(tmp_path).load(5, 2, 12) == t


def test_mislabelled_file_is_ignored(tmp_path):
    c = TraceCache(tmp_path)
    tmp_path.mkdir(exist_ok=True)
    write_table(build_trace_counts(build_field(7, 2), 12), c.path_for(5, 2, 12))
    assert c.load(5, 2, 12) is None


def test_clear(tmp_path):
    c = TraceCache(tmp_path)
    c.get_or_build(2, 4, 5)
    c.get_or_build(2, 4, 3)
    assert c.clear() == 2
    assert c.entries() == []
    assert TraceCache(tmp_path / "missing").entries() == []


def test_no_temporary_files_left(tmp_path):
    c = TraceCache(tmp_path)
    c.store(build_trace_counts(build_field(11, 2), 24))
    assert [p.name for p in tmp_path.iterdir()] == ["11_2_24.csrg"]
