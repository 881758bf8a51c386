"""On-disk memo tables for the universal polynomial families.

Writes are atomic (temp file + rename), so concurrent processes may
duplicate work for the same key but never observe a torn entry.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

FORMAT_VERSION = 1

ENV_TABLE_DIR = "LAMBDAFORGE_TABLE_DIR"


def table_root() -> Path:
    env = os.environ.get(ENV_TABLE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "lambdaforge"


def load_entry(subdir: str, name: str) -> dict | None:
    path = table_root() / subdir / f"{name}.json"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if obj.get("meta", {}).get("format_version") != FORMAT_VERSION:
        return None
    return obj


def store_entry(subdir: str, name: str, meta: dict, payload: dict) -> None:
    directory = table_root() / subdir
    directory.mkdir(parents=True, exist_ok=True)
    obj = {"meta": {**meta, "format_version": FORMAT_VERSION}, **payload}
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True)
        os.replace(tmp, directory / f"{name}.json")
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
