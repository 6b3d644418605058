"""Optional on-disk memo cache for enumerations.

Active only when TITSHOM_CACHE_DIR is set. Writes are atomic (tempfile plus
rename) so concurrent readers never observe partial files. Keys embed a
format version; bump CACHE_VERSION when stored shapes change.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

CACHE_VERSION = 1
ENV_VAR = "TITSHOM_CACHE_DIR"


def cache_dir() -> Path | None:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return None
    path = Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _path_for(key: str) -> Path | None:
    base = cache_dir()
    if base is None:
        return None
    return base / f"titshom-v{CACHE_VERSION}-{key}.json"


def get_json(key: str):
    path = _path_for(key)
    if path is None or not path.exists():
        return None
    try:
        with path.open("r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None


def put_json(key: str, obj) -> None:
    path = _path_for(key)
    if path is None:
        return
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass
