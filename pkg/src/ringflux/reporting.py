"""Delimited and JSON artifact emission.

Every artifact is written atomically (temp file in the target directory,
then rename) and is byte-identical for identical inputs: no timestamps, no
environment-dependent content, floats via repr so they re-parse exactly.
CSV files start with a schema-version comment line; JSON carries the same
version as a top-level key. Counts that may exceed double precision are
serialized as decimal strings.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

SCHEMA_VERSION = 1


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_text_atomic(path, text: str) -> Path:
    path = Path(path)
    if path.parent and not path.parent.is_dir():
        raise OSError(f"output directory {path.parent} does not exist")
    handle, tmp_name = tempfile.mkstemp(
        dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as tmp:
            tmp.write(text)
        # mkstemp creates 0600; match what a plain open() would have produced
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp_name, 0o666 & ~mask)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    return path


def write_csv(path, columns, rows) -> Path:
    lines = [f"# schema-version: {SCHEMA_VERSION}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(value) for value in row))
    return write_text_atomic(path, "\n".join(lines) + "\n")


def read_csv(path):
    """Parse a file written by write_csv back into (columns, string rows)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# schema-version:"):
        raise ValueError(f"{path} lacks the schema-version header")
    columns = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line]
    return columns, rows


def write_json(path, payload: dict) -> Path:
    document = {"schema_version": SCHEMA_VERSION}
    document.update(payload)
    return write_text_atomic(
        path, json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    )


def read_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
