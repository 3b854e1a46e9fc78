"""
JSON artifacts, the on-disk result cache and text rendering for export.

Artifacts are JSON objects with a ``kind`` field: ``homology``, ``ss_page``,
``lhs`` or ``group``.  Output is canonical (sorted keys, fixed separators) so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .errors import InputError, UnknownFormat
from .exactla import FinAbGroup

VERSION = "0.1.0"
CACHE_ENV = "HOMALG_CACHE_DIR"
FORMATS = ("json", "table")


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_dir():
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def cache_key(op, inputs) -> str:
    blob = json.dumps({"op": op, "inputs": inputs, "version": VERSION}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def cached(op, inputs, compute):
    """Return ``(result, hit)``; ``compute()`` must return a JSON-able object.

    Without a cache directory this just computes.  Writes go through a
    temporary file and an atomic rename, so concurrent writers of the same
    key are harmless.
    """
    d = cache_dir()
    if d is None:
        return compute(), False
    path = d / f"{cache_key(op, inputs)}.json"
    if path.exists():
        try:
            return json.loads(path.read_text()), True
        except json.JSONDecodeError:
            pass        # torn or foreign file: recompute and overwrite
    result = compute()
    d.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(canonical(result))
    os.replace(tmp, path)
    return result, False


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def write_text(path, text):
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + ("" if text.endswith("\n") else "\n"))


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _group_str(d):
    if "dimension" in d:
        return str(d["dimension"])
    return str(FinAbGroup.from_json(d))


def grid_from_entries(entries):
    """Aligned p-columns / q-rows grid from ``{(p, q): value}``."""
    from .spectral import SSPage
    return SSPage(0, entries).grid()


def render_table(artifact) -> str:
    if isinstance(artifact, list):
        return "\n".join(_group_str(d) for d in artifact)
    kind = artifact.get("kind")
    if kind == "homology":
        name = "H^" if artifact.get("cohomology") else "H_"
        ring = artifact.get("ring")
        if ring == "Fp":
            ring = f"F{artifact['p']}"
        lines = [f"{artifact.get('group', 'G')} with coefficients {ring}"]
        for k, d in enumerate(artifact["degrees"]):
            lines.append(f"  {name}{k} = {_group_str(d)}")
        return "\n".join(lines)
    if kind in ("ss_page", "lhs"):
        entries = {}
        for e in artifact["entries"]:
            v = e["value"]
            entries[(e["p"], e["q"])] = _group_str(v) if isinstance(v, dict) else v
        head = f"E^{artifact.get('page', 2)}"
        return head + "\n" + grid_from_entries(entries)
    if kind == "group":
        n = artifact["order"]
        w = len(str(n - 1))
        rows = [" ".join(str(x).rjust(w) for x in row) for row in artifact["table"]]
        return f"group of order {n}\n" + "\n".join(rows)
    raise InputError(f"cannot render artifact kind {kind!r}")


def export(artifact, fmt) -> str:
    if fmt not in FORMATS:
        raise UnknownFormat(f"unknown format {fmt!r}; use one of {', '.join(FORMATS)}")
    if fmt == "json":
        return canonical(artifact)
    return render_table(artifact)
