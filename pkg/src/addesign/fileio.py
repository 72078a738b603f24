"""Design, family and manifest files.

Design files are JSON documents with the header fields p, n, v, k,
lambda and a ``blocks`` list; each block is a list of k points, each
point a list of n digits in [0, p).  Family files carry a ``reps`` list
instead of ``blocks``.  Writers sort blocks and in-block points
ascending by point index and emit a fixed layout, so identical designs
serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .designs import Design
from .geometry import Geometry
from .orbits import Family, family_from_blocks


class FileFormatError(ValueError):
    """Raised for unparseable or internally inconsistent files."""


def _fail(path, where: str, problem: str) -> FileFormatError:
    return FileFormatError(f"{path}: {where}: {problem}")


def _require_int(doc, key, path) -> int:
    if key not in doc:
        raise _fail(path, "header", f"missing field '{key}'")
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise _fail(path, f"field '{key}'", f"expected an integer, got {value!r}")
    return value


def _load_document(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail(path, f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    if not isinstance(doc, dict):
        raise _fail(path, "document", "top level must be an object")
    return doc


def _read_header(doc, path) -> Geometry:
    p = _require_int(doc, "p", path)
    n = _require_int(doc, "n", path)
    v = _require_int(doc, "v", path)
    try:
        geom = Geometry(p, n)
    except ValueError as exc:
        raise _fail(path, "header", str(exc)) from exc
    if v != geom.size:
        raise _fail(path, "header", f"v={v} but p^n={geom.size}")
    return geom


def _read_blocks(doc, key, path, geom: Geometry, k: int) -> list[tuple[int, ...]]:
    raw = doc.get(key)
    if not isinstance(raw, list):
        raise _fail(path, f"field '{key}'", "expected a list")
    blocks = []
    for i, entry in enumerate(raw):
        where = f"{key}[{i}]"
        if not isinstance(entry, list) or len(entry) != k:
            raise _fail(path, where, f"expected a list of {k} points")
        indices = []
        for j, pt in enumerate(entry):
            if not isinstance(pt, list) or len(pt) != geom.n:
                raise _fail(path, f"{where}[{j}]", f"expected {geom.n} digits")
            try:
                indices.append(geom.encode(pt))
            except ValueError as exc:
                raise _fail(path, f"{where}[{j}]", str(exc)) from exc
        if len(set(indices)) != k:
            raise _fail(path, where, "repeated points inside a block")
        blocks.append(tuple(sorted(indices)))
    return blocks


def _dump(geom: Geometry, header_extra: list[tuple[str, object]], key: str, blocks) -> str:
    lines = ["{"]
    lines.append(f'  "p": {geom.p},')
    lines.append(f'  "n": {geom.n},')
    lines.append(f'  "v": {geom.size},')
    for name, value in header_extra:
        lines.append(f'  "{name}": {json.dumps(value)},')
    if not blocks:
        lines.append(f'  "{key}": []')
    else:
        lines.append(f'  "{key}": [')
        body = [
            "    " + json.dumps([list(geom.decode(q)) for q in block], separators=(",", ":"))
            for block in blocks
        ]
        lines.append(",\n".join(body))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def design_to_text(design: Design) -> str:
    if design.geometry is None:
        raise ValueError("only designs with geometry can be serialized")
    blocks = sorted(design.blocks)
    extra = [("k", design.k), ("lambda", design.lam)]
    return _dump(design.geometry, extra, "blocks", blocks)


def write_design(design: Design, path) -> Path:
    path = Path(path)
    path.write_text(design_to_text(design), encoding="utf-8")
    return path


def read_design(path) -> Design:
    doc = _load_document(path)
    geom = _read_header(doc, path)
    k = _require_int(doc, "k", path)
    lam = doc.get("lambda")
    if lam is not None and (not isinstance(lam, int) or isinstance(lam, bool)):
        raise _fail(path, "field 'lambda'", f"expected an integer or null, got {lam!r}")
    blocks = _read_blocks(doc, "blocks", path, geom, k)
    try:
        return Design(v=geom.size, k=k, blocks=blocks, lam=lam, geometry=geom)
    except ValueError as exc:
        raise _fail(path, "blocks", str(exc)) from exc


def family_to_text(family: Family) -> str:
    geom = family.geometry
    k = len(family.reps[0].block) if family.reps else 2 * geom.p
    return _dump(geom, [("k", k)], "reps", [r.block for r in family.reps])


def write_family(family: Family, path) -> Path:
    path = Path(path)
    path.write_text(family_to_text(family), encoding="utf-8")
    return path


def read_family(path) -> Family:
    doc = _load_document(path)
    geom = _read_header(doc, path)
    k = _require_int(doc, "k", path)
    blocks = _read_blocks(doc, "reps", path, geom, k)
    try:
        return family_from_blocks(geom, blocks)
    except ValueError as exc:
        raise _fail(path, "reps", str(exc)) from exc


def write_manifest(manifest: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path
