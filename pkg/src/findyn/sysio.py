"""JSON system files.

Layout::

    {"labels": [...],
     "metric": {"type": "table", "dist": [[...], ...]}
             | {"type": "euclidean", "coords": [[...], ...]},
     "map": [...],
     "meta": {...}}

Exact rationals are written as ``"p/q"`` strings (``"3"`` for integers),
floats as JSON numbers.  Emission always uses the table form, so a reload
reproduces the system exactly and re-emission is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InputFormatError
from .space import FiniteMetricSpace, FiniteSystem, as_number


def number_to_json(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def system_to_dict(sys: FiniteSystem, meta: dict | None = None) -> dict:
    doc = {
        "labels": list(sys.labels),
        "metric": {"type": "table",
                   "dist": [[number_to_json(v) for v in row] for row in sys.space.dist]},
        "map": list(sys.fmap),
    }
    if meta:
        doc["meta"] = meta
    return doc


def dumps_system(sys: FiniteSystem, meta: dict | None = None) -> str:
    return json.dumps(system_to_dict(sys, meta), indent=1) + "\n"


def _field(doc, name, kind):
    if name not in doc:
        raise InputFormatError(f"missing field {name!r}")
    value = doc[name]
    if not isinstance(value, kind):
        raise InputFormatError(f"field {name!r} must be a {kind.__name__}")
    return value


def _numbers(rows, where):
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputFormatError(f"{where}[{i}] must be a list")
        try:
            out.append([as_number(v) for v in row])
        except InputFormatError as exc:
            raise InputFormatError(f"{where}[{i}]: {exc}") from None
    return out


def system_from_dict(doc) -> FiniteSystem:
    if not isinstance(doc, dict):
        raise InputFormatError("system document must be a JSON object")
    labels = _field(doc, "labels", list)
    metric = _field(doc, "metric", dict)
    fmap = _field(doc, "map", list)
    kind = metric.get("type")
    if kind == "table":
        dist = _numbers(_field(metric, "dist", list), "metric.dist")
        space = FiniteMetricSpace(tuple(labels), tuple(tuple(r) for r in dist))
    elif kind == "euclidean":
        coords = _numbers(_field(metric, "coords", list), "metric.coords")
        space = FiniteMetricSpace.from_coords(labels, coords)
    else:
        raise InputFormatError(f"field 'metric.type' must be 'table' or 'euclidean', got {kind!r}")
    try:
        return FiniteSystem(space, tuple(fmap))
    except InputFormatError as exc:
        raise InputFormatError(f"field 'map': {exc}") from None


def loads_system(text: str) -> FiniteSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return system_from_dict(doc)


def load_system(path) -> FiniteSystem:
    return loads_system(Path(path).read_text())
