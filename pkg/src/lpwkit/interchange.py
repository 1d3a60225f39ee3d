"""JSON interchange documents (``format_version`` 1).

One document per object, tagged by ``kind``. A ``bundle`` document groups
several objects so that CLI stages can be piped into each other. The field
layout is pinned by ``schema/interchange-v1.json``.
"""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable

import jsonschema

from .core import (
    Graph,
    LayeredPathDecomposition,
    Layering,
    PathDecomposition,
    StackLayout,
    TrackLayout,
)
from .errors import MalformedInputError

FORMAT_VERSION = 1


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("lpwkit").joinpath("schema/interchange-v1.json").read_text()
    return json.loads(text)


def validate_document(doc: Any) -> None:
    if isinstance(doc, dict) and doc.get("format_version", FORMAT_VERSION) != FORMAT_VERSION:
        raise MalformedInputError(f"unsupported format_version {doc.get('format_version')!r}")
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        raise MalformedInputError(f"document fails schema: {exc.message}") from None


def _levels_list(l: Layering, n: int | None) -> list[int]:
    if n is None:
        n = max(l.levels, default=-1) + 1
    return l.as_list(n)


def to_document(obj: Any, n: int | None = None) -> dict:
    """Serialize a core object. ``n`` sizes the level array of layerings."""
    head = {"format_version": FORMAT_VERSION}
    if isinstance(obj, Graph):
        return {"kind": "graph", **head, "n": obj.n, "edges": [list(e) for e in obj.edges]}
    if isinstance(obj, Layering):
        return {"kind": "layering", **head, "s": obj.s, "levels": _levels_list(obj, n)}
    if isinstance(obj, LayeredPathDecomposition):
        if n is None:
            n = max((max(b) + 1 for b in obj.bags if b), default=0)
        return {
            "kind": "layered_path_decomposition",
            **head,
            "bags": [sorted(b) for b in obj.bags],
            "layering": {"s": obj.layering.s, "levels": _levels_list(obj.layering, n)},
            "layered_width": obj.layered_width,
        }
    if isinstance(obj, PathDecomposition):
        return {"kind": "path_decomposition", **head, "bags": [sorted(b) for b in obj.bags]}
    if isinstance(obj, TrackLayout):
        return {"kind": "track_layout", **head, "tracks": [list(t) for t in obj.tracks]}
    if isinstance(obj, StackLayout):
        edges = sorted(obj.assignment)
        return {
            "kind": "stack_layout",
            **head,
            "order": list(obj.order),
            "edges": [list(e) for e in edges],
            "stacks": [obj.assignment[e] for e in edges],
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc: dict, validate: bool = True) -> Any:
    """Parse a single (non-bundle) document into a core object.

    Auxiliary kinds (``trace``, ``oracle_result`` ...) are returned as the raw
    dict.
    """
    if validate:
        validate_document(doc)
    kind = doc["kind"]
    if kind == "graph":
        return Graph(doc["n"], doc["edges"])
    if kind == "layering":
        return Layering(doc["levels"], doc["s"])
    if kind == "path_decomposition":
        return PathDecomposition(doc["bags"])
    if kind == "layered_path_decomposition":
        lay = doc["layering"]
        lpd = LayeredPathDecomposition(PathDecomposition(doc["bags"]), Layering(lay["levels"], lay["s"]))
        return lpd
    if kind == "track_layout":
        return TrackLayout(doc["tracks"])
    if kind == "stack_layout":
        if len(doc["edges"]) != len(doc["stacks"]):
            raise MalformedInputError("stack array length differs from edge array length")
        return StackLayout(doc["order"], {tuple(e): s for e, s in zip(doc["edges"], doc["stacks"])})
    if kind == "bundle":
        raise MalformedInputError("bundle passed where a single object was expected")
    return doc


def bundle(objects: Iterable[dict], **extra) -> dict:
    return {"kind": "bundle", "format_version": FORMAT_VERSION, "objects": list(objects), **extra}


def iter_objects(doc: dict) -> list[dict]:
    validate_document(doc)
    if doc["kind"] == "bundle":
        return list(doc["objects"])
    return [doc]


def dumps(doc: dict) -> str:
    """Canonical text form; identical inputs give byte-identical output."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"not valid JSON: {exc}") from None


def content_hash(doc: dict) -> str:
    return hashlib.sha256(dumps(doc).encode()).hexdigest()
