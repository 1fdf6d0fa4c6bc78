"""Deterministic JSON and DOT serialization for shapes.

Element order is (dimension, serialized id) everywhere, so equal shapes
render to identical bytes.
"""

from __future__ import annotations

import json

from .ids import sid
from .marked import MarkedMap, MarkedShape
from .molecule import Molecule
from .poset import MINUS, PLUS, OgPoset, build


def _poset(shape) -> OgPoset:
    if isinstance(shape, Molecule):
        return shape.poset
    if isinstance(shape, MarkedShape):
        return shape.poset
    return shape


def poset_to_dict(shape) -> dict:
    p = _poset(shape)
    order = sorted(p.dim_of, key=lambda x: (p.dim_of[x], sid(x)))
    doc = {
        "elements": [{"id": sid(x), "dim": p.dim_of[x]} for x in order],
        "faces": {
            sid(x): {
                MINUS: sorted(map(sid, p.faces(x, MINUS))),
                PLUS: sorted(map(sid, p.faces(x, PLUS))),
            }
            for x in order
            if p.dim_of[x] > 0
        },
    }
    if isinstance(shape, Molecule):
        doc["certificate"] = shape.certificate
    if isinstance(shape, MarkedShape):
        doc["marked"] = sorted(map(sid, shape.marking))
    return doc


def poset_from_dict(doc: dict) -> OgPoset:
    elements = {e["id"]: e["dim"] for e in doc["elements"]}
    faces = {
        x: (set(sides.get(MINUS, ())), set(sides.get(PLUS, ())))
        for x, sides in doc.get("faces", {}).items()
    }
    return build(elements, faces)


def marked_map_to_dict(m: MarkedMap) -> dict:
    return {
        "map": {sid(k): sid(v) for k, v in sorted(m.mapping.items(), key=lambda i: sid(i[0]))},
        "entire": m.entire,
    }


def to_json_bytes(doc) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def to_dot_bytes(shape) -> bytes:
    p = _poset(shape)
    order = sorted(p.dim_of, key=lambda x: (p.dim_of[x], sid(x)))
    lines = ["digraph shape {"]
    for x in order:
        lines.append(f'  "{sid(x)}" [label="{sid(x)}:{p.dim_of[x]}"];')
    edges = []
    for x in order:
        if p.dim_of[x] == 0:
            continue
        for sign, color in ((MINUS, "crimson"), (PLUS, "navy")):
            for f in sorted(map(sid, p.faces(x, sign))):
                edges.append(f'  "{f}" -> "{sid(x)}" [color={color}];')
    lines.extend(sorted(edges))
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def render(shape, fmt: str) -> bytes:
    """Serialize a shape; fmt is "json" or "dot"."""
    if fmt == "json":
        return to_json_bytes(poset_to_dict(shape))
    if fmt == "dot":
        return to_dot_bytes(shape)
    raise ValueError(f"unknown format {fmt!r}")
