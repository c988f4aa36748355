"""JSON encoding of complexes and set families.

Ambient complexes::

    {"type": "simplicial", "facets": [[0, 1, 2], [2, 3]]}
    {"type": "cubical", "dim": 2, "box": [[0, 8], [0, 8]]}
    {"type": "cubical", "dim": 2, "grid": [8, 8]}          # same as the box above
    {"type": "cubical", "dim": 2, "cubes": [[[0, 1], [0, 0]], ...]}

A family adds ``"members": {name: member}`` where a member is either a list
of maximal cells (simplices, or cubes as interval lists) or ``{"box": ...}``.
Writers emit maximal cells in sorted order, so encoding is deterministic.
"""
from __future__ import annotations

import json
from pathlib import Path

from .complexes import (Complex, CubicalComplex, SetFamily, SimplicialComplex, build_cubical, build_simplicial,
                        cube_intervals, cubical_box, is_box, maximal_cells)
from .errors import MalformedInputError

FAMILY_FORMAT = "topohelly.family"
FORMAT_VERSION = 1


def _box_bounds(K: CubicalComplex) -> list:
    lo = [min(c[i] for c in K.cells) // 2 for i in range(K.dimension)]
    hi = [max(c[i] for c in K.cells) // 2 for i in range(K.dimension)]
    return [[a, b] for a, b in zip(lo, hi)]


def complex_to_json(K: Complex) -> dict:
    if K.kind == "simplicial":
        return {"type": "simplicial", "facets": [list(f) for f in maximal_cells(K)]}
    if is_box(K):
        return {"type": "cubical", "dim": K.dimension, "box": _box_bounds(K)}
    return {"type": "cubical", "dim": K.dimension, "cubes": [cube_intervals(c) for c in maximal_cells(K)]}


def _int_list(x, what):
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise MalformedInputError("%s must be a list of integers" % what)
    return x


def _parse_box(box, dim):
    if not isinstance(box, list) or len(box) != dim:
        raise MalformedInputError("box must list one [lo, hi] pair per axis")
    pairs = [_int_list(iv, "box interval") for iv in box]
    if any(len(iv) != 2 for iv in pairs):
        raise MalformedInputError("box intervals are [lo, hi] pairs")
    return cubical_box([a for a, _ in pairs], [b for _, b in pairs])


def _parse_cubes(cubes, dim):
    if not isinstance(cubes, list):
        raise MalformedInputError("cubes must be a list")
    for c in cubes:
        if not isinstance(c, list) or len(c) != dim:
            raise MalformedInputError("cube %r does not have %d intervals" % (c, dim))
        for iv in c:
            if len(_int_list(iv, "cube interval")) != 2:
                raise MalformedInputError("cube intervals are [lo, hi] pairs")
    return build_cubical(cubes, dim)


def complex_from_json(doc) -> Complex:
    if not isinstance(doc, dict) or "type" not in doc:
        raise MalformedInputError("complex must be an object with a 'type' field")
    kind = doc["type"]
    if kind == "simplicial":
        facets = doc.get("facets")
        if not isinstance(facets, list):
            raise MalformedInputError("simplicial complex needs a 'facets' list")
        return build_simplicial(_int_list(f, "facet") for f in facets)
    if kind == "cubical":
        dim = doc.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise MalformedInputError("cubical complex needs a positive integer 'dim'")
        if "grid" in doc:
            ext = _int_list(doc["grid"], "grid")
            if len(ext) != dim:
                raise MalformedInputError("grid has %d extents for dim %d" % (len(ext), dim))
            return cubical_box([0] * dim, ext)
        if "box" in doc:
            return _parse_box(doc["box"], dim)
        if "cubes" in doc:
            return _parse_cubes(doc["cubes"], dim)
        raise MalformedInputError("cubical complex needs 'grid', 'box' or 'cubes'")
    raise MalformedInputError("unknown complex type %r" % (kind,))


def _member_to_json(m: Complex):
    if m.kind == "cubical":
        if is_box(m):
            return {"box": _box_bounds(m)}
        return [cube_intervals(c) for c in maximal_cells(m)]
    return [list(f) for f in maximal_cells(m)]


def _member_from_json(doc, ambient: Complex) -> Complex:
    if ambient.kind == "cubical":
        d = ambient.dimension
        if isinstance(doc, dict):
            if set(doc) != {"box"}:
                raise MalformedInputError("member objects have the single key 'box'")
            return _parse_box(doc["box"], d)
        if not isinstance(doc, list):
            raise MalformedInputError("member must be a cube list or a box")
        if not doc:
            return CubicalComplex(d, frozenset(), validate=False)
        return _parse_cubes(doc, d)
    if not isinstance(doc, list):
        raise MalformedInputError("member must be a list of simplices")
    if not doc:
        return SimplicialComplex(frozenset(), validate=False)
    return build_simplicial(_int_list(f, "simplex") for f in doc)


def family_to_json(family: SetFamily) -> dict:
    return {
        "format": FAMILY_FORMAT,
        "version": FORMAT_VERSION,
        "ambient": complex_to_json(family.ambient),
        "members": {name: _member_to_json(m) for name, m in zip(family.names, family.members)},
    }


def family_from_json(doc) -> SetFamily:
    if not isinstance(doc, dict) or "ambient" not in doc or "members" not in doc:
        raise MalformedInputError("family needs 'ambient' and 'members'")
    ambient = complex_from_json(doc["ambient"])
    members = doc["members"]
    if isinstance(members, list):
        names = tuple("F%d" % (i + 1) for i in range(len(members)))
    elif isinstance(members, dict):
        names = tuple(members)
        members = list(members.values())
    else:
        raise MalformedInputError("'members' must be an object or a list")
    parsed = tuple(_member_from_json(m, ambient) for m in members)
    return SetFamily(ambient, parsed, names)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise MalformedInputError("cannot read %s: %s" % (path, e)) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError("%s is not valid JSON: %s" % (path, e)) from e


def load_family(path) -> SetFamily:
    return family_from_json(read_json(path))


def load_complex(path) -> Complex:
    """A bare complex, or the ambient complex of a family file."""
    doc = read_json(path)
    if isinstance(doc, dict) and "ambient" in doc:
        doc = doc["ambient"]
    return complex_from_json(doc)
