"""Instance and solution files.

Instances are JSON documents with three arrays plus optional extras:

    {
      "vertices": [{"id": 0, "rotation": [0, 2], "coord": [1.0, 2.0]}, ...],
      "arcs":     [{"id": 0, "tail": 0, "head": 1, "capacity": 1}, ...],
      "demands":  [{"id": 0, "tail": 5, "head": 0, "request": 1}, ...],
      "outer_face": [3, "left"]
    }

Rotations list incident arc ids in anticlockwise order. ``coord`` is only
used for drawing. ``outer_face`` names a face by the smallest (arc, side)
pair on its boundary. A demand asks for ``request`` paths from its head to
its tail. The writer emits a canonical form (entries sorted by id, fixed
key order, two-space indent) so write(parse(x)) is a canonicalizer and
parse(write(x)) is the identity.

Solution files list, per demand, the arc-id paths of the original
instance:

    {"demands": [{"id": 0, "paths": [[0, 4, 7], [2, 5]]}, ...]}
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional

from .embedding import EmbeddedDigraph
from .errors import InstanceFormatError
from .instances import Demand, Instance


def _require(obj, key, where, kind=None):
    if not isinstance(obj, dict):
        raise InstanceFormatError(where, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise InstanceFormatError(f"{where}.{key}", "missing field")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise InstanceFormatError(f"{where}.{key}",
                                  f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def parse_instance(data: bytes | str) -> Instance:
    """Parse and validate an instance document.

    All referential constraints are checked here (unknown or duplicate
    ids, rotations that do not match arc incidences); embedding-level
    validation is a separate step.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"offset {e.pos}", f"invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict):
        raise InstanceFormatError("$", "top level must be an object")

    vertices = {}
    rotations = {}
    coords = {}
    for i, v in enumerate(_require(doc, "vertices", "$", list)):
        where = f"vertices[{i}]"
        vid = _require(v, "id", where, int)
        if vid < 0:
            raise InstanceFormatError(f"{where}.id", "ids must be non-negative")
        if vid in vertices:
            raise InstanceFormatError(f"{where}.id", f"duplicate vertex id {vid}")
        vertices[vid] = v
        rot = _require(v, "rotation", where, list)
        if not all(isinstance(a, int) for a in rot):
            raise InstanceFormatError(f"{where}.rotation", "arc ids must be integers")
        rotations[vid] = rot
        if "coord" in v:
            c = v["coord"]
            if (not isinstance(c, list) or len(c) != 2
                    or not all(isinstance(x, (int, float)) for x in c)):
                raise InstanceFormatError(f"{where}.coord", "expected [x, y]")
            coords[vid] = (float(c[0]), float(c[1]))

    arcs = {}
    capacities = {}
    for i, a in enumerate(_require(doc, "arcs", "$", list)):
        where = f"arcs[{i}]"
        aid = _require(a, "id", where, int)
        if aid < 0:
            raise InstanceFormatError(f"{where}.id", "ids must be non-negative")
        if aid in arcs:
            raise InstanceFormatError(f"{where}.id", f"duplicate arc id {aid}")
        tail = _require(a, "tail", where, int)
        head = _require(a, "head", where, int)
        for end, name in ((tail, "tail"), (head, "head")):
            if end not in vertices:
                raise InstanceFormatError(f"{where}.{name}", f"unknown vertex {end}")
        cap = _require(a, "capacity", where, int)
        if cap < 0:
            raise InstanceFormatError(f"{where}.capacity", "capacity must be >= 0")
        arcs[aid] = (tail, head)
        capacities[aid] = cap

    demands = []
    seen_d = set()
    for i, d in enumerate(_require(doc, "demands", "$", list)):
        where = f"demands[{i}]"
        did = _require(d, "id", where, int)
        if did in seen_d:
            raise InstanceFormatError(f"{where}.id", f"duplicate demand id {did}")
        seen_d.add(did)
        tail = _require(d, "tail", where, int)
        head = _require(d, "head", where, int)
        for end, name in ((tail, "tail"), (head, "head")):
            if end not in vertices:
                raise InstanceFormatError(f"{where}.{name}", f"unknown vertex {end}")
        req = _require(d, "request", where, int)
        if req < 0:
            raise InstanceFormatError(f"{where}.request", "request must be >= 0")
        if tail == head:
            raise InstanceFormatError(f"{where}.tail", "demand endpoints must differ")
        demands.append(Demand(id=did, tail=tail, head=head, request=req))

    for vid, rot in rotations.items():
        incident = {a for a, (t, h) in arcs.items() if vid in (t, h)}
        listed = set(rot)
        if len(listed) != len(rot):
            raise InstanceFormatError(f"vertices[?].rotation",
                                      f"vertex {vid} lists an arc twice")
        if listed != incident:
            raise InstanceFormatError(
                "rotation", f"vertex {vid}: rotation {sorted(listed)} does not match "
                            f"incident arcs {sorted(incident)}")

    outer = None
    if "outer_face" in doc and doc["outer_face"] is not None:
        of = doc["outer_face"]
        if (not isinstance(of, list) or len(of) != 2 or not isinstance(of[0], int)
                or of[1] not in ("left", "right")):
            raise InstanceFormatError("outer_face", 'expected [arc_id, "left"|"right"]')
        if of[0] not in arcs:
            raise InstanceFormatError("outer_face", f"unknown arc {of[0]}")
        outer = (of[0], of[1])

    graph = EmbeddedDigraph(vertices.keys(), arcs, rotations)
    return Instance(
        graph=graph,
        capacities=capacities,
        demands=sorted(demands, key=lambda d: d.id),
        normalized=bool(doc.get("normalized", False)),
        coords=coords or None,
        outer_face_key=outer,
    )


def write_instance(inst: Instance) -> bytes:
    """Serialize an instance in canonical form."""
    g = inst.graph
    doc: dict = {"vertices": [], "arcs": [], "demands": []}
    for v in g.vertices:
        entry: dict = {"id": v, "rotation": list(g.rotation[v])}
        if inst.coords and v in inst.coords:
            x, y = inst.coords[v]
            entry["coord"] = [x, y]
        doc["vertices"].append(entry)
    for a in g.arcs:
        doc["arcs"].append({
            "id": a, "tail": g.arc_tail[a], "head": g.arc_head[a],
            "capacity": inst.capacities[a],
        })
    for d in sorted(inst.demands, key=lambda d: d.id):
        doc["demands"].append({
            "id": d.id, "tail": d.tail, "head": d.head, "request": d.request,
        })
    if inst.outer_face_key is not None:
        doc["outer_face"] = [inst.outer_face_key[0], inst.outer_face_key[1]]
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def read_instance(path) -> Instance:
    with open(path, "rb") as f:
        return parse_instance(f.read())


def write_instance_file(inst: Instance, path) -> None:
    with open(path, "wb") as f:
        f.write(write_instance(inst))


def parse_solution(data: bytes | str) -> Dict[int, List[List[int]]]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"offset {e.pos}", f"invalid JSON: {e.msg}") from None
    out: Dict[int, List[List[int]]] = {}
    for i, d in enumerate(_require(doc, "demands", "$", list)):
        where = f"demands[{i}]"
        did = _require(d, "id", where, int)
        paths = _require(d, "paths", where, list)
        for j, p in enumerate(paths):
            if not isinstance(p, list) or not all(isinstance(a, int) for a in p):
                raise InstanceFormatError(f"{where}.paths[{j}]", "expected a list of arc ids")
        if did in out:
            raise InstanceFormatError(f"{where}.id", f"duplicate demand id {did}")
        out[did] = [list(p) for p in paths]
    return out


def write_solution(projected: Dict[int, List[List[int]]]) -> bytes:
    doc = {"demands": [{"id": did, "paths": [list(p) for p in paths]}
                       for did, paths in sorted(projected.items())]}
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def read_solution(path) -> Dict[int, List[List[int]]]:
    with open(path, "rb") as f:
        return parse_solution(f.read())
