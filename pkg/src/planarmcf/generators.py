"""Seeded instance generators for tests and benchmarks.

Both families build capacities by overlaying one unit path per requested
unit, which makes the balance condition hold by construction. Feasibility
is not guaranteed: unit destinations are permuted among demands, so the
instance only promises that a fractionally consistent loading exists, and
an exact solver or oracle must decide whether an integral routing does.
"""

from __future__ import annotations

import math
import random
from typing import Dict, List, Optional, Tuple

from .embedding import EmbeddedDigraph
from .errors import GenerationError, NormalizeError
from .instances import Demand, Instance, normalize


def rotations_from_coords(vertex_ids, arcs: Dict[int, Tuple[int, int]],
                          coords: Dict[int, Tuple[float, float]]) -> Dict[int, list]:
    """Anticlockwise rotations for a straight-line drawing."""
    rot = {}
    for v in vertex_ids:
        incident = []
        for a, (t, h) in arcs.items():
            if t == v:
                other = h
            elif h == v:
                other = t
            else:
                continue
            dx = coords[other][0] - coords[v][0]
            dy = coords[other][1] - coords[v][1]
            incident.append(((math.atan2(dy, dx) % (2 * math.pi)), a))
        incident.sort()
        rot[v] = [a for _ang, a in incident]
    return rot


def _compact_ids(vertices, arcs, coords):
    """Relabel vertices and arcs densely from zero, preserving order."""
    vmap = {v: i for i, v in enumerate(sorted(vertices))}
    amap = {a: i for i, a in enumerate(sorted(arcs))}
    new_arcs = {amap[a]: (vmap[t], vmap[h]) for a, (t, h) in arcs.items()}
    new_coords = {vmap[v]: coords[v] for v in vertices}
    return vmap, amap, new_arcs, new_coords


def _overlay_instance(used_vertices, base_arcs, usage, demands, coords,
                      terminal_map) -> Instance:
    """Assemble a trimmed instance from per-arc overlay counts."""
    arcs = {a: base_arcs[a] for a, n in usage.items() if n > 0}
    vmap, amap, new_arcs, new_coords = _compact_ids(used_vertices, arcs, coords)
    rot = rotations_from_coords(range(len(vmap)), new_arcs, new_coords)
    graph = EmbeddedDigraph(range(len(vmap)), new_arcs, rot)
    caps = {amap[a]: usage[a] for a in arcs}
    new_demands = [
        Demand(id=d.id, tail=vmap[d.tail], head=vmap[d.head], request=d.request)
        for d in demands
    ]
    inst = Instance(graph=graph, capacities=caps, demands=new_demands,
                    coords=new_coords)
    if terminal_map is not None:
        terminal_map.update(vmap)
    return inst


def _assign_unit_sinks(rng: random.Random, units, sinks, ok) -> Optional[list]:
    """Permute sink slots among units subject to a per-pair predicate."""
    slots = list(sinks)
    for _ in range(64):
        rng.shuffle(slots)
        if all(ok(u, t) for u, t in zip(units, slots)):
            return list(slots)
    return None


def gen_grid(width: int, height: int, k: int, r: int, seed: int) -> Instance:
    """Acyclic grid instance: arcs run rightward and downward.

    Sources sit on the top row and sinks on the bottom row; each demand's
    request is drawn from 1..r. Capacities are the overlay counts of one
    monotone staircase path per unit, with unit destinations shuffled
    among demands. Deterministic in the seed.
    """
    if width < 2 or height < 2:
        raise GenerationError("grid needs width >= 2 and height >= 2")
    if k < 1 or r < 1:
        raise GenerationError("need k >= 1 demands and r >= 1 max request")
    if k > width:
        raise GenerationError("too many demands for the grid width")
    rng = random.Random(seed)
    for _attempt in range(64):
        inst = _try_grid(rng, width, height, k, r)
        if inst is None:
            continue
        try:
            normalize(inst)
        except NormalizeError:
            continue
        return inst
    raise GenerationError(f"no valid grid instance for {width}x{height}, k={k}, r={r}")


def _try_grid(rng: random.Random, width: int, height: int, k: int, r: int):
    def vid(x, y):
        return y * width + x

    coords = {vid(x, y): (float(x), float(y))
              for x in range(width) for y in range(height)}
    base_arcs = {}
    aid = 0
    for y in range(height):
        for x in range(width):
            if x + 1 < width:
                base_arcs[aid] = (vid(x, y), vid(x + 1, y))
                aid += 1
            if y - 1 >= 0:
                base_arcs[aid] = (vid(x, y), vid(x, y - 1))
                aid += 1

    top = height - 1
    source_xs = rng.sample(range(width), k)
    sink_xs = rng.sample(range(width), k)
    sources = [vid(x, top) for x in source_xs]
    sinks = [vid(x, 0) for x in sink_xs]
    requests = [rng.randint(1, r) for _ in range(k)]

    units = []
    slots = []
    for h in range(k):
        for _i in range(requests[h]):
            units.append(sources[h])
            slots.append(sinks[h])
    assigned = _assign_unit_sinks(
        rng, units, slots,
        ok=lambda s, t: (t % width) >= (s % width))
    if assigned is None:
        return None

    usage: Dict[int, int] = {}
    arc_at = {(t, h): a for a, (t, h) in base_arcs.items()}
    for s, t in zip(units, assigned):
        moves = ["R"] * ((t % width) - (s % width)) + ["D"] * (s // width)
        rng.shuffle(moves)
        cur = s
        for m in moves:
            x, y = cur % width, cur // width
            nxt = vid(x + 1, y) if m == "R" else vid(x, y - 1)
            usage[arc_at[(cur, nxt)]] = usage.get(arc_at[(cur, nxt)], 0) + 1
            cur = nxt

    used_vertices = set()
    for a, n in usage.items():
        if n > 0:
            t, h = base_arcs[a]
            used_vertices.add(t)
            used_vertices.add(h)
    if not used_vertices:
        return None
    demands = [Demand(id=h, tail=sinks[h], head=sources[h], request=requests[h])
               for h in range(k)]
    for d in demands:
        if d.tail not in used_vertices or d.head not in used_vertices:
            return None
    return _overlay_instance(used_vertices, base_arcs, usage, demands, coords, None)


def gen_outer_boundary(n: int, k: int, seed: int, rmax: int = 2) -> Instance:
    """Outerplanar instance: all vertices on one face, arcs ascend by index.

    Vertices sit in convex position; the supply graph is a subset of the
    boundary path plus non-crossing chords, loaded by one unit path per
    requested unit. All sources and demand tails end up on the outer face,
    whose key is stored on the instance. Deterministic in the seed.
    """
    if n < 3:
        raise GenerationError("need at least 3 boundary vertices")
    if k < 1 or rmax < 1:
        raise GenerationError("need k >= 1 demands and rmax >= 1")
    if 2 * k > n:
        raise GenerationError("too many demands for the vertex count")
    rng = random.Random(seed)
    for _attempt in range(64):
        inst = _try_outer(rng, n, k, rmax)
        if inst is None:
            continue
        try:
            normalize(inst)
        except NormalizeError:
            continue
        return inst
    raise GenerationError(f"no valid outer-boundary instance for n={n}, k={k}")


def _try_outer(rng: random.Random, n: int, k: int, rmax: int):
    coords = {i: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
              for i in range(n)}
    base_arcs = {}
    aid = 0
    adjacency: Dict[int, list] = {i: [] for i in range(n)}
    for i in range(n - 1):
        base_arcs[aid] = (i, i + 1)
        adjacency[i].append((i + 1, aid))
        aid += 1
    chords = []
    want = rng.randint(0, max(1, n // 2))
    for _ in range(4 * want):
        if len(chords) >= want:
            break
        i = rng.randrange(0, n - 2)
        j = rng.randrange(i + 2, n)
        if any(a < i < b < j or i < a < j < b for a, b in chords):
            continue
        if (i, j) in chords:
            continue
        chords.append((i, j))
        base_arcs[aid] = (i, j)
        adjacency[i].append((j, aid))
        aid += 1

    terminals = sorted(rng.sample(range(n), 2 * k))
    pairs = []
    pool = list(terminals)
    rng.shuffle(pool)
    for h in range(k):
        a, b = pool[2 * h], pool[2 * h + 1]
        pairs.append((min(a, b), max(a, b)))
    requests = [rng.randint(1, rmax) for _ in range(k)]

    units = []
    slots = []
    for h, (s, t) in enumerate(pairs):
        for _i in range(requests[h]):
            units.append(s)
            slots.append(t)
    assigned = _assign_unit_sinks(rng, units, slots, ok=lambda s, t: t > s)
    if assigned is None:
        return None

    usage: Dict[int, int] = {}
    for s, t in zip(units, assigned):
        v = s
        while v != t:
            options = [(w, a) for w, a in adjacency[v] if w <= t]
            if not options:
                return None
            w, a = options[rng.randrange(len(options))]
            usage[a] = usage.get(a, 0) + 1
            v = w

    used_vertices = set()
    for a, cnt in usage.items():
        if cnt > 0:
            t, h = base_arcs[a]
            used_vertices.add(t)
            used_vertices.add(h)
    demands = [Demand(id=h, tail=pairs[h][1], head=pairs[h][0], request=requests[h])
               for h in range(k)]
    for d in demands:
        if d.tail not in used_vertices or d.head not in used_vertices:
            return None
    vmap: Dict[int, int] = {}
    inst = _overlay_instance(used_vertices, base_arcs, usage, demands, coords, vmap)
    inst.outer_face_key = _outer_face_key(inst)
    return inst


def _outer_face_key(inst: Instance):
    """Key of the unbounded face of a convex straight-line drawing.

    At the lowest-id vertex, the reflex corner facing away from the hull
    lies between the incident direction of largest angle and that of
    smallest angle, so the unbounded face is the one left of the dart
    leaving along the largest-angle arc.
    """
    g = inst.graph
    coords = inst.coords
    v0 = g.vertices[0]
    best = None
    for a in g.rotation[v0]:
        other = g.arc_head[a] if g.arc_tail[a] == v0 else g.arc_tail[a]
        ang = math.atan2(coords[other][1] - coords[v0][1],
                         coords[other][0] - coords[v0][0]) % (2 * math.pi)
        if best is None or ang > best[0]:
            best = (ang, a)
    _ang, a = best
    faces = g.faces()
    idx = faces.side_face(a, forward=(g.arc_tail[a] == v0))
    return faces.faces[idx].key()
