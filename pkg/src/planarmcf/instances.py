"""Problem instances and their normalization.

An instance couples an embedded supply digraph with integer arc capacities
and a list of demands. A demand is an arc of the demand graph: its head is
where paths start and its tail is where they end, so a demand (tail=t,
head=s, request=r) asks for r arc-disjoint paths from s to t.

Normalization rewrites an instance into the form the routing algorithm
works on: every capacity is one (arcs are replicated), every demand starts
at a fresh source terminal and ends at a fresh sink terminal, and the
demand set is a matching on those terminals.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from typing import Optional

from .embedding import EmbeddedDigraph, validate_embedding
from .errors import (
    BadEmbeddingError,
    DisconnectedError,
    NotAcyclicError,
    NotEulerianError,
)


@dataclass(frozen=True)
class Demand:
    """One commodity: ``request`` paths from ``head`` to ``tail``."""

    id: int
    tail: int
    head: int
    request: int

    def __post_init__(self):
        if self.tail == self.head:
            raise ValueError(f"demand {self.id}: tail and head coincide ({self.tail})")
        if self.request < 0:
            raise ValueError(f"demand {self.id}: negative request")


@dataclass
class Instance:
    """Embedded supply graph, capacities, demands and optional metadata."""

    graph: EmbeddedDigraph
    capacities: dict  # arc id -> positive int
    demands: list  # list[Demand]
    normalized: bool = False
    coords: Optional[dict] = None  # vertex -> (x, y), only for visualization
    outer_face_key: Optional[tuple] = None  # canonical face key, if designated

    def demand_by_id(self, did: int) -> Demand:
        for d in self.demands:
            if d.id == did:
                return d
        raise KeyError(did)


@dataclass(frozen=True)
class TopoOrder:
    """A total order of the vertices compatible with all arcs."""

    order: tuple

    position: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "position", {v: i for i, v in enumerate(self.order)})

    def before(self, u: int, v: int) -> bool:
        return self.position[u] < self.position[v]

    def first(self, vertices):
        """Smallest vertex of a collection in this order, or None if empty."""
        best = None
        for v in vertices:
            if best is None or self.position[v] < self.position[best]:
                best = v
        return best


@dataclass
class NormalizedInstance:
    """A normalized instance plus the provenance needed to project back.

    ``arc_origin`` maps every arc of the normalized graph to the arc of the
    original instance it replicates, or None for terminal arcs added during
    normalization. ``terminals`` maps each demand id to its (source, sink)
    terminal vertices.
    """

    instance: Instance
    order: TopoOrder
    original: Instance
    arc_origin: dict
    terminals: dict

    @property
    def graph(self) -> EmbeddedDigraph:
        return self.instance.graph

    def project_path(self, arcs) -> list:
        """Map a path of the normalized graph back to original arc ids."""
        return [self.arc_origin[a] for a in arcs if self.arc_origin[a] is not None]


def check_eulerian(inst: Instance) -> bool:
    """True iff capacity plus request is balanced at every vertex.

    At each vertex the outgoing capacity plus outgoing requests must equal
    the incoming capacity plus incoming requests. A demand contributes its
    request to its tail's outgoing side and its head's incoming side.
    """
    g = inst.graph
    balance = {v: 0 for v in g.vertices}
    for a, c in inst.capacities.items():
        balance[g.arc_tail[a]] += c
        balance[g.arc_head[a]] -= c
    for d in inst.demands:
        balance[d.tail] += d.request
        balance[d.head] -= d.request
    return all(b == 0 for b in balance.values())


def eulerian_imbalance(inst: Instance):
    """First unbalanced vertex and its imbalance, or None if Eulerian."""
    g = inst.graph
    balance = {v: 0 for v in g.vertices}
    for a, c in inst.capacities.items():
        balance[g.arc_tail[a]] += c
        balance[g.arc_head[a]] -= c
    for d in inst.demands:
        balance[d.tail] += d.request
        balance[d.head] -= d.request
    for v in g.vertices:
        if balance[v] != 0:
            return v, balance[v]
    return None


def topological_order(g: EmbeddedDigraph) -> TopoOrder:
    """Topological order with ties broken by ascending vertex id.

    Raises NotAcyclicError with a witness cycle when the digraph has one.
    """
    indeg = {v: len(g.in_arcs(v)) for v in g.vertices}
    ready = [v for v in g.vertices if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for a in g.out_arcs(v):
            w = g.arc_head[a]
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != len(g.vertices):
        raise NotAcyclicError(_find_cycle(g, {v for v in g.vertices if indeg[v] > 0}))
    return TopoOrder(tuple(order))


def _find_cycle(g: EmbeddedDigraph, remaining: set) -> list:
    """Some directed cycle inside the given vertex set (all on cycles)."""
    start = min(remaining)
    path = [start]
    index = {start: 0}
    v = start
    while True:
        v = next(g.arc_head[a] for a in g.out_arcs(v) if g.arc_head[a] in remaining)
        if v in index:
            return path[index[v]:]
        index[v] = len(path)
        path.append(v)


def expand_capacities(inst: Instance) -> Instance:
    """Replace every arc by as many unit-capacity copies as its capacity.

    Copies sit consecutively at the original arc's rotation position; the
    block is reversed at the head so the copies bound a stack of two-sided
    faces. Capacity-zero arcs are deleted. The first copy keeps the original
    arc id and further copies get fresh ids, so ids are never reused.
    """
    expanded, _origin = _expand_with_origin(inst)
    return expanded


def _expand_with_origin(inst: Instance):
    g = inst.graph
    next_id = max(g.arc_tail, default=-1) + 1
    copies = {}  # original arc -> list of copy ids, in tail-side block order
    origin = {}
    arcs = {}
    for a in sorted(g.arc_tail):
        c = inst.capacities[a]
        if c < 0:
            raise ValueError(f"arc {a}: negative capacity")
        ids = []
        for i in range(c):
            aid = a if i == 0 else next_id
            if aid != a:
                next_id += 1
            ids.append(aid)
            arcs[aid] = g.arc_ends(a)
            origin[aid] = a
        copies[a] = ids
    rotation = {}
    for v in g.vertices:
        rot = []
        for a in g.rotation[v]:
            block = copies[a]
            if g.arc_head[a] == v:
                block = list(reversed(block))
            rot.extend(block)
        rotation[v] = rot
    graph = EmbeddedDigraph(g.vertices, arcs, rotation)
    expanded = Instance(
        graph=graph,
        capacities={a: 1 for a in arcs},
        demands=list(inst.demands),
        normalized=False,
        coords=inst.coords,
        outer_face_key=inst.outer_face_key,
    )
    return expanded, origin


def add_terminals(inst: Instance) -> Instance:
    """Split every demand onto fresh source and sink terminals.

    For a demand with request r asking for paths from u to v, a new source
    terminal s gets r unit arcs s->u and a new sink terminal t gets r unit
    arcs v->t; the demand is rewritten to run from s to t. Zero-request
    demands are dropped. Requires unit capacities.
    """
    augmented, _terminals, _origin = _add_terminals_with_maps(inst)
    return augmented


def _insert_block(rot: list, block: list) -> list:
    """Insert ``block`` into rotation ``rot`` after the smallest arc id."""
    if not rot:
        return list(block)
    anchor = rot.index(min(rot))
    return rot[: anchor + 1] + list(block) + rot[anchor + 1:]


def _add_terminals_with_maps(inst: Instance):
    if any(c != 1 for c in inst.capacities.values()):
        raise ValueError("add_terminals requires unit capacities")
    g = inst.graph
    next_vid = max(g.vertices, default=-1) + 1
    next_aid = max(g.arc_tail, default=-1) + 1
    arcs = {a: g.arc_ends(a) for a in g.arc_tail}
    rotation = {v: list(g.rotation[v]) for v in g.vertices}
    vertices = list(g.vertices)
    demands = []
    terminals = {}
    origin = {a: a for a in g.arc_tail}
    for d in sorted(inst.demands, key=lambda d: d.id):
        if d.request == 0:
            continue
        u, v = d.head, d.tail  # paths run u -> v
        s = next_vid
        t = next_vid + 1
        next_vid += 2
        source_arcs = []
        for _ in range(d.request):
            arcs[next_aid] = (s, u)
            origin[next_aid] = None
            source_arcs.append(next_aid)
            next_aid += 1
        sink_arcs = []
        for _ in range(d.request):
            arcs[next_aid] = (v, t)
            origin[next_aid] = None
            sink_arcs.append(next_aid)
            next_aid += 1
        vertices.extend((s, t))
        rotation[s] = list(source_arcs)
        rotation[u] = _insert_block(rotation[u], list(reversed(source_arcs)))
        rotation[t] = list(reversed(sink_arcs))
        rotation[v] = _insert_block(rotation[v], sink_arcs)
        demands.append(Demand(id=d.id, tail=t, head=s, request=d.request))
        terminals[d.id] = (s, t)
    graph = EmbeddedDigraph(vertices, arcs, rotation)
    augmented = Instance(
        graph=graph,
        capacities={a: 1 for a in arcs},
        demands=demands,
        normalized=True,
        coords=None if inst.coords is None else dict(inst.coords),
        outer_face_key=inst.outer_face_key,
    )
    return augmented, terminals, origin


def normalize(inst: Instance) -> NormalizedInstance:
    """Validate and rewrite an instance into routing form.

    Raises BadEmbeddingError, DisconnectedError, NotAcyclicError or
    NotEulerianError when the input is unusable. On success the result is
    Eulerian, acyclic, unit-capacity, terminal-split and connected, and
    carries a topological order plus back-projection maps.
    """
    violation = validate_embedding(inst.graph)
    if violation is not None:
        if violation.kind == "disconnected":
            raise DisconnectedError()
        raise BadEmbeddingError(violation)
    missing = [a for a in inst.graph.arc_tail if a not in inst.capacities]
    if missing:
        raise ValueError(f"arcs without capacities: {missing}")
    topological_order(inst.graph)  # raises NotAcyclicError with witness
    imbalance = eulerian_imbalance(inst)
    if imbalance is not None:
        raise NotEulerianError(*imbalance)

    expanded, exp_origin = _expand_with_origin(inst)
    violation = validate_embedding(expanded.graph)
    if violation is not None:
        if violation.kind == "disconnected":
            raise DisconnectedError("after removing capacity-zero arcs")
        raise BadEmbeddingError(violation)

    augmented, terminals, term_origin = _add_terminals_with_maps(expanded)
    arc_origin = {}
    for a in augmented.graph.arc_tail:
        o = term_origin.get(a)
        arc_origin[a] = None if o is None else exp_origin[o]

    violation = validate_embedding(augmented.graph)
    if violation is not None:
        raise BadEmbeddingError(violation)
    order = topological_order(augmented.graph)
    imbalance = eulerian_imbalance(augmented)
    if imbalance is not None:
        raise NotEulerianError(*imbalance)
    augmented.graph.faces()  # precompute while still single-threaded
    return NormalizedInstance(
        instance=augmented,
        order=order,
        original=inst,
        arc_origin=arc_origin,
        terminals=terminals,
    )


def scale_instance(inst: Instance, factor: int) -> Instance:
    """Multiply all capacities and requests by a positive integer."""
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return Instance(
        graph=inst.graph,
        capacities={a: c * factor for a, c in inst.capacities.items()},
        demands=[replace(d, request=d.request * factor) for d in inst.demands],
        normalized=False,
        coords=inst.coords,
        outer_face_key=inst.outer_face_key,
    )
