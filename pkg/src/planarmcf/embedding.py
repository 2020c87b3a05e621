"""Combinatorial sphere embeddings of digraphs.

A digraph is embedded by giving, for every vertex, the cyclic order of its
incident arc ends in positive (anticlockwise) orientation. Faces, the
inside/outside machinery and the cross/left/right classification of two
paths meeting at a vertex are all derived from these rotations alone; no
coordinates are involved.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


class Behaviour(enum.Enum):
    """How one path passes another at a shared inner vertex."""

    CROSS = "cross"
    LEFT = "left"
    RIGHT = "right"

    def __repr__(self) -> str:  # compact in test output
        return self.name


class Side(enum.Enum):
    """A side of an arc, relative to its direction of travel."""

    LEFT = "left"
    RIGHT = "right"

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class CyclicOrder:
    """A sequence interpreted cyclically; the last element precedes the first.

    Elements must be hashable and pairwise distinct.
    """

    elements: tuple

    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pos = {e: i for i, e in enumerate(self.elements)}
        if len(pos) != len(self.elements):
            raise ValueError("cyclic order contains duplicate elements")
        object.__setattr__(self, "_pos", pos)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e) -> bool:
        return e in self._pos

    def position(self, e) -> int:
        try:
            return self._pos[e]
        except KeyError:
            raise ValueError(f"element {e!r} not in cyclic order") from None

    def distance(self, a, b) -> int:
        """Number of forward steps from a to b."""
        return (self.position(b) - self.position(a)) % len(self.elements)

    def successor(self, e):
        return self.elements[(self.position(e) + 1) % len(self.elements)]

    def predecessor(self, e):
        return self.elements[(self.position(e) - 1) % len(self.elements)]


def between(order: CyclicOrder, a, b, c) -> bool:
    """True iff b lies on the forward walk from a to c, endpoints included.

    Requires a != c. If b is strictly between a and c it is not between
    c and a, so the two intervals cut by a pair overlap only in {a, c}.
    """
    if a == c:
        raise ValueError("between() needs distinct walk endpoints")
    return order.distance(a, b) <= order.distance(a, c)


def strictly_between(order: CyclicOrder, a, b, c) -> bool:
    return b not in (a, c) and between(order, a, b, c)


@dataclass(frozen=True)
class Face:
    """One face of the embedding.

    The boundary is the cyclic sequence of (arc, side) pairs met when
    walking the face with the face on the left. Every (arc, side) pair of
    the graph occurs on exactly one face.
    """

    boundary: tuple  # tuple[(arc_id, Side), ...]

    def key(self):
        """Canonical identifier: the smallest (arc, side) pair on the boundary."""
        return min((a, s.value) for a, s in self.boundary)

    def __len__(self) -> int:
        return len(self.boundary)


class FaceSet:
    """All faces of an embedded digraph plus the usual incidence lookups."""

    __slots__ = ("faces", "left_face", "right_face", "vertex_faces", "face_arcs")

    def __init__(self, faces: Sequence[Face], left_face, right_face, vertex_faces, face_arcs):
        self.faces = tuple(faces)
        self.left_face = left_face  # arc -> face index
        self.right_face = right_face  # arc -> face index
        self.vertex_faces = vertex_faces  # vertex -> tuple of face indices
        self.face_arcs = face_arcs  # face index -> tuple of arc ids on its boundary

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def by_key(self, key) -> Optional[int]:
        for i, f in enumerate(self.faces):
            if f.key() == tuple(key):
                return i
        return None

    def side_face(self, arc: int, forward: bool) -> int:
        """Face to the left of the dart along ``arc`` in the given direction."""
        return self.left_face[arc] if forward else self.right_face[arc]


@dataclass(frozen=True)
class Violation:
    """First failed embedding invariant, with witnesses."""

    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


class EmbeddedDigraph:
    """A loopless digraph with a rotation system, immutable once built.

    ``rotation[v]`` lists the arcs incident to v (parallel arcs are distinct
    entries) in anticlockwise order around v. Because loops are forbidden an
    arc end at v is identified by the arc id alone.
    """

    __slots__ = ("vertices", "arc_tail", "arc_head", "rotation", "_rot_pos",
                 "_out_arcs", "_in_arcs", "_faces")

    def __init__(self, vertices: Iterable[int], arcs: Mapping[int, tuple],
                 rotation: Mapping[int, Sequence[int]]):
        self.vertices = tuple(sorted(vertices))
        self.arc_tail = {a: int(t) for a, (t, _h) in arcs.items()}
        self.arc_head = {a: int(h) for a, (_t, h) in arcs.items()}
        self.rotation = {v: tuple(rotation.get(v, ())) for v in self.vertices}
        self._rot_pos = {
            v: {a: i for i, a in enumerate(rot)} for v, rot in self.rotation.items()
        }
        out: dict = {v: [] for v in self.vertices}
        inc: dict = {v: [] for v in self.vertices}
        for a in sorted(self.arc_tail):
            t, h = self.arc_tail[a], self.arc_head[a]
            if t in out:
                out[t].append(a)
            if h in inc:
                inc[h].append(a)
        self._out_arcs = {v: tuple(s) for v, s in out.items()}
        self._in_arcs = {v: tuple(s) for v, s in inc.items()}
        self._faces = None

    # -- basic accessors ----------------------------------------------------

    @property
    def arcs(self) -> tuple:
        return tuple(sorted(self.arc_tail))

    def arc_ends(self, a: int) -> tuple:
        return self.arc_tail[a], self.arc_head[a]

    def out_arcs(self, v: int) -> tuple:
        return self._out_arcs[v]

    def in_arcs(self, v: int) -> tuple:
        return self._in_arcs[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def rotation_position(self, v: int, a: int) -> int:
        return self._rot_pos[v][a]

    def rotation_order(self, v: int) -> CyclicOrder:
        return CyclicOrder(self.rotation[v])

    def incident(self, v: int, a: int) -> bool:
        return self.arc_tail[a] == v or self.arc_head[a] == v

    # -- faces ---------------------------------------------------------------

    def faces(self) -> FaceSet:
        """Faces of the embedding, traced once and cached."""
        if self._faces is None:
            self._faces = trace_faces(self)
        return self._faces

    # -- pickling (the cached FaceSet travels along) --------------------------

    def __getstate__(self):
        return (self.vertices, self.arc_tail, self.arc_head, self.rotation)

    def __setstate__(self, state):
        vertices, tail, head, rotation = state
        self.__init__(vertices, {a: (tail[a], head[a]) for a in tail}, rotation)

    def __repr__(self) -> str:
        return f"EmbeddedDigraph(|V|={len(self.vertices)}, |A|={len(self.arc_tail)})"


def _next_dart(g: EmbeddedDigraph, arc: int, forward: bool):
    """Successor dart on the face lying left of the given dart.

    Arriving at the dart's head, the walk leaves along the arc immediately
    preceding the arrival arc in the anticlockwise rotation there.
    """
    v = g.arc_head[arc] if forward else g.arc_tail[arc]
    rot = g.rotation[v]
    pos = g._rot_pos[v][arc]
    nxt = rot[(pos - 1) % len(rot)]
    return nxt, g.arc_tail[nxt] == v


def trace_faces(g: EmbeddedDigraph) -> FaceSet:
    """Trace all faces of the rotation system.

    Every dart (arc plus direction) belongs to exactly one face, so the face
    boundary lengths always sum to twice the arc count. The embedding is
    spherical exactly when the face count satisfies Euler's formula.
    """
    seen = set()
    faces = []
    left = {}
    right = {}
    for a0 in sorted(g.arc_tail):
        for fwd0 in (True, False):
            if (a0, fwd0) in seen:
                continue
            boundary = []
            arc, fwd = a0, fwd0
            while (arc, fwd) not in seen:
                seen.add((arc, fwd))
                boundary.append((arc, Side.LEFT if fwd else Side.RIGHT))
                arc, fwd = _next_dart(g, arc, fwd)
            idx = len(faces)
            for b_arc, b_side in boundary:
                if b_side is Side.LEFT:
                    left[b_arc] = idx
                else:
                    right[b_arc] = idx
            faces.append(Face(tuple(boundary)))

    vertex_faces: dict = {v: set() for v in g.vertices}
    face_arcs = []
    for i, f in enumerate(faces):
        arcs_here = []
        for arc, _side in f.boundary:
            arcs_here.append(arc)
            vertex_faces[g.arc_tail[arc]].add(i)
            vertex_faces[g.arc_head[arc]].add(i)
        face_arcs.append(tuple(arcs_here))
    return FaceSet(
        faces,
        left,
        right,
        {v: tuple(sorted(s)) for v, s in vertex_faces.items()},
        tuple(face_arcs),
    )


def _undirected_connected(g: EmbeddedDigraph) -> bool:
    if not g.vertices:
        return True
    adj: dict = {v: [] for v in g.vertices}
    for a in g.arc_tail:
        t, h = g.arc_tail[a], g.arc_head[a]
        adj[t].append(h)
        adj[h].append(t)
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.vertices)


def validate_embedding(g: EmbeddedDigraph) -> Optional[Violation]:
    """Check all embedding invariants; return the first violation or None.

    Checks, in order: arc endpoints exist and are distinct, rotations are
    exactly the incident arc ends, the underlying graph is connected, and
    face tracing satisfies Euler's formula for the sphere.
    """
    vset = set(g.vertices)
    for a in sorted(g.arc_tail):
        t, h = g.arc_tail[a], g.arc_head[a]
        if t not in vset or h not in vset:
            return Violation("unknown-vertex", f"arc {a} joins {t}->{h}")
        if t == h:
            return Violation("loop", f"arc {a} is a loop at vertex {t}")
    for v in g.vertices:
        rot = g.rotation[v]
        if len(set(rot)) != len(rot):
            return Violation("rotation-duplicate", f"vertex {v} lists an arc twice")
        incident = set(g._out_arcs[v]) | set(g._in_arcs[v])
        missing = incident - set(rot)
        extra = set(rot) - incident
        if missing:
            return Violation("rotation-incomplete",
                             f"vertex {v} omits incident arcs {sorted(missing)}")
        if extra:
            return Violation("rotation-foreign",
                             f"vertex {v} lists non-incident arcs {sorted(extra)}")
    if not _undirected_connected(g):
        return Violation("disconnected", "underlying undirected graph is not connected")
    n_faces = len(trace_faces(g))
    expected = 2 - len(g.vertices) + len(g.arc_tail)
    if n_faces != expected:
        return Violation("euler-formula",
                         f"face count {n_faces} != {expected}; not a sphere embedding")
    return None


def behaviour_about_ends(g: EmbeddedDigraph, v: int,
                         p_in: int, p_out: int, e1: int, e2: int) -> Behaviour:
    """Behaviour of a directed passage relative to an undirected one.

    The passage enters v by p_in and leaves by p_out; (e1, e2) are the two
    arc ends of some other curve through v, whose own direction is
    irrelevant (behaviour is invariant under reversing the observed
    curve). Crossing means e1, e2 separate p_in from p_out in the rotation;
    otherwise the passage goes right when its entering arc comes first
    walking forward through the interval holding both its arcs.
    """
    arcs = (p_in, p_out, e1, e2)
    if len(set(arcs)) != 4:
        raise ValueError("the four arcs at a shared vertex must be distinct")
    pos = g._rot_pos[v]
    for a in arcs:
        if a not in pos:
            raise ValueError(f"arc {a} is not incident to vertex {v}")
    if g.arc_head[p_in] != v:
        raise ValueError(f"arc {p_in} does not enter vertex {v}")
    if g.arc_tail[p_out] != v:
        raise ValueError(f"arc {p_out} does not leave vertex {v}")
    n = len(g.rotation[v])
    base = pos[e1]
    dq = (pos[e2] - base) % n
    dpi = (pos[p_in] - base) % n
    dpo = (pos[p_out] - base) % n
    if (0 < dpi < dq) != (0 < dpo < dq):
        return Behaviour.CROSS
    return Behaviour.RIGHT if dpi < dpo else Behaviour.LEFT


def classify_behaviour(g: EmbeddedDigraph, v: int,
                       p_in: int, p_out: int, q_in: int, q_out: int) -> Behaviour:
    """Behaviour of path P relative to path Q at their shared inner vertex v.

    P enters by p_in and leaves by p_out; likewise Q. They cross when Q's
    arcs separate P's arcs in the rotation at v. Otherwise both of P's arcs
    lie in one of the two intervals cut by Q's arcs, and P goes right when
    its entering arc comes first walking that interval forward.
    """
    if g.arc_head.get(q_in) != v:
        raise ValueError(f"arc {q_in} does not enter vertex {v}")
    if g.arc_tail.get(q_out) != v:
        raise ValueError(f"arc {q_out} does not leave vertex {v}")
    return behaviour_about_ends(g, v, p_in, p_out, q_in, q_out)
