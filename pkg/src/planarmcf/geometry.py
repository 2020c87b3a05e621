"""Closed walks and the inside/outside machinery.

Two arc-disjoint paths sharing a start and an end bound a closed curve on
the sphere: the first path traversed forward, the second backward. The
curve may touch itself at shared inner vertices but never crosses itself,
so it splits the sphere into two components. The component the walk runs
positively around (the faces on its left) is the inside.

Sides are computed purely combinatorially: a flood fill over faces that is
forbidden from crossing the walk's arcs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .embedding import Behaviour, EmbeddedDigraph
from .errors import (
    DestinationOnWalkError,
    InconsistentIncidenceError,
    MoreThanTwoComponentsError,
    WalkError,
)
from .instances import TopoOrder


class VertexSide(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_WALK = "on-walk"

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ClosedWalk:
    """The closed curve formed by two arc-disjoint u->v subpaths.

    ``forward`` is traversed tail-to-head, ``backward`` head-to-tail (it is
    stored in its own forward arc order).
    """

    forward: tuple
    backward: tuple
    u: int
    v: int
    arcs: frozenset
    vertices: frozenset


def path_vertices(g: EmbeddedDigraph, arcs: Sequence[int]) -> list:
    """Vertex sequence of a path given by its arcs."""
    if not arcs:
        return []
    verts = [g.arc_tail[arcs[0]]]
    for a in arcs:
        if g.arc_tail[a] != verts[-1]:
            raise WalkError(f"arcs do not chain: {a} does not start at {verts[-1]}")
        verts.append(g.arc_head[a])
    return verts


def subpath(g: EmbeddedDigraph, arcs: Sequence[int], u: int, v: int) -> list:
    """Arcs of the path between its vertices u and v (u first)."""
    verts = path_vertices(g, arcs)
    try:
        i, j = verts.index(u), verts.index(v)
    except ValueError as e:
        raise WalkError(f"vertex not on path: {e}") from None
    if i > j:
        raise WalkError(f"vertex {u} does not precede {v} on the path")
    return list(arcs[i:j])


def first_common_vertex(order: TopoOrder, g: EmbeddedDigraph,
                        p_arcs: Sequence[int], q_arcs: Sequence[int]) -> Optional[int]:
    """Smallest shared vertex of two paths in the given order, if any."""
    shared = set(path_vertices(g, p_arcs)) & set(path_vertices(g, q_arcs))
    return order.first(shared)


def make_walk(g: EmbeddedDigraph, p_arcs: Sequence[int], q_arcs: Sequence[int],
              u: int, v: int) -> ClosedWalk:
    """Closed walk running u->v along P and back v->u along Q."""
    fwd = subpath(g, p_arcs, u, v)
    bwd = subpath(g, q_arcs, u, v)
    shared = set(fwd) & set(bwd)
    if shared:
        raise WalkError(f"paths share arcs {sorted(shared)}")
    if not fwd and not bwd:
        raise WalkError("degenerate walk: both subpaths are empty")
    verts = set(path_vertices(g, fwd) if fwd else [u]) | set(path_vertices(g, bwd) if bwd else [u])
    return ClosedWalk(
        forward=tuple(fwd),
        backward=tuple(bwd),
        u=u,
        v=v,
        arcs=frozenset(fwd) | frozenset(bwd),
        vertices=frozenset(verts),
    )


@dataclass(frozen=True)
class RegionPartition:
    """Faces inside and outside a closed walk."""

    inside: frozenset
    outside: frozenset
    walk: ClosedWalk


def _flood(faces, seeds, barrier) -> set:
    seen = set(seeds)
    stack = list(seeds)
    left, right = faces.left_face, faces.right_face
    while stack:
        f = stack.pop()
        for a in faces.face_arcs[f]:
            if a in barrier:
                continue
            for g_ in (left[a], right[a]):
                if g_ not in seen:
                    seen.add(g_)
                    stack.append(g_)
    return seen


def partition_faces(g: EmbeddedDigraph, walk: ClosedWalk) -> RegionPartition:
    """Split the faces into the walk's inside and outside components.

    The inside seeds are the faces on the left of the walk's darts (forward
    arcs contribute their left face, backward arcs their right face). The
    fill never crosses a walk arc. Anything other than exactly two mutually
    unreachable components means the walk self-crosses, which is a caller
    bug, and raises MoreThanTwoComponentsError.
    """
    faces = g.faces()
    inside_seeds = {faces.left_face[a] for a in walk.forward}
    inside_seeds |= {faces.right_face[a] for a in walk.backward}
    outside_seeds = {faces.right_face[a] for a in walk.forward}
    outside_seeds |= {faces.left_face[a] for a in walk.backward}
    inside = _flood(faces, inside_seeds, walk.arcs)
    if inside & outside_seeds:
        raise MoreThanTwoComponentsError(
            "walk does not separate: a face is on both sides")
    outside = _flood(faces, outside_seeds, walk.arcs)
    if len(inside) + len(outside) != len(faces):
        raise MoreThanTwoComponentsError(
            f"walk cuts the sphere into more than two parts "
            f"({len(inside)} + {len(outside)} != {len(faces)} faces)")
    return RegionPartition(frozenset(inside), frozenset(outside), walk)


def vertex_side(g: EmbeddedDigraph, partition: RegionPartition, w: int) -> VertexSide:
    """Which side of the walk a vertex lies on.

    Off-walk vertices inherit the side of their incident faces, which must
    all agree; disagreement means the embedding data is corrupt.
    """
    if w in partition.walk.vertices:
        return VertexSide.ON_WALK
    incident = g.faces().vertex_faces[w]
    if not incident:
        raise InconsistentIncidenceError(f"vertex {w} has no incident faces")
    inside = [f in partition.inside for f in incident]
    if all(inside):
        return VertexSide.INSIDE
    if not any(inside):
        return VertexSide.OUTSIDE
    raise InconsistentIncidenceError(
        f"faces incident to off-walk vertex {w} disagree about its side")


def side_of_destination(g: EmbeddedDigraph, order: TopoOrder,
                        p_arcs: Sequence[int], q_arcs: Sequence[int],
                        v: int, dest_p: int) -> Behaviour:
    """Behaviour of P relative to Q at v, decided by where P must end up.

    Both paths reach v and met before at their first common vertex u. P
    goes left of Q at v exactly when P's destination lies inside the closed
    walk u->v along P and back along Q.
    """
    u = first_common_vertex(order, g, p_arcs, q_arcs)
    if u is None or u == v:
        raise WalkError("paths have no common vertex before v")
    walk = make_walk(g, p_arcs, q_arcs, u, v)
    partition = partition_faces(g, walk)
    side = vertex_side(g, partition, dest_p)
    if side is VertexSide.ON_WALK:
        raise DestinationOnWalkError(
            f"destination {dest_p} lies on the walk between {u} and {v}")
    return Behaviour.LEFT if side is VertexSide.INSIDE else Behaviour.RIGHT


@dataclass(frozen=True)
class Region:
    """Interior bounded by two cyclically consecutive paths of one demand."""

    demand: int
    index: int
    partition: RegionPartition


def regions_of_demand(g: EmbeddedDigraph, paths: Sequence[Sequence[int]],
                      s: int, t: int, demand: int = 0) -> list:
    """The r regions tiled by the r paths of one demand.

    Paths must be pairwise arc-disjoint, run s->t, and be listed in the
    cyclic order of their first arcs around s. Region i is the inside of
    the walk along path i and back along path i+1. With a single path the
    curve bounds no area and the one region is everything off the path.
    """
    if not paths:
        raise ValueError("no paths given")
    for p in paths:
        verts = path_vertices(g, p)
        if not verts or verts[0] != s or verts[-1] != t:
            raise WalkError(f"path does not run {s}->{t}")
    seen_arcs = set()
    for p in paths:
        for a in p:
            if a in seen_arcs:
                raise WalkError(f"paths share arc {a}")
            seen_arcs.add(a)
    r = len(paths)
    if r == 1:
        faces = g.faces()
        all_faces = frozenset(range(len(faces)))
        walk = ClosedWalk(tuple(paths[0]), (), s, t,
                          frozenset(paths[0]),
                          frozenset(path_vertices(g, paths[0])))
        return [Region(demand, 0, RegionPartition(all_faces, frozenset(), walk))]
    rot = g.rotation[s]
    first_pos = [g.rotation_position(s, p[0]) for p in paths]
    anchor = first_pos.index(min(first_pos))
    ring = [(first_pos[(anchor + k) % r]) for k in range(r)]
    if sorted(ring) != ring:
        raise WalkError("paths are not listed in the cyclic order of their first arcs")
    regions = []
    for i in range(r):
        walk = make_walk(g, paths[i], paths[(i + 1) % r], s, t)
        regions.append(Region(demand, i, partition_faces(g, walk)))
    return regions
