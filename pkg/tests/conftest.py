"""Shared gadgets and helpers for the test suite."""

from __future__ import annotations

import itertools

import pytest

from planarmcf import (
    Demand,
    EmbeddedDigraph,
    Instance,
    fixture_half_integral,
    fixture_half_integral_doubled,
    normalize,
)
from planarmcf.embedding import classify_behaviour
from planarmcf.geometry import path_vertices
from planarmcf.oracle import _passages, brute_force, uncross


def star(spec):
    """Single inner vertex 0 with one leaf per rotation slot.

    ``spec`` lists "in"/"out" in anticlockwise rotation order; arc i joins
    leaf i+1 to the center in the stated direction. Returns the graph; arc
    ids equal rotation positions.
    """
    arcs = {}
    for i, kind in enumerate(spec):
        leaf = i + 1
        arcs[i] = (leaf, 0) if kind == "in" else (0, leaf)
    rotation = {0: list(range(len(spec)))}
    for i in range(len(spec)):
        rotation[i + 1] = [i]
    return EmbeddedDigraph(range(len(spec) + 1), arcs, rotation)


@pytest.fixture
def half_integral():
    return fixture_half_integral()


@pytest.fixture
def half_integral_doubled():
    return fixture_half_integral_doubled()


def corridor_gadget():
    """Two arc-disjoint paths sharing three vertices u < v < w.

    Path plain runs s2 -> u -> v -> w -> t2 keeping northwest of path
    dashed (s1 -> u -> v -> w -> t1); between consecutive shared vertices
    the two paths bound a lens. Vertex ids: s1=0 s2=1 u=2 v=3 w=4 t2=5
    t1=6. Returns (graph, plain_arcs, dashed_arcs).
    """
    arcs = {
        0: (0, 2),  # s1 -> u
        1: (1, 2),  # s2 -> u
        2: (2, 3),  # u -> v, northwest bow (plain)
        3: (2, 3),  # u -> v, southeast bow (dashed)
        4: (3, 4),  # v -> w, northwest bow (plain)
        5: (3, 4),  # v -> w, southeast bow (dashed)
        6: (4, 5),  # w -> t2
        7: (4, 6),  # w -> t1
    }
    rotation = {
        0: [0], 1: [1], 5: [6], 6: [7],
        2: [2, 0, 1, 3],
        3: [5, 4, 2, 3],
        4: [7, 4, 6, 5],
    }
    g = EmbeddedDigraph(range(7), arcs, rotation)
    plain = [1, 2, 4, 6]
    dashed = [0, 3, 5, 7]
    return g, plain, dashed


def lobe_gadget(r: int = 4):
    """r internally disjoint two-arc paths from s=0 to t=1, fanned out.

    Path i uses arcs i (s -> middle) and r+i (middle -> t); first arcs sit
    in rotation order at s, and the arrival order at t is reversed.
    """
    arcs = {}
    for i in range(r):
        arcs[i] = (0, 2 + i)
        arcs[r + i] = (2 + i, 1)
    rotation = {0: list(range(r)), 1: [2 * r - 1 - i for i in range(r)]}
    for i in range(r):
        rotation[2 + i] = [r + i, i]
    g = EmbeddedDigraph(range(r + 2), arcs, rotation)
    paths = [[i, r + i] for i in range(r)]
    return g, paths


def bowtie_gadget():
    """Two lens-shaped cycles with disjoint interiors sharing vertex 0.

    Cycle C sits east: its through-path runs 1 -> 0 -> 2 (arcs 0, 1) with
    bypass arc 2; cycle D mirrors it to the west (arcs 3, 4, bypass 5).
    """
    arcs = {
        0: (1, 0), 1: (0, 2), 2: (1, 2),  # east lens
        3: (3, 0), 4: (0, 4), 5: (3, 4),  # west lens
    }
    rotation = {
        0: [1, 4, 3, 0],
        1: [2, 0],
        2: [1, 2],
        3: [3, 5],
        4: [5, 4],
    }
    g = EmbeddedDigraph(range(5), arcs, rotation)
    return g


def crossing_cross():
    """Two unit demands forced to cross at the single inner vertex."""
    arcs = {0: (1, 0), 1: (0, 2), 2: (3, 0), 3: (0, 4)}
    rotation = {0: [1, 3, 0, 2], 1: [0], 2: [1], 3: [2], 4: [3]}
    g = EmbeddedDigraph(range(5), arcs, rotation)
    demands = [Demand(id=0, tail=2, head=1, request=1),
               Demand(id=1, tail=4, head=3, request=1)]
    return Instance(graph=g, capacities={a: 1 for a in arcs}, demands=demands)


def path_instance(length: int = 3):
    """One demand along a single directed path."""
    arcs = {i: (i, i + 1) for i in range(length)}
    rotation = {0: [0], length: [length - 1]}
    for v in range(1, length):
        rotation[v] = [v, v - 1]
    g = EmbeddedDigraph(range(length + 1), arcs, rotation)
    demands = [Demand(id=0, tail=length, head=0, request=1)]
    return Instance(graph=g, capacities={a: 1 for a in arcs}, demands=demands)


def uncrossed_solution(norm):
    """Oracle solution of a normalized instance, uncrossed and ordered.

    Paths of each demand are sorted by the rotation position of their
    first arcs at the demand's source terminal, starting from the smallest
    arc id. Returns None when the instance is infeasible.
    """
    res = brute_force(norm.instance)
    if not res.feasible:
        return None
    flat, layout = [], []
    for did in sorted(res.paths):
        for i, p in enumerate(res.paths[did]):
            flat.append(p)
            layout.append((did, i))
    outcome = uncross(norm.graph, norm.order, flat)
    sol = {}
    for (did, _i), p in zip(layout, outcome.paths):
        sol.setdefault(did, []).append(p)
    for did in sol:
        s, _t = norm.terminals[did]
        rot = norm.graph.rotation[s]
        start = rot.index(min(rot))
        pos = {rot[(start + i) % len(rot)]: i for i in range(len(rot))}
        sol[did].sort(key=lambda p: pos[p[0]])
    return sol


def observed_first_meetings(norm, sol):
    """Per demand pair, the mutual behaviours at first common vertices."""
    g, order = norm.graph, norm.order
    out = {}
    for h1, h2 in itertools.combinations(sorted(sol), 2):
        obs = {}
        for i, p in enumerate(sol[h1]):
            for j, q in enumerate(sol[h2]):
                shared = set(path_vertices(g, p)) & set(path_vertices(g, q))
                if not shared:
                    continue
                v = order.first(shared)
                pp, qq = _passages(g, p), _passages(g, q)
                obs[(i, j)] = (classify_behaviour(g, v, *pp[v], *qq[v]),
                               classify_behaviour(g, v, *qq[v], *pp[v]))
        out[(h1, h2)] = obs
    return out
