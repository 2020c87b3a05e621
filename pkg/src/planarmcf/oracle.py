"""Ground-truth machinery: exhaustive solving and path-system normal forms.

The brute-force solver decides feasibility by backtracking over unit paths
and is deliberately independent of the routing algorithm: it never looks
at rotations. The uncrossing pass and the structural checkers, by
contrast, are all about the embedding; they rewrite and audit solutions
into the normal form the scheme-based solver reasons about.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .embedding import (Behaviour, EmbeddedDigraph, Violation,
                        behaviour_about_ends, classify_behaviour)
from .errors import BudgetExceededError
from .geometry import first_common_vertex, path_vertices, subpath
from .instances import Instance, TopoOrder, topological_order


@dataclass
class OracleResult:
    feasible: bool
    paths: Optional[Dict[int, List[List[int]]]]  # demand id -> unit arc paths
    expansions: int


def brute_force(inst: Instance, budget: int = 10_000_000) -> OracleResult:
    """Exhaustive backtracking search for a capacity-respecting routing.

    Parallel arcs are interchangeable for feasibility, so the search runs
    on the quotient multigraph where each (tail, head) class carries the
    summed capacity; concrete arc ids are assigned afterwards. Units are
    routed one at a time by depth-first search over classes with free
    capacity, pruning branches whose target became unreachable and forcing
    units of one demand into lexicographically non-decreasing routes, so
    the first solution found is the lexicographically smallest. Raises
    BudgetExceededError when the node-expansion budget runs out.
    """
    g = inst.graph
    classes: Dict[Tuple[int, int], List[int]] = {}
    for a in sorted(g.arc_tail):
        classes.setdefault((g.arc_tail[a], g.arc_head[a]), []).append(a)
    rep = {ends: members[0] for ends, members in classes.items()}
    capacity = {rep[ends]: sum(inst.capacities[a] for a in members)
                for ends, members in classes.items()}
    head_of = {rep[ends]: ends[1] for ends in classes}
    out_classes: Dict[int, list] = {v: [] for v in g.vertices}
    for (t, _h), members in classes.items():
        out_classes[t].append(rep[(t, _h)])
    for v in out_classes:
        out_classes[v].sort()

    units: List[Tuple[int, int, int, int]] = []  # (demand, index, origin, dest)
    for d in sorted(inst.demands, key=lambda d: d.id):
        for i in range(d.request):
            units.append((d.id, i, d.head, d.tail))

    reach: Dict[int, frozenset] = {}
    rev: Dict[int, list] = {v: [] for v in g.vertices}
    for a in g.arc_tail:
        rev[g.arc_head[a]].append(g.arc_tail[a])
    for _d, _i, _o, dest in units:
        if dest not in reach:
            seen = {dest}
            stack = [dest]
            while stack:
                w = stack.pop()
                for u in rev[w]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            reach[dest] = frozenset(seen)

    remaining = dict(capacity)
    expansions = 0
    found: List[List[int]] = []  # class-id routes, one per unit so far

    def route_unit(k: int) -> bool:
        if k == len(units):
            return True
        _demand, index, origin, dest = units[k]
        floor = found[-1] if index > 0 else None

        def dfs(v: int, route: List[int]) -> bool:
            nonlocal expansions
            expansions += 1
            if expansions > budget:
                raise BudgetExceededError(budget)
            if v == dest:
                found.append(list(route))
                if route_unit(k + 1):
                    return True
                found.pop()
                return False
            for c in out_classes[v]:
                if remaining[c] <= 0:
                    continue
                if floor is not None and _lex_less(route + [c], floor):
                    continue
                w = head_of[c]
                if w not in reach[dest]:
                    continue
                remaining[c] -= 1
                route.append(c)
                if dfs(w, route):
                    return True
                route.pop()
                remaining[c] += 1
            return False

        return dfs(origin, [])

    if not route_unit(0):
        return OracleResult(False, None, expansions)

    # Re-expand class routes into concrete arc ids: uses of a class are
    # served by its member arcs in ascending id order, each up to capacity.
    served: Dict[int, List[int]] = {}
    for c in capacity:
        t, h = g.arc_tail[c], g.arc_head[c]
        pool = []
        for a in classes[(t, h)]:
            pool.extend([a] * inst.capacities[a])
        served[c] = pool
    cursor = {c: 0 for c in capacity}
    paths: Dict[int, List[List[int]]] = {d.id: [] for d in inst.demands}
    for (demand, _i, _o, _dest), route in zip(units, found):
        concrete = []
        for c in route:
            concrete.append(served[c][cursor[c]])
            cursor[c] += 1
        paths[demand].append(concrete)
    return OracleResult(True, paths, expansions)


def _lex_less(a: Sequence[int], b: Sequence[int]) -> bool:
    """True when a is strictly lexicographically below the committed prefix b.

    Only applies while a could still sink below b; a shorter prefix equal
    to b's start is not yet committed either way.
    """
    for x, y in zip(a, b):
        if x != y:
            return x < y
    return False


# -- crossings ----------------------------------------------------------------


@dataclass(frozen=True)
class CrossVector:
    """Per-vertex crossing counts, greatest vertex first.

    Lexicographic comparison therefore weighs crossings at late vertices
    heaviest, which is the measure the uncrossing pass strictly decreases.
    """

    counts: tuple

    def __lt__(self, other: "CrossVector") -> bool:
        return self.counts < other.counts

    def total(self) -> int:
        return sum(self.counts)


def _passages(g: EmbeddedDigraph, arcs: Sequence[int]) -> Dict[int, Tuple[int, int]]:
    """Vertex -> (in-arc, out-arc) at every inner vertex of a path."""
    out = {}
    for a, b in zip(arcs, arcs[1:]):
        out[g.arc_head[a]] = (a, b)
    return out


def crossing_vertices(g: EmbeddedDigraph, p: Sequence[int], q: Sequence[int]) -> list:
    """All vertices where the two arc-disjoint paths cross."""
    pp = _passages(g, p)
    qq = _passages(g, q)
    out = []
    for v in pp.keys() & qq.keys():
        p_in, p_out = pp[v]
        q_in, q_out = qq[v]
        if classify_behaviour(g, v, p_in, p_out, q_in, q_out) is Behaviour.CROSS:
            out.append(v)
    return out


def count_crossings(g: EmbeddedDigraph, order: TopoOrder,
                    paths: Sequence[Sequence[int]]) -> CrossVector:
    """Number of crossing path pairs at each vertex, packed greatest-first."""
    counts = {v: 0 for v in order.order}
    for p, q in itertools.combinations(paths, 2):
        for v in crossing_vertices(g, p, q):
            counts[v] += 1
    return CrossVector(tuple(counts[v] for v in reversed(order.order)))


@dataclass
class UncrossOutcome:
    paths: list  # same outer structure as the input
    swaps: int
    vectors: list  # CrossVector after 0, 1, ... swaps


def uncross(g: EmbeddedDigraph, order: TopoOrder,
            paths: Sequence[Sequence[int]]) -> UncrossOutcome:
    """Rewrite arc-disjoint paths until crossings are in normal form.

    Two paths sharing an endpoint end up never crossing, and any other
    crossing pair ends up crossing exactly once, at its first common
    vertex. Each rewrite swaps the middles of two paths between two common
    vertices, strictly decreasing the crossing vector, which guarantees
    termination; that decrease is asserted on every swap. Endpoints, and
    hence the demands served, never change.
    """
    work = [list(p) for p in paths]
    vectors = [count_crossings(g, order, work)]
    swaps = 0
    while True:
        swap = _find_violation(g, order, work)
        if swap is None:
            break
        i, j, u, v = swap
        pu = subpath(g, work[i], u, v)
        qu = subpath(g, work[j], u, v)
        pi_pre = subpath(g, work[i], path_vertices(g, work[i])[0], u)
        pi_post = subpath(g, work[i], v, path_vertices(g, work[i])[-1])
        qj_pre = subpath(g, work[j], path_vertices(g, work[j])[0], u)
        qj_post = subpath(g, work[j], v, path_vertices(g, work[j])[-1])
        work[i] = pi_pre + qu + pi_post
        work[j] = qj_pre + pu + qj_post
        swaps += 1
        vec = count_crossings(g, order, work)
        assert vec < vectors[-1], "crossing vector failed to decrease"
        vectors.append(vec)
    return UncrossOutcome(work, swaps, vectors)


def _find_violation(g: EmbeddedDigraph, order: TopoOrder, paths: list):
    """Locate one normal-form violation: (i, j, u, v) to swap, or None.

    Vertices are scanned from the greatest down so progress matches the
    lexicographic measure; pairs are scanned by index.
    """
    infos = []
    for p in paths:
        infos.append((set(path_vertices(g, p)), _passages(g, p),
                      path_vertices(g, p)[-1]))
    for w in reversed(order.order):
        for i, j in itertools.combinations(range(len(paths)), 2):
            verts_i, pass_i, dest_i = infos[i]
            verts_j, pass_j, dest_j = infos[j]
            if w not in pass_i or w not in pass_j:
                continue
            pi, po = pass_i[w]
            qi, qo = pass_j[w]
            if classify_behaviour(g, w, pi, po, qi, qo) is not Behaviour.CROSS:
                continue
            first = order.first(verts_i & verts_j)
            if first != w:
                return i, j, first, w
            if dest_i == dest_j:
                return i, j, w, dest_i
    return None


def check_uncrossed(g: EmbeddedDigraph, order: TopoOrder,
                    paths: Sequence[Sequence[int]]) -> Optional[Violation]:
    """Audit the two normal-form conditions by direct pairwise scan."""
    for (i, p), (j, q) in itertools.combinations(enumerate(paths), 2):
        pv = path_vertices(g, p)
        qv = path_vertices(g, q)
        crossings = crossing_vertices(g, p, q)
        if not crossings:
            continue
        share_endpoint = pv[0] == qv[0] or pv[-1] == qv[-1]
        if share_endpoint:
            return Violation("endpoint-crossing",
                             f"paths {i},{j} share an endpoint but cross at {crossings}")
        if len(crossings) > 1:
            return Violation("multiple-crossings",
                             f"paths {i},{j} cross at {sorted(crossings)}")
        first = order.first(set(pv) & set(qv))
        if crossings[0] != first:
            return Violation("late-crossing",
                             f"paths {i},{j} cross at {crossings[0]}, "
                             f"not their first common vertex {first}")
    return None


# -- interval structure of uncrossed solutions ---------------------------------


def _cyclic_intervals(r: int):
    """All cyclic intervals of {0..r-1} as frozensets (empty and full included)."""
    seen = {frozenset(), frozenset(range(r))}
    for start in range(r):
        for length in range(1, r):
            seen.add(frozenset((start + k) % r for k in range(length)))
    return seen


def _is_cyclic_interval(members: frozenset, r: int) -> bool:
    return members in _cyclic_intervals(r)


@dataclass
class IntervalReport:
    """Crossing intervals per demand pair, from an uncrossed solution."""

    intervals: dict  # (h1, h2) -> (frozenset, frozenset)
    observed: dict  # (h1, h2) -> {(i, j): (Behaviour, Behaviour)} at first meetings


def check_interval_structure(g: EmbeddedDigraph, order: TopoOrder,
                             solution: Dict[int, List[List[int]]]):
    """Verify the interval laws of uncrossed solutions.

    For every demand pair the crossing relation must be a combinatorial
    rectangle: an interval of one demand crossed with an interval of the
    other, plus the complements crossed with each other. And for every
    closed curve bounded by two consecutive paths of one demand, the other
    demands' paths going left (respectively right) of it at their first
    common vertex must form a cyclic interval. Returns an IntervalReport,
    or a Violation describing the first failure.
    """
    ids = sorted(solution)
    intervals = {}
    observed = {}
    for h1, h2 in itertools.combinations(ids, 2):
        ps, qs = solution[h1], solution[h2]
        r1, r2 = len(ps), len(qs)
        crossed = set()
        obs = {}
        for i, j in itertools.product(range(r1), range(r2)):
            p, q = ps[i], qs[j]
            shared = set(path_vertices(g, p)) & set(path_vertices(g, q))
            if not shared:
                continue
            if crossing_vertices(g, p, q):
                crossed.add((i, j))
            first = order.first(shared)
            pair_beh = _mutual_behaviour_at(g, p, q, first)
            if pair_beh is not None:
                obs[(i, j)] = pair_beh
        observed[(h1, h2)] = obs
        fit = _fit_rectangle(crossed, r1, r2)
        if fit is None:
            return Violation("crossing-intervals",
                             f"demands {h1},{h2}: crossing relation {sorted(crossed)} "
                             f"is not an interval rectangle")
        intervals[(h1, h2)] = fit
    for h in ids:
        ps = solution[h]
        for h2 in ids:
            if h2 == h or len(solution[h2]) < 2:
                continue
            qs = solution[h2]
            r2 = len(qs)
            for j in range(r2):
                cyc = _CurvePair(g, qs[j], qs[(j + 1) % r2])
                left, right = set(), set()
                for i, p in enumerate(ps):
                    side = cyc.side_of_path(g, order, p)
                    if side is Behaviour.LEFT:
                        left.add(i)
                    elif side is Behaviour.RIGHT:
                        right.add(i)
                r1 = len(ps)
                if not _is_cyclic_interval(frozenset(left), r1):
                    return Violation("left-interval",
                                     f"demand {h} vs curve {h2}[{j}]: left set {sorted(left)}")
                if not _is_cyclic_interval(frozenset(right), r1):
                    return Violation("right-interval",
                                     f"demand {h} vs curve {h2}[{j}]: right set {sorted(right)}")
    return IntervalReport(intervals, observed)


def _mutual_behaviour_at(g: EmbeddedDigraph, p: Sequence[int], q: Sequence[int], v: int):
    pp = _passages(g, p)
    qq = _passages(g, q)
    if v not in pp or v not in qq:
        return None
    b_pq = classify_behaviour(g, v, *pp[v], *qq[v])
    b_qp = classify_behaviour(g, v, *qq[v], *pp[v])
    return b_pq, b_qp


def _fit_rectangle(crossed: set, r1: int, r2: int):
    """Intervals (I1, I2) with crossed == I1 x I2 union co-I1 x co-I2, or None."""
    full1, full2 = frozenset(range(r1)), frozenset(range(r2))
    for i1 in sorted(_cyclic_intervals(r1), key=lambda s: (len(s), sorted(s))):
        for i2 in sorted(_cyclic_intervals(r2), key=lambda s: (len(s), sorted(s))):
            rel = {(i, j) for i in i1 for j in i2}
            rel |= {(i, j) for i in full1 - i1 for j in full2 - i2}
            if rel == crossed:
                return i1, i2
    return None


class _CurvePair:
    """The closed curve along one path and back along the next."""

    def __init__(self, g: EmbeddedDigraph, q: Sequence[int], q_next: Sequence[int]):
        self.q = list(q)
        self.q_next = list(q_next)
        self.vertices = set(path_vertices(g, q)) | set(path_vertices(g, q_next))
        qv = path_vertices(g, q)
        nv = path_vertices(g, q_next)
        self.source, self.dest = qv[0], qv[-1]
        self.fwd = _passages(g, q)
        self.bwd = _passages(g, q_next)
        self.first_arcs = (q[0], q_next[0])
        self.last_arcs = (q[-1], q_next[-1])

    def passages_at(self, v: int) -> list:
        """Arc-end pairs of the curve at v (direction along the curve is
        irrelevant for behaviour classification)."""
        out = []
        if v == self.source:
            out.append((self.q[0], self.q_next[0]))
        elif v == self.dest:
            out.append((self.q[-1], self.q_next[-1]))
        else:
            if v in self.fwd:
                out.append(self.fwd[v])
            if v in self.bwd:
                out.append(self.bwd[v])
        return out

    def side_of_path(self, g: EmbeddedDigraph, order: TopoOrder, p: Sequence[int]):
        """LEFT or RIGHT when the path consistently keeps one side at its
        first common vertex with the curve; None when it crosses, only
        touches endpoints, or is one of the curve's own paths."""
        if list(p) == self.q or list(p) == self.q_next:
            return None
        pv = path_vertices(g, p)
        shared = set(pv) & self.vertices
        if not shared:
            return None
        v = order.first(shared)
        pp = _passages(g, p)
        if v not in pp:
            return None  # path starts or ends on the curve
        sides = set()
        for e1, e2 in self.passages_at(v):
            if len({*pp[v], e1, e2}) != 4:
                return None
            sides.add(behaviour_about_ends(g, v, *pp[v], e1, e2))
        if sides == {Behaviour.LEFT}:
            return Behaviour.LEFT
        if sides == {Behaviour.RIGHT}:
            return Behaviour.RIGHT
        return None
