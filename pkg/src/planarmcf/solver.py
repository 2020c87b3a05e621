"""Topological routing of demand paths.

Because the normalized instance is Eulerian and acyclic, every arc is used
by any solution, so when vertices are processed in topological order every
in-arc of the current vertex already belongs to a growing path. Once the
behaviour of every pair of paths through a vertex is known, the out-arc of
every entering path is forced: counting the paths it crosses and the paths
it goes left of pins down the exact rotation slot its out-arc occupies.

Behaviours of pairs that met before are forced by the side their
destinations lie on relative to the closed walk between the first meeting
and the current vertex. Behaviours at first meetings are the genuinely
free choices. Two search strategies are provided:

* ``run_scheme`` / ``solve_with_schemes`` take first-meeting behaviours
  from a routing scheme (four-interval partitions per demand pair with the
  fixed lookup table) and try every scheme in enumeration order.

* ``solve`` searches the space of first-meeting behaviour patterns
  directly, branching over the locally realizable assignments at each
  vertex. This is the primary decision procedure: the compressed
  interval-partition family provably misses realizable patterns (a partner
  path may answer left to one path and right to another, which no cell
  assignment expresses), so exhausting it cannot prove infeasibility,
  whereas the direct search is complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .embedding import Behaviour, EmbeddedDigraph, Violation
from .errors import PreconditionViolatedError
from .geometry import make_walk, partition_faces, vertex_side, VertexSide
from .instances import (
    Instance,
    NormalizedInstance,
    TopoOrder,
    _expand_with_origin,
    eulerian_imbalance,
    normalize,
)
from .schemes import RoutingScheme, SchemeSpace


class PartialPath:
    """One unit of one demand while it grows from its source terminal."""

    __slots__ = ("pid", "demand", "index", "arcs", "verts", "head", "target", "done")

    def __init__(self, pid: int, demand: int, index: int, start: int, target: int):
        self.pid = pid
        self.demand = demand
        self.index = index
        self.arcs: List[int] = []
        self.verts: List[int] = [start]
        self.head = start
        self.target = target
        self.done = False

    def extend(self, g: EmbeddedDigraph, arc: int) -> None:
        self.arcs.append(arc)
        self.head = g.arc_head[arc]
        self.verts.append(self.head)


@dataclass
class TrialFailure:
    """Why one scheme trial died: a vertex could not be routed or a demand
    could not be satisfied."""

    kind: str  # "vertex" or "demand"
    where: int
    reason: str

    def __str__(self) -> str:
        return f"{self.kind} failure at {self.where}: {self.reason}"


@dataclass
class Solution:
    """Arc-disjoint paths per demand, in normalized and original arc ids."""

    paths: Dict[int, List[List[int]]]
    projected: Dict[int, List[List[int]]]
    scheme_rank: Optional[int] = None


@dataclass
class SolveResult:
    feasible: bool
    solution: Optional[Solution]
    trials: int
    exhausted: bool
    scheme_count: int

    def __bool__(self) -> bool:
        return self.feasible


class RoutingState:
    """Trial-local bookkeeping for one scheme trial."""

    __slots__ = ("norm", "scheme", "paths", "owner", "registry", "reach", "bound")

    def __init__(self, norm: NormalizedInstance, scheme: RoutingScheme,
                 reach: Optional[dict] = None):
        self.norm = norm
        self.scheme = scheme
        self.reach = reach
        g = norm.graph
        self.paths: List[PartialPath] = []
        self.owner: Dict[int, PartialPath] = {}
        self.registry: Dict[Tuple[int, int], int] = {}
        self.bound: Dict[int, List[Tuple[PartialPath, int]]] = {}
        for d in sorted(norm.instance.demands, key=lambda d: d.id):
            s, t = norm.terminals[d.id]
            rot = g.rotation[s]
            start = rot.index(min(rot))
            first: List[Tuple[PartialPath, int]] = []
            base = len(self.paths)
            for i in range(d.request):
                p = PartialPath(base + i, d.id, i, s, t)
                self.paths.append(p)
                first.append((p, rot[(start + i) % len(rot)]))
            self.bound[s] = first
            for i in range(base, base + d.request):
                for j in range(i + 1, base + d.request):
                    self.registry[(i, j)] = s


def routing_candidate(g: EmbeddedDigraph, v: int, in_arc: int,
                      rel_to_others: Sequence[Behaviour]) -> int:
    """The only rotation slot the out-arc of a path entering by in_arc can use.

    ``rel_to_others`` lists the behaviour of this path relative to every
    other path through v. A path it goes left of keeps both its arcs in
    the rotation interval between this path's in-arc and out-arc, so it
    occupies two slots there; a crossing path occupies one. The out-arc
    therefore sits 2*left + cross + 1 positions onward in the rotation.
    """
    lefts = sum(1 for b in rel_to_others if b is Behaviour.LEFT)
    crosses = sum(1 for b in rel_to_others if b is Behaviour.CROSS)
    rot = g.rotation[v]
    i = 2 * lefts + crosses + 1
    return rot[(g.rotation_position(v, in_arc) + i) % len(rot)]


def route_vertex(g: EmbeddedDigraph, v: int,
                 entering: Sequence[Tuple[int, int]],
                 behaviours: Dict[Tuple[int, int], Behaviour]):
    """Assign an out-arc to every path entering v, or explain the failure.

    ``entering`` is a list of (path id, in-arc); ``behaviours`` maps ordered
    path-id pairs to required behaviours. The counting formula proposes the
    unique candidate slot per path; the proposal is accepted only if it is
    a bijection onto the out-arcs under which every realized pair of
    in/out arcs classifies to its required behaviour.
    """
    from .embedding import classify_behaviour

    assignment: Dict[int, int] = {}
    used = set()
    for pid, a0 in entering:
        rel = [behaviours[(pid, qid)] for qid, _ in entering if qid != pid]
        out = routing_candidate(g, v, a0, rel)
        if g.arc_tail.get(out) != v:
            return TrialFailure("vertex", v, f"candidate slot for path {pid} is not an out-arc")
        if out in used:
            return TrialFailure("vertex", v, f"paths collide on out-arc {out}")
        used.add(out)
        assignment[pid] = out
    in_arc = dict(entering)
    for (pid, _), (qid, _) in itertools.permutations(entering, 2):
        realized = classify_behaviour(g, v, in_arc[pid], assignment[pid],
                                      in_arc[qid], assignment[qid])
        if realized is not behaviours[(pid, qid)]:
            return TrialFailure(
                "vertex", v,
                f"required {behaviours[(pid, qid)]} between paths {pid},{qid} "
                f"but rotation realizes {realized}")
    return assignment


def met_pair_behaviours(g: EmbeddedDigraph, v: int, u: int,
                        p: PartialPath, q: PartialPath):
    """Forced behaviours at v of two paths that first met at u < v.

    Each path goes left of the other exactly when its own destination lies
    inside the closed walk running u to v along it and back along the
    other; the two destinations see the same partition with opposite
    orientations. Returns (p rel q, q rel p) or a TrialFailure when a
    destination sits on the walk itself.
    """
    walk = make_walk(g, p.arcs, q.arcs, u, v)
    partition = partition_faces(g, walk)
    side_p = vertex_side(g, partition, p.target)
    side_q = vertex_side(g, partition, q.target)
    if VertexSide.ON_WALK in (side_p, side_q):
        return TrialFailure("vertex", v, "destination lies on the meeting walk")
    b_pq = Behaviour.LEFT if side_p is VertexSide.INSIDE else Behaviour.RIGHT
    b_qp = Behaviour.LEFT if side_q is VertexSide.OUTSIDE else Behaviour.RIGHT
    return b_pq, b_qp


def required_behaviours(state: RoutingState, v: int,
                        entering: Sequence[Tuple[int, int]]):
    """Behaviour of every ordered pair of paths entering v.

    Pairs meeting here for the first time are different demands and take
    their behaviour from the scheme. Pairs that met before take it from the
    side their destinations lie on, relative to the closed walk between the
    first meeting and v.
    """
    norm = state.norm
    g = norm.graph
    out: Dict[Tuple[int, int], Behaviour] = {}
    fresh = []
    for (pid, _), (qid, _) in itertools.combinations(entering, 2):
        p, q = state.paths[pid], state.paths[qid]
        key = (pid, qid) if pid < qid else (qid, pid)
        u = state.registry.get(key)
        if u is None:
            if p.demand == q.demand:
                raise AssertionError("same-demand paths must first meet at their source")
            b_pq, b_qp = state.scheme.lookup(p.demand, p.index, q.demand, q.index)
            out[(pid, qid)] = b_pq
            out[(qid, pid)] = b_qp
            fresh.append(key)
        else:
            forced = met_pair_behaviours(g, v, u, p, q)
            if isinstance(forced, TrialFailure):
                return forced
            out[(pid, qid)], out[(qid, pid)] = forced
    for key in fresh:
        state.registry[key] = v
    return out


def _arrival(state: RoutingState, path: PartialPath) -> Optional[TrialFailure]:
    """Handle a path whose head just advanced; detect dead ends early."""
    g = state.norm.graph
    w = path.head
    if not g.out_arcs(w):
        if w == path.target:
            path.done = True
            return None
        return TrialFailure("demand", path.demand,
                            f"path {path.pid} ran into foreign terminal {w}")
    if state.reach is not None and w not in state.reach[path.target]:
        return TrialFailure("demand", path.demand,
                            f"path {path.pid} can no longer reach its terminal")
    return None


def run_scheme(norm: NormalizedInstance, scheme: RoutingScheme,
               reach: Optional[dict] = None):
    """Route all demands under one scheme; a Solution or a TrialFailure."""
    g = norm.graph
    state = RoutingState(norm, scheme, reach)
    sinks = {t: d for d, (_s, t) in norm.terminals.items()}
    for v in norm.order.order:
        if v in state.bound:  # source terminal
            for path, arc in state.bound[v]:
                path.extend(g, arc)
                state.owner[arc] = path
                fail = _arrival(state, path)
                if fail is not None:
                    return fail
            continue
        if v in sinks:
            d = sinks[v]
            for p in state.paths:
                if p.demand == d and not p.done:
                    return TrialFailure("demand", d,
                                        f"terminal {v} processed while path {p.pid} is incomplete")
            continue
        in_arcs = g.in_arcs(v)
        if not in_arcs:
            continue
        entering = []
        for a in in_arcs:
            p = state.owner.get(a)
            if p is None or p.head != v:
                raise AssertionError(f"unsaturated in-arc {a} at vertex {v}")
            entering.append((p.pid, a))
        if len(entering) != len(g.out_arcs(v)):
            raise AssertionError(f"in/out degree mismatch at inner vertex {v}")
        behaviours = required_behaviours(state, v, entering)
        if isinstance(behaviours, TrialFailure):
            return behaviours
        assignment = route_vertex(g, v, entering, behaviours)
        if isinstance(assignment, TrialFailure):
            return assignment
        for pid, arc in assignment.items():
            path = state.paths[pid]
            path.extend(g, arc)
            state.owner[arc] = path
            fail = _arrival(state, path)
            if fail is not None:
                return fail
    if not all(p.done for p in state.paths):
        incomplete = [p.pid for p in state.paths if not p.done]
        return TrialFailure("demand", -1, f"paths never completed: {incomplete}")
    return _assemble_solution(norm, state.paths)


def _assemble_solution(norm: NormalizedInstance, paths: Sequence[PartialPath]) -> Solution:
    by_demand: Dict[int, List[List[int]]] = {}
    projected: Dict[int, List[List[int]]] = {}
    for p in sorted(paths, key=lambda p: (p.demand, p.index)):
        by_demand.setdefault(p.demand, []).append(list(p.arcs))
        projected.setdefault(p.demand, []).append(norm.project_path(p.arcs))
    for d in norm.original.demands:
        if d.request == 0:
            by_demand.setdefault(d.id, [])
            projected.setdefault(d.id, [])
    return Solution(paths=by_demand, projected=projected)


def reachability(norm: NormalizedInstance) -> dict:
    """For each sink terminal, the set of vertices it is reachable from."""
    g = norm.graph
    rev: Dict[int, list] = {v: [] for v in g.vertices}
    for a in g.arc_tail:
        rev[g.arc_head[a]].append(g.arc_tail[a])
    out = {}
    for _d, (_s, t) in norm.terminals.items():
        seen = {t}
        stack = [t]
        while stack:
            w = stack.pop()
            for u in rev[w]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        out[t] = frozenset(seen)
    return out


def degree_bound_ok(norm: NormalizedInstance) -> bool:
    """Sanity bound: no vertex degree may exceed (max request + 1) * k."""
    demands = norm.instance.demands
    if not demands:
        return True
    bound = (max(d.request for d in demands) + 1) * len(demands)
    g = norm.graph
    return all(len(g.in_arcs(v)) <= bound and len(g.out_arcs(v)) <= bound
               for v in g.vertices)


def solve_with_schemes(inst: Instance, *, max_schemes: Optional[int] = None,
                       parallel: Optional[int] = None,
                       on_trial: Optional[Callable] = None) -> SolveResult:
    """Decide the instance by trying routing schemes in enumeration order.

    Returns the first Solution in enumeration order, verified against the
    original instance before being returned. With ``max_schemes`` the trial
    count is capped; an infeasible answer is then exhaustive only if
    ``exhausted`` is set on the result.

    Exhausting the scheme family does not prove infeasibility: the
    four-interval compression misses some realizable behaviour patterns.
    Use ``solve`` for a complete decision.
    """
    norm = normalize(inst)
    assert degree_bound_ok(norm)
    requests = {d.id: d.request for d in norm.instance.demands}
    space = SchemeSpace(requests)
    limit = space.count if max_schemes is None else min(space.count, max_schemes)
    reach = reachability(norm)

    if parallel and parallel > 1 and limit > 1:
        return _solve_parallel(norm, space, limit, reach, parallel)

    trials = 0
    for scheme in itertools.islice(iter(space), limit):
        outcome = run_scheme(norm, scheme, reach)
        trials += 1
        if on_trial is not None:
            on_trial(trials - 1, scheme, outcome)
        if isinstance(outcome, Solution):
            outcome.scheme_rank = trials - 1
            _check_returned_solution(norm, outcome)
            return SolveResult(True, outcome, trials, False, space.count)
    return SolveResult(False, None, trials, trials == space.count, space.count)


class _PatternSearch:
    """Depth-first search over first-meeting behaviour patterns.

    Routing proceeds in topological order exactly as in run_scheme, but at
    every vertex the search enumerates all in-to-out bijections that
    realize the forced behaviours of previously-met pairs; the behaviours
    realized between pairs meeting here for the first time are free and
    constitute the branching. A trial is one routed leaf (a failure or a
    completed routing), so the count is comparable to scheme trials.
    """

    def __init__(self, norm: NormalizedInstance, reach: dict,
                 limit: Optional[int], on_trial: Optional[Callable] = None):
        self.norm = norm
        self.g = norm.graph
        self.reach = reach
        self.limit = limit
        self.trials = 0
        self.capped = False
        self.on_trial = on_trial
        self.sinks = {t: d for d, (_s, t) in norm.terminals.items()}
        order = norm.order.order
        self.order = order
        self.first_choice: Optional[int] = None  # used by the parallel driver
        self.branch_children: Optional[int] = None

    def _leaf(self, outcome) -> None:
        self.trials += 1
        if self.on_trial is not None:
            self.on_trial(self.trials - 1, None, outcome)
        if self.limit is not None and self.trials >= self.limit:
            self.capped = True

    def run(self) -> Optional[Solution]:
        state = RoutingState(self.norm, scheme=None, reach=self.reach)
        return self._route(state, 0, True)

    def _route(self, state: RoutingState, vi: int, top: bool) -> Optional[Solution]:
        g = self.g
        undo: List[Tuple[PartialPath, int]] = []
        fresh_keys: List[Tuple[int, int]] = []

        def extend(path: PartialPath, arc: int):
            path.extend(g, arc)
            state.owner[arc] = path
            undo.append((path, arc))
            return _arrival(state, path)

        def unwind():
            for path, arc in reversed(undo):
                del state.owner[arc]
                path.arcs.pop()
                path.verts.pop()
                path.head = path.verts[-1]
                path.done = False
            for key in fresh_keys:
                del state.registry[key]

        while vi < len(self.order):
            v = self.order[vi]
            vi += 1
            if v in state.bound:
                fail = None
                for path, arc in state.bound[v]:
                    fail = extend(path, arc)
                    if fail is not None:
                        break
                if fail is not None:
                    self._leaf(fail)
                    unwind()
                    return None
                continue
            if v in self.sinks:
                d = self.sinks[v]
                if any(p.demand == d and not p.done for p in state.paths):
                    self._leaf(TrialFailure("demand", d, f"terminal {v} reached too early"))
                    unwind()
                    return None
                continue
            in_arcs = g.in_arcs(v)
            if not in_arcs:
                continue
            entering = []
            for a in in_arcs:
                p = state.owner.get(a)
                if p is None or p.head != v:
                    raise AssertionError(f"unsaturated in-arc {a} at vertex {v}")
                entering.append((p.pid, a))
            met_req: Dict[Tuple[int, int], Behaviour] = {}
            failure = None
            fresh_here = []
            for (pid, _), (qid, _) in itertools.combinations(entering, 2):
                key = (pid, qid) if pid < qid else (qid, pid)
                u = state.registry.get(key)
                if u is None:
                    fresh_here.append(key)
                    continue
                forced = met_pair_behaviours(g, v, u, state.paths[pid], state.paths[qid])
                if isinstance(forced, TrialFailure):
                    failure = forced
                    break
                met_req[(pid, qid)], met_req[(qid, pid)] = forced
            if failure is not None:
                self._leaf(failure)
                unwind()
                return None
            assignments = self._assignments(state, v, entering, met_req)
            if not assignments:
                self._leaf(TrialFailure("vertex", v, "no realizable routing"))
                unwind()
                return None
            for key in fresh_here:
                state.registry[key] = v
                fresh_keys.append(key)
            if len(assignments) == 1:
                fail = None
                for pid, arc in assignments[0]:
                    fail = extend(state.paths[pid], arc)
                    if fail is not None:
                        break
                if fail is not None:
                    self._leaf(fail)
                    unwind()
                    return None
                continue
            if top:
                self.branch_children = len(assignments)
            for ci, assignment in enumerate(assignments):
                if top and self.first_choice is not None and ci != self.first_choice:
                    continue
                sub: List[Tuple[PartialPath, int]] = []
                fail = None
                for pid, arc in assignment:
                    path = state.paths[pid]
                    path.extend(g, arc)
                    state.owner[arc] = path
                    sub.append((path, arc))
                    fail = _arrival(state, path)
                    if fail is not None:
                        break
                if fail is None:
                    result = self._route(state, vi, False)
                    if result is not None:
                        return result
                else:
                    self._leaf(fail)
                for path, arc in reversed(sub):
                    del state.owner[arc]
                    path.arcs.pop()
                    path.verts.pop()
                    path.head = path.verts[-1]
                    path.done = False
                if self.capped:
                    break
            unwind()
            return None
        if all(p.done for p in state.paths):
            solution = _assemble_solution(self.norm, state.paths)
            self._leaf(solution)
            return solution
        incomplete = [p.pid for p in state.paths if not p.done]
        self._leaf(TrialFailure("demand", -1, f"paths never completed: {incomplete}"))
        unwind()
        return None

    def _assignments(self, state: RoutingState, v: int, entering, met_req):
        """All in-to-out bijections at v consistent with forced behaviours.

        Behaviours between pairs without a forced requirement are free, so
        every surviving bijection is one branch of the pattern search. The
        enumeration order is fixed by rotation positions.
        """
        from .embedding import classify_behaviour

        g = self.g
        outs = sorted(g.out_arcs(v), key=lambda a: g.rotation_position(v, a))
        order = sorted(entering, key=lambda e: g.rotation_position(v, e[1]))
        in_arc = dict(entering)
        used = [False] * len(outs)
        chosen: List[Tuple[int, int]] = []
        results: List[tuple] = []

        def bt(idx: int):
            if idx == len(order):
                results.append(tuple(chosen))
                return
            pid = order[idx][0]
            target = state.paths[pid].target
            for oi, arc in enumerate(outs):
                if used[oi]:
                    continue
                if g.arc_head[arc] not in self.reach[target]:
                    continue
                ok = True
                for qid, q_arc in chosen:
                    req_pq = met_req.get((pid, qid))
                    req_qp = met_req.get((qid, pid))
                    if req_pq is None and req_qp is None:
                        continue
                    b_pq = classify_behaviour(g, v, in_arc[pid], arc, in_arc[qid], q_arc)
                    if req_pq is not None and b_pq is not req_pq:
                        ok = False
                        break
                    if req_qp is not None:
                        b_qp = classify_behaviour(g, v, in_arc[qid], q_arc, in_arc[pid], arc)
                        if b_qp is not req_qp:
                            ok = False
                            break
                if not ok:
                    continue
                used[oi] = True
                chosen.append((pid, arc))
                bt(idx + 1)
                chosen.pop()
                used[oi] = False

        bt(0)
        return results


def solve(inst: Instance, *, max_schemes: Optional[int] = None,
          parallel: Optional[int] = None,
          on_trial: Optional[Callable] = None) -> SolveResult:
    """Decide the instance by complete search over behaviour patterns.

    Vertices are routed in topological order; behaviours of previously-met
    path pairs are forced by the destination side test, and the realizable
    assignments at each first meeting are branched over exhaustively, so
    the search decides feasibility exactly. Any returned Solution is
    verified against the original instance first. ``max_schemes`` caps the
    number of routed leaves (comparable to scheme trials); a capped
    infeasible answer has ``exhausted`` False. Deterministic; ``parallel``
    fans the children of the first branch point out to processes without
    changing the answer.
    """
    norm = normalize(inst)
    assert degree_bound_ok(norm)
    requests = {d.id: d.request for d in norm.instance.demands}
    scheme_space_size = SchemeSpace(requests).count if requests else 1
    reach = reachability(norm)

    if parallel and parallel > 1:
        result = _solve_search_parallel(norm, reach, max_schemes, parallel,
                                        scheme_space_size)
        if result is not None:
            return result

    search = _PatternSearch(norm, reach, max_schemes, on_trial)
    solution = search.run()
    if solution is not None:
        _check_returned_solution(norm, solution)
        return SolveResult(True, solution, search.trials, False, scheme_space_size)
    return SolveResult(False, None, search.trials, not search.capped, scheme_space_size)


def _search_worker_chunk(choice: int, limit):
    norm = _WORKER["norm"]
    reach = _WORKER["reach"]
    search = _PatternSearch(norm, reach, limit)
    search.first_choice = choice
    solution = search.run()
    return solution, search.trials, search.capped


def _solve_search_parallel(norm, reach, limit, workers, scheme_space_size):
    """Distribute the first branch point's children over processes.

    Returns None when there is no branching to distribute (the caller then
    runs serially)."""
    from concurrent.futures import ProcessPoolExecutor

    probe = _PatternSearch(norm, reach, limit=1)
    probe.first_choice = -1  # skip every child: just discover the branch
    probe.run()
    children = probe.branch_children
    if not children or children < 2:
        return None
    requests = {d.id: d.request for d in norm.instance.demands}
    trials = probe.trials
    pool = ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                               initargs=(norm, requests))
    try:
        futures = [pool.submit(_search_worker_chunk, c, limit) for c in range(children)]
        capped = False
        for fut in futures:
            solution, t, was_capped = fut.result()
            trials += t
            capped = capped or was_capped
            if solution is not None:
                _check_returned_solution(norm, solution)
                return SolveResult(True, solution, trials, False, scheme_space_size)
        return SolveResult(False, None, trials, not capped, scheme_space_size)
    finally:
        pool.shutdown(wait=False, cancel_futures=True)


def _check_returned_solution(norm: NormalizedInstance, sol: Solution) -> None:
    violation = verify_solution(norm.original, sol.projected)
    if violation is not None:
        raise RuntimeError(f"internal error: solver produced an invalid solution: {violation}")


_WORKER: dict = {}


def _worker_init(norm, requests):
    _WORKER["norm"] = norm
    _WORKER["space"] = SchemeSpace(requests)
    _WORKER["reach"] = reachability(norm)


def _worker_chunk(start: int, stop: int):
    norm = _WORKER["norm"]
    space = _WORKER["space"]
    reach = _WORKER["reach"]
    for rank in range(start, stop):
        outcome = run_scheme(norm, space.scheme_at(rank), reach)
        if isinstance(outcome, Solution):
            return rank, outcome
    return None, None


def _solve_parallel(norm, space, limit, reach, workers: int) -> SolveResult:
    """Fan scheme trials out to processes; first success in rank order wins."""
    from concurrent.futures import ProcessPoolExecutor

    requests = {d.id: d.request for d in norm.instance.demands}
    chunk = max(1, min(512, (limit + 4 * workers - 1) // (4 * workers)))
    starts = list(range(0, limit, chunk))
    trials = 0
    with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                             initargs=(norm, requests)) as pool:
        pending = {}
        next_submit = 0
        next_consume = 0
        while next_consume < len(starts):
            while next_submit < len(starts) and len(pending) < 2 * workers:
                s = starts[next_submit]
                pending[next_submit] = pool.submit(_worker_chunk, s, min(s + chunk, limit))
                next_submit += 1
            rank, sol = pending.pop(next_consume).result()
            if rank is not None:
                trials += rank - starts[next_consume] + 1
                sol.scheme_rank = rank
                _check_returned_solution(norm, sol)
                return SolveResult(True, sol, trials, False, space.count)
            trials += min(starts[next_consume] + chunk, limit) - starts[next_consume]
            next_consume += 1
    return SolveResult(False, None, trials, trials == space.count, space.count)


def verify_solution(inst: Instance, projected: Dict[int, List[List[int]]]):
    """Check a solution against the original instance; None when it holds.

    Verifies that every demand has exactly its requested number of paths,
    every path runs from the demand's head to its tail along consecutive
    arcs, and no arc is used beyond its capacity. The embedding plays no
    role here, so this is an independent check on any solver output.
    """
    g = inst.graph
    usage: Dict[int, int] = {}
    want = {d.id: d for d in inst.demands}
    for did, paths in projected.items():
        if did not in want:
            return Violation("request", f"solution names unknown demand {did}")
    for did, d in want.items():
        paths = projected.get(did, [])
        if len(paths) != d.request:
            return Violation("request",
                             f"demand {did} has {len(paths)} paths, requested {d.request}")
        for path in paths:
            if not path:
                return Violation("path", f"demand {did} contains an empty path")
            here = d.head
            for a in path:
                if a not in g.arc_tail:
                    return Violation("path", f"demand {did} uses unknown arc {a}")
                if g.arc_tail[a] != here:
                    return Violation("path",
                                     f"demand {did}: arc {a} does not continue at {here}")
                here = g.arc_head[a]
                usage[a] = usage.get(a, 0) + 1
            if here != d.tail:
                return Violation("path",
                                 f"demand {did}: path ends at {here}, not {d.tail}")
    for a, used in usage.items():
        if used > inst.capacities[a]:
            return Violation("capacity",
                             f"arc {a} used {used} times, capacity {inst.capacities[a]}")
    return None


# -- outer-boundary greedy ----------------------------------------------------


class _Unit:
    __slots__ = ("demand", "index", "dest", "arcs", "done")

    def __init__(self, demand: int, index: int, dest: int):
        self.demand = demand
        self.index = index
        self.dest = dest
        self.arcs: List[int] = []
        self.done = False


def _component_of(tails, heads, arcs, v) -> set:
    adj: Dict[int, list] = {}
    for a in arcs:
        adj.setdefault(tails[a], []).append(heads[a])
        adj.setdefault(heads[a], []).append(tails[a])
    seen = {v}
    stack = [v]
    while stack:
        w = stack.pop()
        for x in adj.get(w, ()):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen


def solve_outer_boundary(inst: Instance, outer_face_key=None) -> SolveResult:
    """Greedy peeling solver for instances rooted on one face.

    Requires every source of the (capacity-expanded) supply graph and every
    demand tail to lie on the designated face. Sources are peeled one at a
    time: the paths leaving a source are matched to its out-arcs so that
    the fan stays uncrossed, destinations being served in the order they
    appear along the boundary.
    """
    key = outer_face_key if outer_face_key is not None else inst.outer_face_key
    if key is None:
        raise PreconditionViolatedError("no outer face designated")
    imbalance = eulerian_imbalance(inst)
    if imbalance is not None:
        from .errors import NotEulerianError
        raise NotEulerianError(*imbalance)

    expanded, origin = _expand_with_origin(inst)
    g = expanded.graph

    # Translate the original face key through the expansion: the right side
    # of an arc keeps its id, the left side moves to the last copy.
    base_arc, side = key[0], key[1]
    copy_ids = sorted(a for a, o in origin.items() if o == base_arc)
    if not copy_ids:
        raise PreconditionViolatedError(f"outer face key arc {base_arc} has capacity zero")
    trans_pair = (copy_ids[-1], "left") if side == "left" else (base_arc, "right")
    faces = g.faces()
    outer_idx = None
    for i, f in enumerate(faces):
        if any((a, s.value) == trans_pair for a, s in f.boundary):
            outer_idx = i
            break
    if outer_idx is None:
        raise PreconditionViolatedError(f"face key {key} not found")
    outer_vertices = set()
    for a, _s in faces.faces[outer_idx].boundary:
        outer_vertices.add(g.arc_tail[a])
        outer_vertices.add(g.arc_head[a])

    tails = dict(g.arc_tail)
    heads = dict(g.arc_head)
    live_arcs = set(tails)
    live_verts = set(g.vertices)
    rotation = {v: list(g.rotation[v]) for v in g.vertices}

    indeg = {v: 0 for v in live_verts}
    for a in live_arcs:
        indeg[heads[a]] += 1
    for v in live_verts:
        if indeg[v] == 0 and v not in outer_vertices:
            raise PreconditionViolatedError(f"source {v} is not on the designated face")
    for d in inst.demands:
        if d.request > 0 and d.tail not in outer_vertices:
            raise PreconditionViolatedError(f"demand tail {d.tail} is not on the designated face")

    units: List[_Unit] = []
    pending: Dict[int, List[_Unit]] = {v: [] for v in live_verts}
    for d in sorted(inst.demands, key=lambda d: d.id):
        for i in range(d.request):
            u = _Unit(d.id, i, d.tail)
            units.append(u)
            pending[d.head].append(u)

    markers = {(a, s.value) for a, s in faces.faces[outer_idx].boundary}

    def infeasible() -> SolveResult:
        total = 1
        return SolveResult(False, None, 1, True, total)

    while live_verts:
        sources = sorted(v for v in live_verts if indeg[v] == 0)
        if not sources:
            raise AssertionError("no source in a nonempty acyclic residual")
        s = sources[0]
        out = [a for a in rotation[s] if tails[a] == s]
        waiting = pending[s]
        if len(waiting) != len(out):
            return infeasible()
        if out:
            comp = _component_of(tails, heads, live_arcs, s)
            comp_arcs = {a for a in live_arcs if tails[a] in comp}
            sub = EmbeddedDigraph(
                comp,
                {a: (tails[a], heads[a]) for a in comp_arcs},
                {v: [a for a in rotation[v] if a in comp_arcs] for v in comp},
            )
            sub_faces = sub.faces()
            marker_faces = set()
            for i, f in enumerate(sub_faces):
                pairs = {(a, sd.value) for a, sd in f.boundary}
                if pairs & markers:
                    marker_faces.add(i)
            if len(marker_faces) != 1:
                return infeasible()
            boundary = sub_faces.faces[next(iter(marker_faces))].boundary
            markers -= {(a, sd) for (a, sd) in markers if a not in live_arcs}
            markers |= {(a, sd.value) for a, sd in boundary}

            assignment = _fan_assignment(sub, boundary, s, waiting)
            if assignment is None:
                return infeasible()
            for unit, arc in assignment:
                unit.arcs.append(arc)
                y = heads[arc]
                if y == unit.dest:
                    unit.done = True
                else:
                    pending[y].append(unit)
        for a in list(rotation[s]):
            if a not in live_arcs:
                continue
            live_arcs.discard(a)
            other = heads[a] if tails[a] == s else tails[a]
            if other in rotation:
                rotation[other] = [b for b in rotation[other] if b != a]
            if tails[a] == s:
                indeg[heads[a]] -= 1
        markers = {(a, sd) for (a, sd) in markers if a in live_arcs}
        live_verts.discard(s)
        del rotation[s]

    if not all(u.done for u in units):
        return infeasible()
    by_demand: Dict[int, List[List[int]]] = {d.id: [] for d in inst.demands}
    projected: Dict[int, List[List[int]]] = {d.id: [] for d in inst.demands}
    for u in sorted(units, key=lambda u: (u.demand, u.index)):
        by_demand[u.demand].append(list(u.arcs))
        projected[u.demand].append([origin[a] for a in u.arcs])
    sol = Solution(paths=by_demand, projected=projected)
    violation = verify_solution(inst, projected)
    if violation is not None:
        raise RuntimeError(f"internal error: greedy produced an invalid solution: {violation}")
    return SolveResult(True, sol, 1, True, 1)


def _fan_assignment(sub: EmbeddedDigraph, boundary, s: int, waiting: List[_Unit]):
    """Match the units waiting at source s to its out-arcs without crossings.

    Walking the boundary of the outer face, destinations are ranked by
    first appearance after leaving s; out-arcs are ranked clockwise from
    the boundary corner. Serving nearer destinations with arcs nearer the
    corner keeps the fan planar.
    """
    rot = sub.rotation[s]
    n = len(boundary)
    darts = []
    for a, side in boundary:
        fwd = side.value == "left"
        tail = sub.arc_tail[a] if fwd else sub.arc_head[a]
        head = sub.arc_head[a] if fwd else sub.arc_tail[a]
        darts.append((a, tail, head))
    start = next((i for i, (_a, t, _h) in enumerate(darts) if t == s), None)
    if start is None:
        return None  # s does not touch the outer face
    # Arcs whose backward dart carries the boundary into s. The clockwise
    # sweep out of each corner ends when it swallows one of these.
    corner_in = {a for a, _t, h in darts if h == s}
    arc_order: List[int] = []
    rank: Dict[int, int] = {}
    counter = 0
    for step in range(n):
        a, tail, head = darts[(start + step) % n]
        if tail == s:
            q = sub.rotation_position(s, a)
            for off in range(len(rot)):
                cand = rot[(q - off) % len(rot)]
                arc_order.append(cand)
                if cand in corner_in:
                    break
        if head != s and head not in rank:
            counter += 1
            rank[head] = counter
    if sorted(arc_order) != sorted(rot):
        raise AssertionError("boundary corners do not partition the rotation at a source")
    for u in waiting:
        if u.dest not in rank:
            return None
    order = sorted(waiting, key=lambda u: (rank[u.dest], u.demand, u.index))
    return list(zip(order, arc_order))
