import pytest

from planarmcf import (
    Demand,
    EmbeddedDigraph,
    Instance,
    NotAcyclicError,
    NotEulerianError,
    DisconnectedError,
    add_terminals,
    brute_force,
    check_eulerian,
    expand_capacities,
    gen_grid,
    normalize,
    scale_instance,
    topological_order,
    validate_embedding,
)

from conftest import path_instance


def single_arc_instance(cap=1, with_demand=False):
    g = EmbeddedDigraph([0, 1], {0: (0, 1)}, {0: [0], 1: [0]})
    demands = [Demand(id=0, tail=1, head=0, request=1)] if with_demand else []
    return Instance(graph=g, capacities={0: cap}, demands=demands)


class TestCheckEulerian:
    def test_half_integral_is_eulerian(self, half_integral):
        assert check_eulerian(half_integral)

    def test_single_arc_without_demand_is_not(self):
        assert not check_eulerian(single_arc_instance())

    def test_arc_balanced_by_demand(self):
        assert check_eulerian(single_arc_instance(with_demand=True))


class TestTopologicalOrder:
    def test_path(self):
        inst = path_instance(2)
        assert topological_order(inst.graph).order == (0, 1, 2)

    def test_two_cycle_detected(self):
        g = EmbeddedDigraph([0, 1], {0: (0, 1), 1: (1, 0)},
                            {0: [0, 1], 1: [0, 1]})
        with pytest.raises(NotAcyclicError) as exc:
            topological_order(g)
        assert set(exc.value.cycle) == {0, 1}

    def test_half_integral_order_respects_arcs(self, half_integral):
        g = half_integral.graph
        order = topological_order(g)
        for a in g.arcs:
            assert order.before(g.arc_tail[a], g.arc_head[a])

    def test_ties_by_vertex_id(self):
        # 2 and 1 both ready after 0: 1 must come first.
        g = EmbeddedDigraph([0, 1, 2], {0: (0, 2), 1: (0, 1)},
                            {0: [0, 1], 1: [1], 2: [0]})
        assert topological_order(g).order == (0, 1, 2)


class TestExpandCapacities:
    def test_capacity_three_block(self):
        inst = single_arc_instance(cap=3)
        out = expand_capacities(inst)
        g = out.graph
        assert len(g.arc_tail) == 3
        assert all(c == 1 for c in out.capacities.values())
        assert g.rotation[0] == tuple(g.arcs)
        assert g.rotation[1] == tuple(reversed(g.arcs))  # head side reversed
        assert validate_embedding(g) is None

    def test_unit_capacities_identity(self, half_integral):
        out = expand_capacities(half_integral)
        assert out.graph.rotation == half_integral.graph.rotation
        assert out.graph.arc_tail == half_integral.graph.arc_tail
        assert out.capacities == half_integral.capacities

    def test_zero_capacity_arcs_deleted(self):
        g = EmbeddedDigraph([0, 1], {0: (0, 1), 1: (0, 1)},
                            {0: [0, 1], 1: [1, 0]})
        inst = Instance(graph=g, capacities={0: 1, 1: 0}, demands=[])
        out = expand_capacities(inst)
        assert set(out.graph.arc_tail) == {0}

    @pytest.mark.parametrize("seed", range(100))
    def test_eulerian_preserved(self, seed):
        inst = gen_grid(4, 3, 2, 2, seed=seed)
        assert check_eulerian(inst)
        assert check_eulerian(expand_capacities(inst))

    @pytest.mark.parametrize("seed", range(25))
    def test_feasibility_preserved(self, seed):
        inst = gen_grid(3, 3, 2, 2, seed=seed)
        before = brute_force(inst).feasible
        after = brute_force(expand_capacities(inst)).feasible
        assert before == after


class TestAddTerminals:
    def test_terminal_degrees(self):
        inst = gen_grid(3, 3, 2, 2, seed=1)
        flat = add_terminals(expand_capacities(inst))
        g = flat.graph
        assert flat.normalized
        for d in flat.demands:
            s, t = d.head, d.tail
            assert len(g.out_arcs(s)) == d.request and not g.in_arcs(s)
            assert len(g.in_arcs(t)) == d.request and not g.out_arcs(t)
        # the demand set is a matching on fresh terminals
        endpoints = [v for d in flat.demands for v in (d.tail, d.head)]
        assert len(endpoints) == len(set(endpoints))
        assert validate_embedding(g) is None
        topological_order(g)
        assert check_eulerian(flat)

    def test_already_split_is_resplit(self):
        inst = path_instance(2)
        once = add_terminals(expand_capacities(inst))
        twice = add_terminals(once)
        assert len(twice.graph.vertices) == len(once.graph.vertices) + 2
        assert brute_force(once).feasible == brute_force(twice).feasible

    @pytest.mark.parametrize("seed", range(25))
    def test_feasibility_invariant_under_normalization(self, seed):
        inst = gen_grid(3, 3, 2, 2, seed=seed)
        raw = brute_force(inst).feasible
        norm = normalize(inst)
        assert brute_force(norm.instance).feasible == raw


class TestNormalize:
    def test_half_integral(self, half_integral):
        norm = normalize(half_integral)
        assert norm.instance.normalized
        assert check_eulerian(norm.instance)
        g = norm.graph
        terminals = {v for pair in norm.terminals.values() for v in pair}
        for v in g.vertices:
            if v in terminals:
                continue
            assert len(g.in_arcs(v)) == len(g.out_arcs(v))

    def test_not_acyclic(self):
        g = EmbeddedDigraph([0, 1], {0: (0, 1), 1: (1, 0)},
                            {0: [0, 1], 1: [0, 1]})
        inst = Instance(graph=g, capacities={0: 1, 1: 1}, demands=[])
        with pytest.raises(NotAcyclicError):
            normalize(inst)

    def test_not_eulerian(self):
        with pytest.raises(NotEulerianError):
            normalize(single_arc_instance())

    def test_disconnected(self):
        g = EmbeddedDigraph([0, 1, 2, 3],
                            {0: (0, 1), 1: (2, 3)},
                            {0: [0], 1: [0], 2: [1], 3: [1]})
        inst = Instance(graph=g, capacities={0: 1, 1: 1},
                        demands=[Demand(id=0, tail=1, head=0, request=1),
                                 Demand(id=1, tail=3, head=2, request=1)])
        with pytest.raises(DisconnectedError):
            normalize(inst)

    def test_zero_request_demand_dropped(self):
        inst = path_instance(2)
        inst.demands.append(Demand(id=1, tail=2, head=0, request=0))
        norm = normalize(inst)
        assert [d.id for d in norm.instance.demands] == [0]

    def test_arc_origin_projection(self, half_integral):
        norm = normalize(half_integral)
        origins = {o for o in norm.arc_origin.values() if o is not None}
        assert origins == set(half_integral.graph.arc_tail)
        terminal_arcs = [a for a, o in norm.arc_origin.items() if o is None]
        assert len(terminal_arcs) == 2 * sum(d.request for d in half_integral.demands)


class TestScale:
    def test_doubling(self, half_integral, half_integral_doubled):
        doubled = scale_instance(half_integral, 2)
        assert doubled.capacities == half_integral_doubled.capacities
        assert [d.request for d in doubled.demands] == \
            [d.request for d in half_integral_doubled.demands]
