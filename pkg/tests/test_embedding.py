import itertools

import pytest
from hypothesis import given, strategies as st

from planarmcf import (
    Behaviour,
    CyclicOrder,
    EmbeddedDigraph,
    between,
    classify_behaviour,
    strictly_between,
    trace_faces,
    validate_embedding,
)
from planarmcf.embedding import behaviour_about_ends

from conftest import bowtie_gadget, corridor_gadget, star


def four_cycle():
    arcs = {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 0)}
    rotation = {0: [0, 3], 1: [1, 0], 2: [2, 1], 3: [2, 3]}
    return EmbeddedDigraph(range(4), arcs, rotation)


class TestCyclicOrder:
    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            CyclicOrder((1, 2, 1))

    def test_between_examples(self):
        order = CyclicOrder((1, 2, 3, 4))
        assert between(order, 1, 2, 3)
        assert between(order, 3, 4, 1)  # wraps
        assert not between(order, 1, 4, 3)
        assert between(order, 3, 4, 1)

    def test_between_needs_distinct_endpoints(self):
        order = CyclicOrder((1, 2, 3))
        with pytest.raises(ValueError):
            between(order, 1, 2, 1)

    def test_unknown_element(self):
        order = CyclicOrder((1, 2, 3))
        with pytest.raises(ValueError):
            between(order, 1, 9, 3)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_strictly_between_antisymmetry_exhaustive(self, n):
        order = CyclicOrder(tuple(range(n)))
        for a, b, c in itertools.permutations(range(n), 3):
            if strictly_between(order, a, b, c):
                assert not between(order, c, b, a)

    @given(st.permutations(list(range(7))), st.data())
    def test_interval_complement(self, elems, data):
        order = CyclicOrder(tuple(elems))
        a = data.draw(st.sampled_from(elems))
        c = data.draw(st.sampled_from([e for e in elems if e != a]))
        inside = {b for b in elems if between(order, a, b, c)}
        outside = {b for b in elems if between(order, c, b, a)}
        assert inside | outside == set(elems)
        assert inside & outside == {a, c}


class TestTraceFaces:
    def test_single_arc_one_face(self):
        g = EmbeddedDigraph([0, 1], {0: (0, 1)}, {0: [0], 1: [0]})
        assert len(trace_faces(g)) == 1

    def test_four_cycle_two_faces(self):
        assert len(trace_faces(four_cycle())) == 2

    def test_half_integral_satisfies_euler(self, half_integral):
        g = half_integral.graph
        faces = trace_faces(g)
        assert len(faces) == 2 - len(g.vertices) + len(g.arc_tail)

    def test_boundary_lengths_sum_small_exhaustive(self):
        # Every rotation system of every connected multidigraph with up to
        # three vertices and four arcs: dart count is conserved regardless
        # of whether the system is spherical.
        pairs = [(t, h) for t in range(3) for h in range(3) if t != h]
        for m in range(1, 5):
            for combo in itertools.combinations_with_replacement(pairs, m):
                verts = sorted({v for th in combo for v in th})
                arcs = {i: th for i, th in enumerate(combo)}
                adj = {v: set() for v in verts}
                for t, h in combo:
                    adj[t].add(h)
                    adj[h].add(t)
                seen, stack = {verts[0]}, [verts[0]]
                while stack:
                    for w in adj[stack.pop()]:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
                if len(seen) != len(verts):
                    continue
                incident = {v: [a for a, (t, h) in arcs.items() if v in (t, h)]
                            for v in verts}
                for rots in itertools.product(
                        *[itertools.permutations(incident[v]) for v in verts]):
                    g = EmbeddedDigraph(verts, arcs, dict(zip(verts, rots)))
                    faces = trace_faces(g)
                    assert sum(len(f) for f in faces) == 2 * len(arcs)

    def test_each_side_on_exactly_one_face(self):
        g, _plain, _dashed = corridor_gadget()
        faces = trace_faces(g)
        sides = [pair for f in faces for pair in f.boundary]
        assert len(sides) == len(set(sides)) == 2 * len(g.arc_tail)


class TestValidateEmbedding:
    def test_valid_four_cycle(self):
        assert validate_embedding(four_cycle()) is None

    def test_rotation_incomplete(self):
        g = EmbeddedDigraph([0, 1, 2],
                            {0: (0, 1), 1: (1, 2)},
                            {0: [0], 1: [0], 2: [1]})
        violation = validate_embedding(g)
        assert violation is not None and violation.kind == "rotation-incomplete"

    def test_loop_rejected(self):
        g = EmbeddedDigraph([0], {0: (0, 0)}, {0: [0]})
        violation = validate_embedding(g)
        assert violation is not None and violation.kind == "loop"

    def test_disconnected_rejected(self):
        g = EmbeddedDigraph([0, 1, 2, 3],
                            {0: (0, 1), 1: (2, 3)},
                            {0: [0], 1: [0], 2: [1], 3: [1]})
        violation = validate_embedding(g)
        assert violation is not None and violation.kind == "disconnected"

    def test_k5_fails_euler(self):
        # No rotation system of K5 is spherical, so any rotation works as a
        # genus witness.
        arcs = {}
        aid = 0
        for i in range(5):
            for j in range(i + 1, 5):
                arcs[aid] = (i, j)
                aid += 1
        rotation = {v: [a for a, (t, h) in arcs.items() if v in (t, h)]
                    for v in range(5)}
        g = EmbeddedDigraph(range(5), arcs, rotation)
        violation = validate_embedding(g)
        assert violation is not None and violation.kind == "euler-formula"

    def test_acceptance_matches_euler_on_small_systems(self):
        # validate_embedding accepts exactly the spherical rotation systems.
        pairs = [(0, 1), (1, 2), (2, 0), (0, 2)]
        for combo in itertools.combinations_with_replacement(pairs, 3):
            verts = sorted({v for th in combo for v in th})
            if len(verts) < 3:
                continue
            arcs = {i: th for i, th in enumerate(combo)}
            incident = {v: [a for a, (t, h) in arcs.items() if v in (t, h)]
                        for v in verts}
            for rots in itertools.product(
                    *[itertools.permutations(incident[v]) for v in verts]):
                g = EmbeddedDigraph(verts, arcs, dict(zip(verts, rots)))
                spherical = len(trace_faces(g)) == 2 - len(verts) + len(arcs)
                assert (validate_embedding(g) is None) == spherical


class TestClassifyBehaviour:
    def test_cross(self):
        g = star(["in", "in", "out", "out"])  # q_in, p_in, q_out, p_out
        assert classify_behaviour(g, 0, 1, 3, 0, 2) is Behaviour.CROSS

    def test_right(self):
        g = star(["in", "in", "out", "out"])  # q_in, p_in, p_out, q_out
        assert classify_behaviour(g, 0, 1, 2, 0, 3) is Behaviour.RIGHT

    def test_left(self):
        g = star(["in", "out", "in", "out"])  # q_in, p_out, p_in, q_out
        assert classify_behaviour(g, 0, 2, 1, 0, 3) is Behaviour.LEFT

    def test_distinct_arcs_required(self):
        g = star(["in", "in", "out", "out"])
        with pytest.raises(ValueError):
            classify_behaviour(g, 0, 1, 2, 1, 3)

    def test_direction_validated(self):
        g = star(["in", "in", "out", "out"])
        with pytest.raises(ValueError):
            classify_behaviour(g, 0, 2, 1, 0, 3)  # p_in does not enter

    def test_incidence_validated(self):
        g = star(["in", "in", "out", "out"])
        with pytest.raises(ValueError):
            behaviour_about_ends(g, 0, 1, 2, 0, 99)

    @given(st.data())
    def test_reversal_equivalences(self, data):
        # Behaviour is invariant under reversing the observed path, and
        # reversing the acting path swaps left and right.
        n = data.draw(st.integers(min_value=4, max_value=10))
        slots = data.draw(st.permutations(list(range(n))))
        p_in, p_out, q_in, q_out = slots[0], slots[1], slots[2], slots[3]
        spec = ["out"] * n
        for pos in (p_in, q_in):
            spec[pos] = "in"
        g = star(spec)
        base = classify_behaviour(g, 0, p_in, p_out, q_in, q_out)
        assert behaviour_about_ends(g, 0, p_in, p_out, q_out, q_in) is base
        spec_flip = list(spec)
        spec_flip[p_in], spec_flip[p_out] = "out", "in"
        g_flip = star(spec_flip)
        flipped = classify_behaviour(g_flip, 0, p_out, p_in, q_in, q_out)
        if base is Behaviour.CROSS:
            assert flipped is Behaviour.CROSS
        else:
            assert {base, flipped} == {Behaviour.LEFT, Behaviour.RIGHT}

    def test_disjoint_lenses_keep_left(self):
        # Two cycles with disjoint interiors sharing one vertex: each,
        # positively oriented around its own interior, goes to the left of
        # the other. The west lens is positively enclosed by its through
        # path as built; the east lens needs it reversed, which mirrors
        # left and right.
        g = bowtie_gadget()
        assert classify_behaviour(g, 0, 3, 4, 0, 1) is Behaviour.LEFT
        assert classify_behaviour(g, 0, 0, 1, 3, 4) is Behaviour.RIGHT
