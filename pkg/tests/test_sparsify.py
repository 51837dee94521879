import random

import numpy as np

from hcma.generators import cycle_graph, planted_cubic_graph, random_hamiltonian_graph
from hcma.graph import Graph, shortest_path, verify_hc
from hcma.local_search import lk_improve
from hcma.reduction import tc_reduce
from hcma.sparsify import augment, initial_sparsification, maybe_reset
from hcma.tour import Tour, build_neighbor_lists, nearest_neighbor_tour


def _one_cells_are_edges(state, g):
    return all(g.has_edge(a, b) for a, b in state.working.ones())


def test_true_hc_pocket_keeps_only_tour_edges():
    g, cyc = planted_cubic_graph(30, random.Random(1))
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    s = initial_sparsification(g, base, Tour(cyc, base), nl, random.Random(0))
    tour_edges = {(min(a, b), max(a, b)) for a, b in zip(cyc, cyc[1:] + cyc[:1])}
    assert set(s.working.ones()) == tour_edges
    assert s.ones_count == 30 and s.baseline_ones == g.m
    off = ~np.eye(30, dtype=bool)
    suppressed = off & (base.cells == 1) & (s.working.cells != 1)
    assert np.all(s.working.cells[suppressed] == 30)


def test_conflicting_edge_replaced_by_shortest_path():
    # path 0-1-2-3-4-5 plus chord 0-2; the tour 0..5 closes with the non-edge 5-0
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2), (1, 4)])
    base = tc_reduce(g)
    t = Tour([0, 1, 2, 3, 4, 5], base)
    nl = build_neighbor_lists(base, 5)
    s = initial_sparsification(g, base, t, nl, random.Random(0), lk_budget=0)
    order = s.last_tour.order
    tour_pairs = list(zip(order, order[1:] + order[:1]))
    real = {(min(a, b), max(a, b)) for a, b in tour_pairs if g.has_edge(a, b)}
    expected = set(real)
    for a, b in tour_pairs:
        if not g.has_edge(a, b):
            p = shortest_path(g, a, b)
            expected |= {(min(u, v), max(u, v)) for u, v in zip(p, p[1:])}
            assert s.working[a, b] == 6
    assert set(s.working.ones()) == expected


def test_every_one_cell_is_an_edge_fuzz():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(5, 40)
        g, _ = random_hamiltonian_graph(n, rng.randint(0, n), rng)
        base = tc_reduce(g)
        nl = build_neighbor_lists(base, 5)
        pocket = nearest_neighbor_tour(base, rng)
        s = initial_sparsification(g, base, pocket, nl, rng)
        assert _one_cells_are_edges(s, g) and s.ones_count == s.working.count_ones()
        for _ in range(5):
            nl = build_neighbor_lists(s.working, 5)
            before = s.ones_count
            augment(s, g, pocket, nl)
            assert s.ones_count >= before
            assert s.ones_count == s.working.count_ones() <= s.baseline_ones
            assert _one_cells_are_edges(s, g)
            t = s.last_tour
            if t.cost == n:
                assert verify_hc(g, t.order)
            s, _ = maybe_reset(s, g, base, pocket, nl, rng)


def test_augment_on_solved_tour_is_noop():
    g, cyc = planted_cubic_graph(20, random.Random(2))
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    s = initial_sparsification(g, base, Tour(cyc, base), nl, random.Random(0))
    snapshot = s.working.copy()
    augment(s, g, Tour(cyc, s.working), build_neighbor_lists(s.working, 5))
    assert s.working == snapshot and s.last_tour.cost == 20


def test_augment_restores_a_suppressed_hc_edge():
    # C20 plus chords; the planted cycle is the only Hamiltonian cycle here
    n = 20
    g = Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)] + [(0, 10), (5, 15)])
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    # a leader tour that skips the cycle edge 0-19 and crosses the chord instead
    order = list(range(0, 11)) + list(range(19, 10, -1))
    s = initial_sparsification(g, base, Tour(order, base), nl, random.Random(0), lk_budget=0)
    rng = random.Random(1)
    for _ in range(20):
        if s.working[0, 19] == 1 and s.working[10, 11] == 1:
            break
        nl = build_neighbor_lists(s.working, 5)
        pocket = Tour(s.last_tour.order, s.working)
        augment(s, g, pocket, nl)
        s, _ = maybe_reset(s, g, base, pocket, nl, rng)
    assert all(s.working[i, (i + 1) % n] == 1 for i in range(n))
    t = Tour(list(range(n)), s.working)
    assert t.cost == n


def test_reset_noop_below_baseline():
    g, cyc = planted_cubic_graph(20, random.Random(3))
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    s = initial_sparsification(g, base, Tour(cyc, base), nl, random.Random(0))
    s2, fired = maybe_reset(s, g, base, Tour(cyc, base), nl, random.Random(0))
    assert not fired and s2 is s


def test_reset_fires_at_baseline_and_drops_ones():
    rng = random.Random(4)
    g, _ = random_hamiltonian_graph(12, 8, rng)
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    pocket = nearest_neighbor_tour(base, rng)
    s = initial_sparsification(g, base, pocket, nl, rng)
    for _ in range(200):
        if s.ones_count == s.baseline_ones:
            break
        # a deliberately bad leader keeps producing gaps
        bad = list(range(12))
        rng.shuffle(bad)
        augment(s, g, Tour(bad, s.working), build_neighbor_lists(s.working, 5), lk_budget=0)
    assert s.ones_count == s.baseline_ones
    before = s.ones_count
    s2, fired = maybe_reset(s, g, base, pocket, nl, rng)
    assert fired and s2.ones_count < before
    assert _one_cells_are_edges(s2, g)
    assert s2.resets == 1


def test_leader_tour_is_improved_before_sparsifying():
    g, _ = planted_cubic_graph(40, random.Random(6))
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    rough = Tour(list(range(40)), base)
    s = initial_sparsification(g, base, rough, nl, random.Random(0))
    ref = rough.copy()
    ref.dlb[:] = False
    lk_improve(ref, base, nl)
    assert s.last_tour.cost == ref.cost <= rough.cost


def test_cycle_graph_state():
    g = cycle_graph(10)
    base = tc_reduce(g)
    nl = build_neighbor_lists(base, 5)
    s = initial_sparsification(g, base, Tour([0, 2, 4, 6, 8, 1, 3, 5, 7, 9], base), nl, random.Random(0))
    assert _one_cells_are_edges(s, g) and s.suppressed_value == 10
