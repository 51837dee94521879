import random

from hypothesis import given, settings, strategies as st

from hcma.generators import planted_cubic_graph, random_connected_graph
from hcma.population import (POP_SIZE, Agent, Population, children, initialize_pop, insertion_mutation,
                             is_diverse, mutate_pop, parent, recombine_pop, restart_pop, sax_crossover,
                             stitch, structure_pop)
from hcma.reduction import DistanceMatrix, tc_reduce
from hcma.tour import Tour, build_neighbor_lists

from oracles import is_permutation, random_symmetric_matrix


def _setup(n=40, seed=0):
    g, _ = planted_cubic_graph(n, random.Random(seed))
    m = tc_reduce(g)
    return g, m, build_neighbor_lists(m, 5)


def _fake_pop(costs, current_costs=None):
    agents = []
    for i, c in enumerate(costs):
        p = Tour([0, 1, 2], cost=c)
        cur = Tour([0, 1, 2], cost=(current_costs[i] if current_costs else 10 ** 6))
        agents.append(Agent(p, cur))
    return Population(agents)


def test_tree_shape():
    assert children(0) == [1, 2, 3] and children(3) == [10, 11, 12]
    assert all(children(i) == [] for i in range(4, 13))
    assert [parent(i) for i in (1, 3, 4, 12)] == [0, 0, 1, 3]


def test_structure_examples():
    p = structure_pop(_fake_pop(list(range(13, 0, -1))))
    assert p.pocket_costs()[0] == 1 and p.is_ordered()
    ordered = _fake_pop(list(range(1, 14)))
    before = ordered.pocket_costs()
    assert structure_pop(ordered).pocket_costs() == before


def test_structure_fuzz():
    rng = random.Random(0)
    for _ in range(1000):
        pockets = [rng.randint(1, 50) for _ in range(13)]
        currents = [rng.randint(1, 50) for _ in range(13)]
        everything = sorted(pockets + currents)
        p = structure_pop(_fake_pop(pockets, currents))
        assert p.is_ordered()
        assert all(a.pocket.cost <= a.current.cost for a in p.agents)
        assert sorted(p.pocket_costs() + [a.current.cost for a in p.agents]) == everything
        assert p.pocket_costs()[0] == everything[0]


def test_initialize_pop():
    _, m, nl = _setup(60, 1)
    p = initialize_pop(m, nl, random.Random(3))
    assert len(p.agents) == POP_SIZE
    assert p.is_ordered()
    all_costs = [t.cost for t in p.tours()]
    assert p.agents[0].pocket.cost == min(all_costs)
    q = initialize_pop(m, nl, random.Random(3))
    assert [t.order for t in p.tours()] == [t.order for t in q.tours()]


def test_sax_identical_parents():
    rng = random.Random(2)
    order = list(range(20))
    rng.shuffle(order)
    t = Tour(order)
    arcs = set(zip(order, order[1:] + order[:1]))
    for _ in range(20):
        paths = sax_crossover(t, t, rng)
        assert sorted(c for p in paths for c in p) == list(range(20))
        for p in paths:
            assert all((a, b) in arcs for a, b in zip(p, p[1:]))


def test_sax_disjoint_parents_n4():
    t1, t2 = Tour([0, 1, 2, 3]), Tour([0, 2, 1, 3])
    arcs = {(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 1), (1, 3), (3, 0)}
    rng = random.Random(0)
    for _ in range(50):
        paths = sax_crossover(t1, t2, rng)
        assert sorted(c for p in paths for c in p) == [0, 1, 2, 3]
        for p in paths:
            assert all((a, b) in arcs for a, b in zip(p, p[1:]))


@settings(max_examples=500, deadline=None)
@given(st.permutations(range(6)), st.permutations(range(6)), st.integers(0, 10 ** 6))
def test_sax_partitions_n6(o1, o2, seed):
    t1, t2 = Tour(o1), Tour(o2)
    arcs = set(zip(o1, o1[1:] + o1[:1])) | set(zip(o2, o2[1:] + o2[:1]))
    paths = sax_crossover(t1, t2, random.Random(seed))
    flat = [c for p in paths for c in p]
    assert sorted(flat) == list(range(6)) and len(flat) == 6
    for p in paths:
        assert all((a, b) in arcs for a, b in zip(p, p[1:]))


def test_stitch_keeps_paths_and_prefers_near_heads():
    D = random_symmetric_matrix(8, random.Random(1), 5, 9)
    D[1, 2] = D[2, 1] = 1
    m = DistanceMatrix(D)
    order = stitch([[0, 1], [5, 6], [2, 3, 4], [7]], m)
    assert order[:5] == [0, 1, 2, 3, 4]
    assert is_permutation(order, 8)


def test_recombine_pop():
    _, m, nl = _setup(50, 2)
    p = initialize_pop(m, nl, random.Random(1))
    pockets = [a.pocket for a in p.agents]
    recombine_pop(p, m, nl, random.Random(5))
    assert [a.pocket for a in p.agents] == pockets
    for a in p.agents:
        assert a.current.is_valid() and a.current.cost == a.current.recompute(m)


def test_recombine_identical_parents_not_worse():
    from hcma.population import recombine
    _, m, nl = _setup(50, 3)
    rng = random.Random(0)
    p = initialize_pop(m, nl, rng)
    t = p.agents[5].pocket
    child = recombine(t, t, m, nl, rng)
    assert child.cost <= t.cost


def test_mutation_rate_zero_is_identity():
    _, m, nl = _setup(40, 4)
    p = initialize_pop(m, nl, random.Random(1))
    before = [a.current.order for a in p.agents]
    mutate_pop(p, m, nl, random.Random(2), rate=0.0)
    assert [a.current.order for a in p.agents] == before


def test_mutation_rate_one_never_worsens():
    rng = random.Random(9)
    m = DistanceMatrix(random_symmetric_matrix(40, rng))
    nl = build_neighbor_lists(m, 5)
    p = initialize_pop(m, nl, rng)
    before = [a.current.cost for a in p.agents]
    mutate_pop(p, m, nl, random.Random(3), rate=1.0)
    assert all(a.current.cost <= b for a, b in zip(p.agents, before))


def test_mutation_draws_binomial_bound():
    # the acceptance draw is rng.random() < rate, exactly as in mutate_pop
    rng = random.Random(2024)
    hits = sum(rng.random() < 0.05 for _ in range(10000))
    # mean 500, sd ~21.8; [400, 600] is a > 4.5 sigma window
    assert 400 <= hits <= 600


def test_insertion_mutation_clears_bits():
    m = DistanceMatrix(random_symmetric_matrix(12, random.Random(0)))
    t = Tour(list(range(12)), m)
    t.dlb[:] = True
    insertion_mutation(t, m, random.Random(4))
    assert t.is_valid() and t.cost == t.recompute(m)
    assert 3 <= (~t.dlb).sum() <= 5


def test_diversity_predicate():
    assert is_diverse(_fake_pop(list(range(1, 14))), 0, 30)
    assert not is_diverse(_fake_pop([7] * 13), 0, 30)
    assert not is_diverse(_fake_pop(list(range(1, 14))), 30, 30)


def test_restart_keeps_best_and_is_reproducible():
    g = random_connected_graph(60, 0.06, random.Random(1))
    m = tc_reduce(g)
    nl = build_neighbor_lists(m, 5)
    p = initialize_pop(m, nl, random.Random(0))
    best = min(p.agents, key=lambda a: a.pocket.cost).pocket
    q = initialize_pop(m, nl, random.Random(0))
    restart_pop(p, m, nl, random.Random(8))
    restart_pop(q, m, nl, random.Random(8))
    assert any(a.pocket is best for a in p.agents)
    assert min(p.pocket_costs()) == best.cost
    assert [t.order for t in p.tours()] == [t.order for t in q.tours()]
    structure_pop(p)
    assert p.is_ordered()
    assert all(t.is_valid() for t in p.tours())
