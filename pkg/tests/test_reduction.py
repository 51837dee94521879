import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hcma.generators import (complete_graph, cycle_graph, disjoint_union, path_graph,
                             random_connected_graph, random_hamiltonian_graph)
from hcma.graph import Graph, parse_hcp, verify_hc
from hcma.reduction import (DisconnectedGraphError, DistanceMatrix, format_tsplib_matrix,
                            sr_reduce, tc_reduce, tour_cost)

from oracles import floyd_warshall, tour_len


def test_sr_examples():
    m = sr_reduce(complete_graph(3))
    assert all(m[a, b] == 1 for a in range(3) for b in range(3) if a != b)
    p = sr_reduce(path_graph(3))
    assert p[0, 2] == 2 and p[0, 1] == 1 and p[1, 2] == 1


def test_sr_small_sample_graph():
    # 5 vertices: a 4-cycle 0-1-2-3 with a pendant path 3-4 and chord 1-3
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (3, 4)])
    m = sr_reduce(g)
    for a in range(5):
        for b in range(5):
            if a != b:
                assert m[a, b] == (1 if g.has_edge(a, b) else 2)


def test_tc_examples():
    m = tc_reduce(path_graph(4))
    assert m[0, 3] == 3 and m[0, 2] == 2
    c4 = tc_reduce(cycle_graph(4))
    assert c4[0, 2] == 2 and c4[1, 3] == 2 and c4[0, 1] == 1


def test_diagonal_sentinel_and_symmetry():
    g = random_connected_graph(15, 0.2, random.Random(2))
    for m in (sr_reduce(g), tc_reduce(g)):
        assert np.all(np.diag(m.cells) == g.n + 1)
        assert np.array_equal(m.cells, m.cells.T)


def test_tc_disconnected_raises():
    with pytest.raises(DisconnectedGraphError):
        tc_reduce(disjoint_union(cycle_graph(3), cycle_graph(3)))


def test_tc_matches_floyd_warshall():
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(2, 50)
        g = random_connected_graph(n, rng.uniform(0, 0.2), rng)
        fw = floyd_warshall(n, g.edges)
        np.fill_diagonal(fw, n + 1)
        assert np.array_equal(tc_reduce(g).cells, fw)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 25), st.floats(0, 0.5), st.integers(0, 10 ** 6))
def test_tc_properties(n, p, seed):
    g = random_connected_graph(n, p, random.Random(seed))
    tc, sr = tc_reduce(g), sr_reduce(g)
    assert np.array_equal(tc.cells == 1, sr.cells == 1)
    assert tc.count_ones() == g.m
    d = tc.cells.astype(np.int64)
    np.fill_diagonal(d, 0)
    # triangle inequality, all triples at once
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :])
    off = ~np.eye(n, dtype=bool)
    non_edge = off & (tc.cells != 1)
    assert np.all(tc.cells[non_edge] >= 2) and np.all(tc.cells[non_edge] <= n - 1)


def test_compact_mode_matches():
    g = random_connected_graph(30, 0.1, random.Random(9))
    a, b = tc_reduce(g), tc_reduce(g, compact=True)
    assert b.cells.dtype == np.uint16
    assert np.array_equal(a.cells, b.cells.astype(np.int32))


def test_tour_cost_examples():
    assert tour_cost(tc_reduce(cycle_graph(5)), [0, 1, 2, 3, 4]) == 5
    assert tour_cost(tc_reduce(path_graph(4)), [0, 1, 2, 3]) == 6
    m = tc_reduce(random_connected_graph(12, 0.3, random.Random(1)))
    order = list(range(12))
    random.Random(2).shuffle(order)
    assert tour_cost(m, order) == tour_cost(m, order[::-1]) == tour_len(m.cells, order)


def test_cost_n_iff_hamiltonian_cycle():
    rng = random.Random(8)
    for _ in range(200):
        g, cyc = random_hamiltonian_graph(9, rng.randint(0, 10), rng)
        order = list(range(9))
        rng.shuffle(order)
        for m in (tc_reduce(g), sr_reduce(g)):
            assert (tour_cost(m, order) == 9) == verify_hc(g, order)
            assert tour_cost(m, cyc) == 9


def test_set_is_symmetric_and_copy_independent():
    m = tc_reduce(cycle_graph(6))
    c = m.copy()
    c.set(0, 3, 7)
    assert c[3, 0] == 7 and m[0, 3] == 3
    assert c != m and m == tc_reduce(cycle_graph(6))
    assert m.ones() == sorted(cycle_graph(6).edges)


def test_tsplib_matrix_dump():
    text = format_tsplib_matrix(sr_reduce(cycle_graph(4)), name="c4")
    lines = text.splitlines()
    assert "EDGE_WEIGHT_FORMAT : FULL_MATRIX" in lines
    start = lines.index("EDGE_WEIGHT_SECTION") + 1
    rows = [list(map(int, l.split())) for l in lines[start:start + 4]]
    assert rows[0] == [5, 1, 2, 1]
    assert lines[start + 4] == "EOF"


def test_distance_matrix_rejects_non_square():
    with pytest.raises(ValueError):
        DistanceMatrix(np.zeros((2, 3), dtype=np.int32))


def test_parsed_graph_reduces():
    text = "\n".join(["DIMENSION: 4", "EDGE_DATA_FORMAT: EDGE_LIST", "EDGE_DATA_SECTION",
                      "1 2", "2 3", "3 4", "-1"])
    assert tc_reduce(parse_hcp(text))[0, 3] == 3
