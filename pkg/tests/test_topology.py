import json
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foresight.topology import (
    CouplingGraph,
    DistanceMatrix,
    TopologyError,
    builtin_topology,
    compute_distance_matrix,
    grid,
    load_topology,
    resolve_topology,
    ring,
    routing_capacity,
    save_topology,
)
from conftest import LONG_DETOUR
from oracles import bfs_hops, bounded_paths


def test_routing_capacity_examples():
    assert routing_capacity(ring(8)) == 1.0
    assert routing_capacity(grid(3, 3)) == pytest.approx(12 / 9)
    k4 = CouplingGraph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert routing_capacity(k4) == 1.5


def test_grid_edge_count_formula():
    for m, n in [(2, 2), (3, 5), (25, 20)]:
        g = grid(m, n)
        assert g.num_physical == m * n
        assert len(g.edges) == m * (n - 1) + n * (m - 1)
    assert len(grid(25, 20).edges) == 25 * 19 + 20 * 24 == 955


def test_grid_capacity_approaches_two_monotonically():
    values = [routing_capacity(grid(k, k)) for k in range(3, 11)]
    assert all(a < b < 2 for a, b in zip(values, values[1:]))
    assert 2 - values[-1] < 2 - values[0]


def test_builtin_devices():
    assert builtin_topology("tokyo").num_physical == 20
    assert builtin_topology("sycamore53").num_physical == 53
    assert builtin_topology("aspen32").num_physical == 32
    r = builtin_topology("ring(4)")
    assert len(r.edges) == 4 and routing_capacity(r) == 1.0
    assert builtin_topology("grid(3,4)").num_physical == 12
    assert builtin_topology("line(5)").num_physical == 5


@pytest.mark.parametrize("name", ["nope", "grid(1,5)", "ring(2)", "grid(4)", "line(1)"])
def test_builtin_errors(name):
    with pytest.raises(TopologyError):
        builtin_topology(name)


def test_graph_invariants_enforced():
    with pytest.raises(TopologyError, match="self-loop"):
        CouplingGraph(2, [(0, 0)])
    with pytest.raises(TopologyError, match="duplicate"):
        CouplingGraph(2, [(0, 1), (1, 0)])
    with pytest.raises(TopologyError, match="disconnected"):
        CouplingGraph(4, [(0, 1), (2, 3)])
    with pytest.raises(TopologyError):
        CouplingGraph(2, [(0, 1)], cnot_error={(0, 1): 1.5})
    with pytest.raises(TopologyError):
        CouplingGraph(2, [(0, 1)], coherence_time_us=(1.0, 0.0))


def test_json_minimal_and_errors(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"num_qubits": 2, "edges": [[0, 1]]}))
    g = load_topology(p)
    assert g.num_physical == 2 and g.edges == ((0, 1),)
    p.write_text(json.dumps({"num_qubits": 2, "edges": [[0, 0]]}))
    with pytest.raises(TopologyError, match="self-loop"):
        load_topology(p)
    p.write_text(json.dumps({"num_qubits": 2, "edges": [[0, 1]], "colour": "red"}))
    with pytest.raises(TopologyError, match="unknown"):
        load_topology(p)
    p.write_text("{not json")
    with pytest.raises(TopologyError, match="malformed"):
        load_topology(p)


@pytest.mark.parametrize("name", ["sycamore53", "tokyo", "aspen32"])
def test_json_round_trip(tmp_path, name):
    g = builtin_topology(name)
    p = tmp_path / f"{name}.json"
    save_topology(g, p)
    assert load_topology(p) == g
    assert resolve_topology(str(p)) == g


def test_round_trip_keeps_error_data(tmp_path):
    g = ring(5).with_errors(cnot_error={e: 0.01 * (i + 1) for i, e in enumerate(ring(5).edges)}, coherence_time_us=[15.0] * 5)
    p = tmp_path / "r.json"
    save_topology(g, p)
    h = load_topology(p)
    assert h.cnot_error == g.cnot_error and h.coherence_time_us == g.coherence_time_us


def test_relaxed_pair_keeps_three_routes_not_the_long_detour(detour_graph):
    dm = compute_distance_matrix(detour_graph, delta=2, max_paths_per_pair=None)
    assert dm.distance(0, 5) == 2
    stored = dm.paths(0, 5)
    assert [len(p) - 1 for p in stored] == [2, 3, 4]
    assert LONG_DETOUR not in stored
    assert LONG_DETOUR in DistanceMatrix(detour_graph, delta=4, max_paths_per_pair=None).paths(0, 5)


def test_adjacent_pair_delta_zero():
    dm = compute_distance_matrix(grid(3, 3), delta=0)
    assert dm.paths(0, 1) == ((0, 1),)


def test_five_ring_distance_two_pair():
    dm = compute_distance_matrix(ring(5), delta=2)
    assert set(dm.paths(0, 2)) == {(0, 1, 2), (0, 4, 3, 2)}


def test_path_cap_keeps_shortest_first():
    dm = DistanceMatrix(grid(5, 5), delta=2, max_paths_per_pair=3)
    paths = dm.paths(0, 24)
    assert len(paths) == 3
    assert all(len(p) - 1 == 8 for p in paths)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        DistanceMatrix(ring(4), delta=-1)
    with pytest.raises(ValueError):
        DistanceMatrix(ring(4), max_paths_per_pair=0)


def _random_connected(n: int, extra: int, rng: random.Random) -> list[tuple[int, int]]:
    nodes = list(range(n))
    rng.shuffle(nodes)
    edges = {tuple(sorted((nodes[i], nodes[rng.randrange(i)]))) for i in range(1, n)}
    for _ in range(extra):
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    return sorted(edges)


@given(st.integers(2, 50), st.integers(0, 60), st.integers(0, 10**6))
def test_shortest_matches_bfs(n, extra, seed):
    edges = _random_connected(n, extra, random.Random(seed))
    dm = DistanceMatrix(CouplingGraph(n, edges), delta=0)
    assert dm.shortest.tolist() == bfs_hops(n, edges)


@given(st.integers(2, 12), st.integers(0, 10), st.integers(0, 3), st.integers(0, 10**6))
def test_paths_match_brute_force(n, extra, delta, seed):
    rng = random.Random(seed)
    edges = _random_connected(n, extra, rng)
    graph = CouplingGraph(n, edges)
    dm = DistanceMatrix(graph, delta=delta, max_paths_per_pair=None)
    edge_set = set(graph.edges)
    for s in range(n):
        for t in range(n):
            stored = dm.paths(s, t)
            assert set(stored) == bounded_paths(n, edges, s, t, delta)
            assert list(stored) == sorted(stored, key=lambda p: (len(p), p))
            for p in stored:
                assert len(set(p)) == len(p)
                assert all((min(a, b), max(a, b)) in edge_set for a, b in zip(p, p[1:]))


@given(st.integers(0, 10**6))
def test_capped_paths_keep_a_shortest_route(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 30)
    graph = CouplingGraph(n, _random_connected(n, rng.randint(0, 2 * n), rng))
    dm = DistanceMatrix(graph, delta=2, max_paths_per_pair=4)
    for s in range(n):
        t = rng.randrange(n)
        stored = dm.paths(s, t)
        assert 1 <= len(stored) <= 4
        assert len(stored[0]) - 1 == dm.distance(s, t)


def test_tokyo_has_diagonals():
    g = builtin_topology("tokyo")
    nxg = nx.Graph(list(g.edges))
    assert nx.is_connected(nxg)
    assert any(len(c) == 3 for c in nx.cycle_basis(nxg))
