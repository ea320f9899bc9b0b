import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foresight.circuit import Circuit, cx, measure, one, swap
from foresight.noise import ErrorModel, duration_ns, eps, route_noise_adaptive
from foresight.router import route_foresight
from foresight.schedule import Mapping
from foresight.topology import builtin_topology, grid, line, ring
from foresight.verify import verify_schedule
from oracles import eps_product


def test_empty_circuit_succeeds_surely():
    assert eps(Circuit(3), ErrorModel.uniform(line(3), coherence_us=15.0)) == 1.0


def test_single_cnot_example():
    model = ErrorModel.uniform(line(2), cnot_error=0.01, coherence_us=15.0)
    value = eps(Circuit(2, gates=[cx(0, 1)]), model)
    assert value == pytest.approx(eps_product([0.01], [32, 32], [15000, 15000]), rel=1e-12)
    assert value == pytest.approx(0.9858, abs=5e-5)


def test_swap_counts_as_three_cnots():
    model = ErrorModel.uniform(line(2), cnot_error=0.02, coherence_us=10.0)
    value = eps(Circuit(2, gates=[swap(0, 1)]), model)
    assert value == pytest.approx(eps_product([0.02] * 3, [96, 96], [10000, 10000]), rel=1e-12)


def test_busy_span_starts_at_first_gate():
    # qubit 2 idles until the second CNOT; its span is one CNOT long
    model = ErrorModel.uniform(line(3), cnot_error=0.0, one_qubit_error=0.0, coherence_us=1.0)
    c = Circuit(3, gates=[cx(0, 1), cx(1, 2)])
    assert eps(c, model) == pytest.approx(eps_product([], [32, 64, 32], [1000] * 3), rel=1e-12)
    assert duration_ns(c, model) == 64


def test_readout_and_one_qubit_errors_enter():
    model = ErrorModel.uniform(line(2), cnot_error=0.0, one_qubit_error=0.001, measure_error=0.05)
    c = Circuit(2, 2, [one("h", 0), measure(0, 0)])
    assert eps(c, model) == pytest.approx(0.999 * 0.95, rel=1e-12)


def test_certain_failure_gives_zero():
    model = ErrorModel.uniform(line(2), cnot_error=1.0)
    assert eps(Circuit(2, gates=[cx(0, 1)]), model) == 0.0


def test_model_validation():
    with pytest.raises(ValueError):
        ErrorModel.uniform(line(2), cnot_error=1.5)
    with pytest.raises(ValueError):
        ErrorModel.uniform(line(2), coherence_us=0.0)


def _random_physical(rng, graph, count):
    edges = list(graph.edges)
    gates = []
    for _ in range(count):
        r = rng.random()
        if r < 0.6:
            gates.append(cx(*rng.choice(edges)))
        elif r < 0.75:
            gates.append(swap(*rng.choice(edges)))
        else:
            gates.append(one("h", rng.randrange(graph.num_physical)))
    return Circuit(graph.num_physical, gates=gates)


@given(st.integers(0, 10**6))
def test_eps_matches_product_form(seed):
    rng = random.Random(seed)
    g = grid(2, 3)
    model = ErrorModel(
        6,
        {e: rng.uniform(0, 0.05) for e in g.edges},
        tuple(rng.uniform(0, 0.01) for _ in range(6)),
        (0.0,) * 6,
        tuple(rng.uniform(5e3, 5e4) for _ in range(6)),
    )
    c = _random_physical(rng, g, rng.randint(0, 30))
    errors, first, last, clock = [], [None] * 6, [0.0] * 6, [0.0] * 6
    for gt in c.gates:
        if gt.name == "swap":
            errors += [model.edge(*gt.qubits)] * 3
            d = 96.0
        elif gt.name == "cx":
            errors.append(model.edge(*gt.qubits))
            d = 32.0
        else:
            errors.append(model.one_qubit_error[gt.qubits[0]])
            d = 25.0
        start = max(clock[q] for q in gt.qubits)
        for q in gt.qubits:
            clock[q] = last[q] = start + d
            first[q] = start if first[q] is None else first[q]
    spans = [last[q] - first[q] if first[q] is not None else 0.0 for q in range(6)]
    assert eps(c, model) == pytest.approx(eps_product(errors, spans, model.coherence_ns), rel=1e-9)


@given(st.integers(0, 10**6), st.floats(0.0, 0.2))
def test_eps_is_monotone(seed, bump):
    rng = random.Random(seed)
    g = ring(5)
    base = {e: rng.uniform(0, 0.1) for e in g.edges}
    c = _random_physical(rng, g, rng.randint(1, 20))
    model = ErrorModel(5, base, (0.001,) * 5, (0.01,) * 5, (2e4,) * 5)
    target = rng.choice(list(g.edges))
    worse = dict(base)
    worse[target] = min(1.0, base[target] + bump)
    assert eps(c, ErrorModel(5, worse, (0.001,) * 5, (0.01,) * 5, (2e4,) * 5)) <= eps(c, model) + 1e-15
    longer = Circuit(5, gates=c.gates + [cx(*target)])
    assert eps(longer, model) <= eps(c, model) + 1e-15
    assert 0.0 <= eps(c, model) <= 1.0


@given(st.integers(0, 10**6))
def test_perfect_device_gives_one(seed):
    g = ring(5)
    model = ErrorModel.uniform(g, cnot_error=0.0, one_qubit_error=0.0, measure_error=0.0)
    assert eps(_random_physical(random.Random(seed), g, 20), model) == 1.0


def test_edge_weights():
    g = ring(4)
    assert set(ErrorModel.uniform(g, coherence_us=15.0).edge_weights().values()) == {1.0}
    err = {e: 0.01 for e in g.edges}
    err[(0, 1)] = 0.05
    w = ErrorModel.from_graph(g.with_errors(cnot_error=err)).edge_weights()
    assert math.fsum(w.values()) / len(w) == pytest.approx(1.0)
    assert w[(0, 1)] > w[(1, 2)] == w[(2, 3)]
    assert ErrorModel.uniform(g).qubit_weights() is None


def _two_route_device():
    g = ring(6)
    err = {e: 0.001 for e in g.edges}
    err[(1, 2)] = 0.10
    return g.with_errors(cnot_error=err)


def test_noise_aware_routing_avoids_the_bad_coupler():
    g = _two_route_device()
    c = Circuit(2, gates=[cx(0, 1)])
    start = Mapping.from_pi([0, 3], 6)
    model = ErrorModel.from_graph(g)
    plain = route_foresight(c, g, initial=start)
    aware = route_noise_adaptive(c, g, initial=start)
    assert verify_schedule(c, aware, g)["pass"]
    assert aware.swap_count == plain.swap_count == 2
    assert all(gt.qubits not in ((1, 2), (2, 1)) for gt in aware.circuit.gates)
    assert aware.eps == pytest.approx(eps(aware, model))
    assert aware.eps > eps(plain, model)
    assert aware.router == "foresight-noise"


def test_uniform_errors_leave_the_schedule_unchanged(corpus):
    t = builtin_topology("tokyo")
    uniform = t.with_errors(cnot_error={e: 0.01 for e in t.edges})
    for c in [x for x in corpus if x.num_qubits <= 12][:4]:
        assert route_noise_adaptive(c, uniform).circuit == route_foresight(c, uniform).circuit


def test_missing_error_data_warns():
    s = route_noise_adaptive(Circuit(2, gates=[cx(0, 1)]), ring(4))
    assert any("no error data" in w for w in s.warnings)
    assert not route_noise_adaptive(Circuit(2, gates=[cx(0, 1)]), _two_route_device()).warnings


def test_uniform_eps_ranking_agrees_with_cnot_cost(small_corpus):
    g = grid(3, 4)
    model = ErrorModel.uniform(g)
    checked = 0
    for c in small_corpus[:8]:
        seen = []

        def selector(built):
            seen.extend(built)
            return min(built, key=lambda t: (t[0].node.cnot_cost, t[1].depth(), t[0].node.id))

        route_foresight(c, g, leaf_selector=selector)
        values = [eps(circ, model) for _, circ, _ in seen]
        costs = [lf.node.cnot_cost for lf, _, _ in seen]
        best_eps = {i for i, v in enumerate(values) if v == pytest.approx(max(values), rel=1e-12)}
        cheapest = {i for i, k in enumerate(costs) if k == min(costs)}
        assert best_eps == cheapest
        checked += len(seen) > 1
    assert checked
