import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foresight.baseline import GreedyParams, route_greedy, route_hybrid, select_hybrid
from foresight.circuit import Circuit, cx, one
from foresight.router import ForesightParams, route_foresight
from foresight.schedule import Mapping
from foresight.topology import builtin_topology, grid, line, ring
from foresight.verify import verify_schedule
from test_router import EARLY_COMMIT_GATES

# On a 6-line, releasing only the current layer forces SWAPs that eager scheduling avoids.
LAYER_BOUND_GATES = [(1, 4), (3, 1), (4, 1), (4, 3), (3, 1), (0, 5), (1, 0)]


def test_already_routable_needs_no_swaps():
    c = Circuit(3, gates=[cx(0, 1), cx(1, 2), one("h", 0)])
    s = route_greedy(c, line(3), initial=Mapping.from_pi(range(3), 3))
    assert s.swap_count == 0
    assert s.circuit.gates == c.gates


def test_far_pair_on_a_line_walks_the_path():
    c = Circuit(5, gates=[cx(0, 4)])
    s = route_greedy(c, line(5), initial=Mapping.from_pi(range(5), 5))
    assert s.swap_count == 3
    assert s.swap_overhead_cnots == 9
    assert verify_schedule(c, s, line(5))["pass"]


def test_asap_not_worse_than_alap():
    c = Circuit(6, gates=[cx(a, b) for a, b in LAYER_BOUND_GATES])
    start = Mapping.from_pi(range(6), 6)
    asap = route_greedy(c, line(6), GreedyParams(scheduling="asap"), initial=start)
    alap = route_greedy(c, line(6), GreedyParams(scheduling="alap"), initial=start)
    assert asap.swap_count <= alap.swap_count
    assert (asap.swap_count, alap.swap_count) == (8, 13)


def test_unknown_scheduling_rejected():
    with pytest.raises(ValueError):
        route_greedy(Circuit(2, gates=[cx(0, 1)]), line(2), GreedyParams(scheduling="later"))
    with pytest.raises(ValueError):
        route_greedy(Circuit(3), line(2))


@given(st.integers(0, 10**6), st.sampled_from(["asap", "alap"]))
def test_greedy_schedules_are_valid(seed, scheduling):
    rng = random.Random(seed)
    g = rng.choice([grid(3, 3), ring(6), line(5)])
    n = rng.randint(2, g.num_physical)
    c = Circuit(n, gates=[cx(*rng.sample(range(n), 2)) for _ in range(rng.randint(0, 25))])
    s = route_greedy(c, g, GreedyParams(seed=seed, scheduling=scheduling))
    assert verify_schedule(c, s, g)["pass"]
    assert s.stats["valve_swaps"] <= s.swap_count
    assert route_greedy(c, g, GreedyParams(seed=seed, scheduling=scheduling)).circuit == s.circuit


def test_hybrid_takes_the_greedy_schedule_when_it_is_cheaper(corpus):
    c = next(x for x in corpus if x.name == "qft_n8")
    g = builtin_topology("tokyo")
    fs, gr = route_foresight(c, g), route_greedy(c, g)
    assert gr.swap_overhead_cnots < fs.swap_overhead_cnots
    h = route_hybrid(c, g)
    assert h.router == "hybrid:greedy"
    assert h.swap_overhead_cnots == gr.swap_overhead_cnots
    assert h.stats["hybrid"]["foresight_overhead"] == fs.swap_overhead_cnots


def test_hybrid_takes_foresight_when_it_is_cheaper(corpus):
    c = next(x for x in corpus if x.name == "rev_n10_g40_s1")
    g = builtin_topology("tokyo")
    fs, gr = route_foresight(c, g), route_greedy(c, g)
    assert fs.swap_overhead_cnots < gr.swap_overhead_cnots
    h = select_hybrid(fs, gr)
    assert h.router == "hybrid:foresight"
    assert h.circuit == fs.circuit
    assert "hybrid" not in fs.stats


def test_foresight_beats_greedy_on_the_early_commit_layout():
    c = Circuit(6, gates=[cx(a, b) for a, b in EARLY_COMMIT_GATES])
    start = Mapping.from_pi(range(6), 6)
    fs = route_foresight(c, grid(2, 3), initial=start)
    gr = route_greedy(c, grid(2, 3), initial=start)
    assert select_hybrid(fs, gr).router == "hybrid:foresight"
    assert fs.swap_count < gr.swap_count


def test_hybrid_tie_goes_to_foresight(corpus):
    c = next(x for x in corpus if x.name == "ghz_n8")
    h = route_hybrid(c, builtin_topology("tokyo"))
    assert h.router == "hybrid:foresight"


def test_hybrid_is_the_minimum(small_corpus):
    g = grid(4, 4)
    for c in small_corpus[:5]:
        p = ForesightParams(seed=1)
        fs, gr = route_foresight(c, g, p), route_greedy(c, g, GreedyParams(seed=1))
        h = route_hybrid(c, g, p)
        assert h.swap_overhead_cnots == min(fs.swap_overhead_cnots, gr.swap_overhead_cnots)
        assert verify_schedule(c, h, g)["pass"]
