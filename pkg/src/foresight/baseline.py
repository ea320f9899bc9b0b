"""Greedy one-SWAP-at-a-time router and the hybrid selector."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .circuit import BARRIER, Circuit, Gate, swap
from .dag import build_dag
from .router import ForesightParams, route_foresight
from .schedule import EMPTY, Mapping, RoutedSchedule, initial_mapping
from .topology import CouplingGraph, DistanceMatrix

EXTENDED_SET_SIZE = 20


@dataclass
class GreedyParams:
    lookahead_weight: float = 0.5
    seed: int = 0
    scheduling: str = "asap"
    initial_policy: str = "degree_matched"


def route_greedy(
    circuit: Circuit,
    graph: CouplingGraph,
    params: GreedyParams | None = None,
    *,
    initial: Mapping | None = None,
    dmat: DistanceMatrix | None = None,
) -> RoutedSchedule:
    """Insert one SWAP at a time, scored by front distance plus a damped extended-set term.

    ``scheduling="asap"`` runs a gate as soon as its operands are free and
    coupled. ``"alap"`` only releases two-qubit gates of the lowest unfinished
    DAG layer, which is how the layered router sees the circuit.
    """
    params = params or GreedyParams()
    if params.scheduling not in ("asap", "alap"):
        raise ValueError(f"unknown scheduling {params.scheduling!r}")
    if circuit.num_qubits > graph.num_physical:
        raise ValueError(f"circuit needs {circuit.num_qubits} qubits but the device has {graph.num_physical}")
    dag = build_dag(circuit)
    if dmat is None:
        dmat = DistanceMatrix(graph, 0, 1)
    hops = dmat.shortest.tolist()
    adjacency = graph.adjacency
    start = initial or initial_mapping(circuit, graph, params.initial_policy, params.seed, dmat)
    pi, inv = list(start.pi), list(start.inverse)
    rng = random.Random(params.seed)
    gates = circuit.gates
    alap = params.scheduling == "alap"

    waiting = [len(p) for p in dag.predecessors]
    ready = sorted(i for i, w in enumerate(waiting) if w == 0)
    remaining_in_layer = [len(layer) for layer in dag.layers]
    current_layer = 0
    two_qubit_order = [i for i, g in enumerate(gates) if g.is_two_qubit]
    done = [False] * len(gates)
    cursor = 0

    out: list[Gate] = []
    swap_positions: list[int] = []
    last_swap: tuple[int, int] | None = None
    valve_swaps = 0

    def release(idx: int) -> None:
        done[idx] = True
        for s in dag.successors[idx]:
            waiting[s] -= 1
            if waiting[s] == 0:
                ready.append(s)

    def emit(idx: int) -> None:
        nonlocal current_layer
        g = gates[idx]
        out.append(g.on(*(pi[q] for q in g.qubits)))
        if g.is_two_qubit:
            remaining_in_layer[dag.layer_of[idx]] -= 1
            while current_layer < len(remaining_in_layer) and remaining_in_layer[current_layer] == 0:
                current_layer += 1
        release(idx)

    def apply_swap(a: int, b: int) -> None:
        qa, qb = inv[a], inv[b]
        inv[a], inv[b] = qb, qa
        if qa != EMPTY:
            pi[qa] = b
        if qb != EMPTY:
            pi[qb] = a
        swap_positions.append(len(out))
        out.append(swap(a, b))

    while ready:
        progressed = True
        while progressed:
            progressed = False
            ready.sort()
            for idx in list(ready):
                g = gates[idx]
                if g.is_two_qubit:
                    if alap and dag.layer_of[idx] != current_layer:
                        continue
                    a, b = g.qubits
                    if pi[b] not in adjacency[pi[a]]:
                        continue
                ready.remove(idx)
                emit(idx)
                progressed = True
        if not ready:
            break

        front = [i for i in ready if not alap or dag.layer_of[i] == current_layer]
        while cursor < len(two_qubit_order) and done[two_qubit_order[cursor]]:
            cursor += 1
        front_set = set(front)
        extended = []
        for i in two_qubit_order[cursor:]:
            if len(extended) >= EXTENDED_SET_SIZE:
                break
            if not done[i] and i not in front_set:
                extended.append(i)
        front_pairs = [gates[i].qubits for i in front]
        ext_pairs = [gates[i].qubits for i in extended]

        def score(p: list[int]) -> float:
            f = sum(hops[p[a]][p[b]] for a, b in front_pairs)
            if not ext_pairs:
                return float(f)
            e = sum(hops[p[a]][p[b]] for a, b in ext_pairs) / len(ext_pairs)
            return f + params.lookahead_weight * e

        base = score(pi)
        touched = sorted({pi[q] for pair in front_pairs for q in pair})
        candidates = sorted({(min(p, w), max(p, w)) for p in touched for w in adjacency[p]})
        scored = []
        for a, b in candidates:
            if (a, b) == last_swap:
                continue
            trial = list(pi)
            qa, qb = inv[a], inv[b]
            if qa != EMPTY:
                trial[qa] = b
            if qb != EMPTY:
                trial[qb] = a
            scored.append((score(trial), a, b))
        improving = [s for s in scored if s[0] < base - 1e-12]
        if improving:
            best = min(s[0] for s in improving)
            ties = [s for s in improving if s[0] <= best + 1e-12]
            _, a, b = ties[0] if len(ties) == 1 else rng.choice(ties)
            apply_swap(a, b)
            last_swap = (a, b)
            continue

        # no strictly improving SWAP: walk the closest front gate together along a shortest path
        target = min(front, key=lambda i: (hops[pi[gates[i].qubits[0]]][pi[gates[i].qubits[1]]], i))
        qa, qb = gates[target].qubits
        while pi[qb] not in adjacency[pi[qa]]:
            here, goal = pi[qa], pi[qb]
            step = min(w for w in adjacency[here] if hops[w][goal] == hops[here][goal] - 1)
            apply_swap(min(here, step), max(here, step))
            valve_swaps += 1
        last_swap = None

    routed = Circuit(graph.num_physical, circuit.num_clbits, out, circuit.name)
    return RoutedSchedule(
        circuit=routed,
        initial_mapping=start.copy(),
        final_mapping=Mapping(pi, inv),
        swap_count=len(swap_positions),
        swap_overhead_cnots=routed.cnot_count - circuit.cnot_count,
        depth=routed.depth(),
        router="greedy",
        swap_positions=tuple(swap_positions),
        stats={"scheduling": params.scheduling, "valve_swaps": valve_swaps},
    )


def route_hybrid(
    circuit: Circuit,
    graph: CouplingGraph,
    foresight_params: ForesightParams | None = None,
    greedy_params: GreedyParams | None = None,
) -> RoutedSchedule:
    """Run both routers and keep the lower SWAP overhead, then the lower depth; ties go to ForeSight."""
    foresight_params = foresight_params or ForesightParams()
    greedy_params = greedy_params or GreedyParams(seed=foresight_params.seed)
    dmat = DistanceMatrix(graph, foresight_params.delta, foresight_params.max_paths_per_pair)
    fs = route_foresight(circuit, graph, foresight_params, dmat=dmat)
    gr = route_greedy(circuit, graph, greedy_params, dmat=dmat)
    return select_hybrid(fs, gr)


def select_hybrid(fs: RoutedSchedule, gr: RoutedSchedule) -> RoutedSchedule:
    """The hybrid choice between two finished schedules of the same circuit."""
    fs_key = (fs.swap_overhead_cnots, fs.depth)
    gr_key = (gr.swap_overhead_cnots, gr.depth)
    winner, name = (gr, "greedy") if gr_key < fs_key else (fs, "foresight")
    chosen = replace(winner, stats=dict(winner.stats), router=f"hybrid:{name}")
    chosen.stats["hybrid"] = {
        "winner": name,
        "foresight_overhead": fs.swap_overhead_cnots,
        "greedy_overhead": gr.swap_overhead_cnots,
        "foresight_depth": fs.depth,
        "greedy_depth": gr.depth,
    }
    return chosen
