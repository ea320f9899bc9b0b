"""Types shared by every router: mappings, routed schedules and metrics."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .circuit import BARRIER, Circuit, Gate, swap
from .dag import SOURCE, CircuitDag
from .topology import CouplingGraph, DistanceMatrix

EMPTY = -1
SWAP_EVENT = -1
_SRC = -2
SOURCE_EVENT = (_SRC,)


@dataclass
class Mapping:
    """Program qubit -> physical qubit (``pi``) with its inverse; ``-1`` marks a free physical qubit."""

    pi: list[int]
    inverse: list[int]

    @classmethod
    def from_pi(cls, pi, num_physical: int) -> Mapping:
        pi = [int(p) for p in pi]
        inverse = [EMPTY] * num_physical
        for q, p in enumerate(pi):
            if not 0 <= p < num_physical:
                raise ValueError(f"program qubit {q} mapped outside the device ({p})")
            if inverse[p] != EMPTY:
                raise ValueError(f"physical qubit {p} assigned twice")
            inverse[p] = q
        return cls(pi, inverse)

    def copy(self) -> Mapping:
        return Mapping(list(self.pi), list(self.inverse))

    def swap_physical(self, a: int, b: int) -> None:
        qa, qb = self.inverse[a], self.inverse[b]
        self.inverse[a], self.inverse[b] = qb, qa
        if qa != EMPTY:
            self.pi[qa] = b
        if qb != EMPTY:
            self.pi[qb] = a

    def __getitem__(self, q: int) -> int:
        return self.pi[q]

    def __len__(self) -> int:
        return len(self.pi)


@dataclass
class RoutedSchedule:
    circuit: Circuit
    initial_mapping: Mapping
    final_mapping: Mapping
    swap_count: int
    swap_overhead_cnots: int
    depth: int
    router: str
    swap_positions: tuple[int, ...] = ()
    eps: float | None = None
    stats: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def inserted_swaps(self) -> list[tuple[int, int]]:
        gates = self.circuit.gates
        return [gates[i].qubits for i in self.swap_positions]


def extract_metrics(schedule: RoutedSchedule, original: Circuit) -> dict:
    """SWAP overhead (compiled minus original CNOTs, SWAP = 3), depth and gate counts."""
    routed = schedule.circuit
    return {
        "original_cnots": original.cnot_count,
        "compiled_cnots": routed.cnot_count,
        "swap_count": schedule.swap_count,
        "swap_overhead_cnots": routed.cnot_count - original.cnot_count,
        "depth": routed.depth(),
        "original_depth": original.depth(),
        "gate_count": sum(1 for g in routed.gates if g.kind != BARRIER),
        "eps": schedule.eps,
    }


def initial_mapping(
    circuit: Circuit,
    graph: CouplingGraph,
    policy: str = "degree_matched",
    seed: int = 0,
    dmat: DistanceMatrix | None = None,
) -> Mapping:
    """Place program qubits on the device.

    ``identity`` puts q_i on Q_i. ``degree_matched`` seeds the busiest program
    qubit on the best-connected physical qubit, then grows the placement
    outward: each next qubit is the one most entangled with the placed set,
    and lands on the free physical qubit closest to its placed partners,
    preferring higher degree; remaining ties go to the seeded RNG.
    """
    n, N = circuit.num_qubits, graph.num_physical
    if n > N:
        raise ValueError(f"circuit needs {n} qubits but the device has {N}")
    if policy == "identity":
        return Mapping.from_pi(range(n), N)
    if policy != "degree_matched":
        raise ValueError(f"unknown initial mapping policy {policy!r}")

    rng = random.Random(seed)
    hops = (dmat.shortest if dmat is not None else DistanceMatrix(graph, 0, 1).shortest).tolist()
    weight = [dict() for _ in range(n)]
    count = [0] * n
    for g in circuit.gates:
        if g.is_two_qubit:
            a, b = g.qubits
            weight[a][b] = weight[a].get(b, 0) + 1
            weight[b][a] = weight[b].get(a, 0) + 1
            count[a] += 1
            count[b] += 1
    jitter_q = [rng.random() for _ in range(n)]
    jitter_p = [rng.random() for _ in range(N)]
    centrality = [sum(row) for row in hops]

    pi = [EMPTY] * n
    free = set(range(N))
    spread = [0] * N
    unplaced = set(range(n))
    while unplaced:
        q = min(
            unplaced,
            key=lambda u: (
                -sum(w for v, w in weight[u].items() if pi[v] != EMPTY),
                -count[u],
                jitter_q[u],
            ),
        )
        partners = [(pi[v], w) for v, w in weight[q].items() if pi[v] != EMPTY]

        def cost(p: int) -> tuple:
            pull = sum(w * hops[p][pv] for pv, w in partners)
            return (pull, 0 if partners else spread[p], -graph.degree(p), centrality[p], jitter_p[p])

        p = min(free, key=cost)
        pi[q] = p
        free.discard(p)
        unplaced.discard(q)
        row = hops[p]
        for x in range(N):
            spread[x] += row[x]
    return Mapping.from_pi(pi, N)


def emit_events(
    dag: CircuitDag,
    num_physical: int,
    initial: Mapping,
    chunks,
) -> tuple[Circuit, tuple[int, ...]]:
    """Turn router events into a physical circuit.

    Events: ``(-1, a, b)`` inserted SWAP, ``(idx, pa, pb)`` routed two-qubit
    gate, ``(idx, phys_tuple)`` barrier, ``(SOURCE,)`` operations that precede
    every anchor. Each anchor is followed by its attached operations, placed on
    the physical qubit the anchor recorded for that program qubit.
    """
    gates = dag.circuit.gates
    out: list[Gate] = []
    swaps: list[int] = []

    def attach(anchor: int, where: dict[int, int]) -> None:
        for i in dag.attached.get(anchor, ()):
            op = gates[i]
            out.append(op.on(where[op.qubits[0]]))

    for events in chunks:
        for ev in events:
            idx = ev[0]
            if idx == SWAP_EVENT:
                swaps.append(len(out))
                out.append(swap(ev[1], ev[2]))
            elif idx == _SRC:
                attach(SOURCE, dict(enumerate(initial.pi)))
            elif len(ev) == 2:
                g = gates[idx]
                out.append(g.on(*ev[1]))
                attach(idx, dict(zip(g.qubits, ev[1])))
            else:
                g = gates[idx]
                out.append(g.on(ev[1], ev[2]))
                attach(idx, {g.qubits[0]: ev[1], g.qubits[1]: ev[2]})
    circ = Circuit(num_physical, dag.circuit.num_clbits, out, dag.circuit.name)
    return circ, tuple(swaps)

