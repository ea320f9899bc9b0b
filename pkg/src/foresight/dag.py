"""Dependency DAG and two-qubit layering used by the routers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import BARRIER, Circuit

SOURCE = -1


@dataclass
class CircuitDag:
    """Data dependencies of a circuit.

    ``layers`` holds indices of two-qubit gates only, grouped by earliest
    level. Every other operation hangs off an *anchor*: the nearest preceding
    two-qubit gate or barrier on its qubit, or :data:`SOURCE`. Barriers are
    anchors themselves and sit at the end of ``barrier_level[b]`` (``-1`` means
    before the first layer).
    """

    circuit: Circuit
    layers: list[list[int]]
    layer_of: dict[int, int]
    attached: dict[int, list[int]]
    barrier_level: dict[int, int]
    barriers_after: dict[int, list[int]]
    predecessors: list[list[int]] = field(repr=False)
    successors: list[list[int]] = field(repr=False)

    @property
    def gates(self):
        return self.circuit.gates

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, succ in enumerate(self.successors) for b in succ]

    def two_qubit_pair(self, idx: int) -> tuple[int, int]:
        a, b = self.circuit.gates[idx].qubits
        return a, b

    def topological_order(self) -> list[int]:
        """Gate order produced by walking layers and emitting anchors with their attachments."""
        order: list[int] = []

        def anchor(idx: int) -> None:
            if idx != SOURCE:
                order.append(idx)
            order.extend(self.attached.get(idx, ()))

        anchor(SOURCE)
        for b in self.barriers_after.get(-1, ()):
            anchor(b)
        for level, layer in enumerate(self.layers):
            for g in layer:
                anchor(g)
            for b in self.barriers_after.get(level, ()):
                anchor(b)
        return order


def build_dag(circuit: Circuit) -> CircuitDag:
    n = circuit.num_qubits
    level = [-1] * n
    anchor_of = [SOURCE] * n
    last_gate = [-1] * n
    layers: list[list[int]] = []
    layer_of: dict[int, int] = {}
    attached: dict[int, list[int]] = {SOURCE: []}
    barrier_level: dict[int, int] = {}
    barriers_after: dict[int, list[int]] = {}
    preds: list[list[int]] = [[] for _ in circuit.gates]
    succs: list[list[int]] = [[] for _ in circuit.gates]

    for idx, g in enumerate(circuit.gates):
        for q in g.qubits:
            p = last_gate[q]
            if p >= 0 and p not in preds[idx]:
                preds[idx].append(p)
                succs[p].append(idx)
            last_gate[q] = idx

        if g.is_two_qubit:
            a, b = g.qubits
            lvl = max(level[a], level[b]) + 1
            if lvl == len(layers):
                layers.append([])
            layers[lvl].append(idx)
            layer_of[idx] = lvl
            level[a] = level[b] = lvl
            anchor_of[a] = anchor_of[b] = idx
            attached[idx] = []
        elif g.kind == BARRIER:
            lvl = max(level[q] for q in g.qubits)
            barrier_level[idx] = lvl
            barriers_after.setdefault(lvl, []).append(idx)
            for q in g.qubits:
                level[q] = lvl
                anchor_of[q] = idx
            attached[idx] = []
        else:
            attached[anchor_of[g.qubits[0]]].append(idx)

    return CircuitDag(circuit, layers, layer_of, attached, barrier_level, barriers_after, preds, succs)
