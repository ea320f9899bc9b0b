"""Circuit intermediate representation shared by the frontend, routers and verifier."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

ONE_QUBIT = "one_qubit"
CNOT = "cnot"
SWAP = "swap"
MEASURE = "measure"
BARRIER = "barrier"

KINDS = (ONE_QUBIT, CNOT, SWAP, MEASURE, BARRIER)
TWO_QUBIT_KINDS = (CNOT, SWAP)


@dataclass(frozen=True)
class Gate:
    """One operation. ``name`` is the QASM mnemonic (``h``, ``rz``, ``cx`` ...)."""

    kind: str
    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in TWO_QUBIT_KINDS:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.name} needs two distinct qubits, got {self.qubits}")
        elif self.kind == ONE_QUBIT:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.name} acts on exactly one qubit")
        elif self.kind == MEASURE:
            if len(self.qubits) != 1 or len(self.clbits) != 1:
                raise ValueError("measure takes one qubit and one clbit")
        elif self.kind == BARRIER:
            if not self.qubits or len(set(self.qubits)) != len(self.qubits):
                raise ValueError("barrier needs distinct qubits")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    @property
    def cnot_count(self) -> int:
        if self.kind == CNOT:
            return 1
        if self.kind == SWAP:
            return 3
        return 0

    def on(self, *qubits: int) -> Gate:
        """Same operation on different qubits."""
        return Gate(self.kind, self.name, tuple(qubits), self.params, self.clbits)


def cx(a: int, b: int) -> Gate:
    return Gate(CNOT, "cx", (a, b))


def swap(a: int, b: int) -> Gate:
    return Gate(SWAP, "swap", (a, b))


def one(name: str, q: int, *params: float) -> Gate:
    return Gate(ONE_QUBIT, name, (q,), tuple(float(p) for p in params))


def measure(q: int, c: int) -> Gate:
    return Gate(MEASURE, "measure", (q,), (), (c,))


def barrier(*qubits: int) -> Gate:
    return Gate(BARRIER, "barrier", tuple(qubits))


@dataclass
class Circuit:
    num_qubits: int
    num_clbits: int = 0
    gates: list[Gate] = field(default_factory=list)
    name: str = field(default="circuit", compare=False)

    def __post_init__(self) -> None:
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        for q in g.qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"qubit {q} out of range for {self.num_qubits}-qubit circuit")
        for c in g.clbits:
            if not 0 <= c < self.num_clbits:
                raise ValueError(f"clbit {c} out of range for {self.num_clbits} clbits")

    def append(self, g: Gate) -> None:
        self._check(g)
        self.gates.append(g)

    def count_ops(self) -> Counter:
        return Counter(g.name for g in self.gates)

    def count_kinds(self) -> Counter:
        return Counter(g.kind for g in self.gates)

    @property
    def cnot_count(self) -> int:
        """CNOTs with every SWAP expanded to three."""
        return sum(g.cnot_count for g in self.gates)

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.is_two_qubit)

    def depth(self) -> int:
        """Critical path length, every gate one time step; barriers only synchronise."""
        clock = [0] * self.num_qubits
        for g in self.gates:
            t = max(clock[q] for q in g.qubits)
            if g.kind != BARRIER:
                t += 1
            for q in g.qubits:
                clock[q] = t
        return max(clock, default=0)

    def copy(self) -> Circuit:
        return Circuit(self.num_qubits, self.num_clbits, list(self.gates), self.name)
