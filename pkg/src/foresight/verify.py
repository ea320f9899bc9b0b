"""Correctness oracles for routed schedules."""

from __future__ import annotations

import cmath
import math
from collections import defaultdict

import numpy as np

from .circuit import BARRIER, MEASURE, SWAP, Circuit, Gate
from .schedule import EMPTY, Mapping, RoutedSchedule
from .topology import CouplingGraph

MAX_SIM_QUBITS = 12
FIDELITY_TOLERANCE = 1e-9

_S2 = 1 / math.sqrt(2)


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -cmath.exp(1j * lam) * s], [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def _phase(lam: float) -> np.ndarray:
    return np.array([[1, 0], [0, cmath.exp(1j * lam)]], dtype=complex)


_FIXED = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "s": _phase(math.pi / 2),
    "sdg": _phase(-math.pi / 2),
    "t": _phase(math.pi / 4),
    "tdg": _phase(-math.pi / 4),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    "sxdg": 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex),
}

CNOT_MATRIX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP_MATRIX = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def gate_matrix(gate: Gate) -> np.ndarray:
    name, p = gate.name, gate.params
    if gate.kind == SWAP:
        return SWAP_MATRIX
    if gate.is_two_qubit:
        return CNOT_MATRIX
    if name in _FIXED and not p:
        return _FIXED[name]
    if name == "rx" and len(p) == 1:
        return _u3(p[0], -math.pi / 2, math.pi / 2)
    if name == "ry" and len(p) == 1:
        return _u3(p[0], 0.0, 0.0)
    if name == "rz" and len(p) == 1:
        return np.array([[cmath.exp(-0.5j * p[0]), 0], [0, cmath.exp(0.5j * p[0])]], dtype=complex)
    if name in ("p", "u1") and len(p) == 1:
        return _phase(p[0])
    if name == "u2" and len(p) == 2:
        return _u3(math.pi / 2, p[0], p[1])
    if name in ("u3", "u") and len(p) == 3:
        return _u3(*p)
    raise ValueError(f"cannot simulate gate {name} with {len(p)} parameter(s)")


def _apply(state: np.ndarray, matrix: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    k = len(axes)
    tensor = matrix.reshape((2,) * (2 * k))
    moved = np.tensordot(tensor, state, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(moved, list(range(k)), list(axes))


def simulate(circuit: Circuit, max_qubits: int = MAX_SIM_QUBITS) -> np.ndarray:
    """Statevector of ``circuit`` applied to |0...0>; qubit 0 is the most significant bit."""
    n = circuit.num_qubits
    if n > max_qubits:
        raise ValueError(f"{n} qubits exceeds the simulation cap of {max_qubits}")
    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1.0
    for g in circuit.gates:
        if g.kind == BARRIER:
            continue
        if g.kind == MEASURE:
            raise ValueError("strip measurements before simulating")
        state = _apply(state, gate_matrix(g), g.qubits)
    return state.reshape(-1)


def strip_measurements(circuit: Circuit) -> Circuit:
    return Circuit(circuit.num_qubits, circuit.num_clbits, [g for g in circuit.gates if g.kind != MEASURE], circuit.name)


def _simulate_routed(schedule: RoutedSchedule, num_program: int, max_qubits: int) -> tuple[np.ndarray, float]:
    """State of the routed circuit restricted to the program qubits, in program order.

    Physical qubits get a state axis when they first hold a program qubit or
    are touched by a non-SWAP gate; a SWAP with an untouched |0> qubit only
    moves the axis label. Untouched qubits are checked to end in |0>.
    """
    axis_of: dict[int, int] = {p: q for q, p in enumerate(schedule.initial_mapping.pi)}
    state = np.zeros((2,) * num_program, dtype=complex)
    state[(0,) * num_program] = 1.0
    extra = 0

    def axis(p: int) -> int:
        nonlocal state, extra
        if p not in axis_of:
            if num_program + extra + 1 > max_qubits:
                raise ValueError("routed circuit touches too many qubits to simulate")
            state = np.stack([state, np.zeros_like(state)], axis=-1)
            axis_of[p] = num_program + extra
            extra += 1
        return axis_of[p]

    for g in schedule.circuit.gates:
        if g.kind in (BARRIER, MEASURE):
            continue
        if g.kind == SWAP:
            a, b = g.qubits
            if a in axis_of and b in axis_of:
                state = _apply(state, SWAP_MATRIX, (axis_of[a], axis_of[b]))
            else:
                ax_a, ax_b = axis_of.pop(a, None), axis_of.pop(b, None)
                if ax_a is not None:
                    axis_of[b] = ax_a
                if ax_b is not None:
                    axis_of[a] = ax_b
            continue
        state = _apply(state, gate_matrix(g), tuple(axis(p) for p in g.qubits))

    final = schedule.final_mapping.pi
    order = [axis_of.get(final[q], -1) for q in range(num_program)]
    if -1 in order or len(set(order)) != num_program:
        raise ValueError("final mapping does not match the simulated qubit placement")
    if extra:
        rest = [a for a in range(num_program + extra) if a not in order]
        state = np.transpose(state, order + rest)
        flat = state.reshape(2**num_program, 2**extra)
        return flat[:, 0], float(np.linalg.norm(flat[:, 1:]) ** 2)
    return np.transpose(state, order).reshape(-1), 0.0


def check_connectivity(schedule: RoutedSchedule | Circuit, graph: CouplingGraph) -> list[dict]:
    """Every two-qubit operation that does not sit on a coupler."""
    circuit = schedule.circuit if isinstance(schedule, RoutedSchedule) else schedule
    out = []
    for i, g in enumerate(circuit.gates):
        if g.is_two_qubit and not graph.has_edge(*g.qubits):
            out.append({"index": i, "gate": g.name, "qubits": list(g.qubits)})
        elif any(q >= graph.num_physical for q in g.qubits):
            out.append({"index": i, "gate": g.name, "qubits": list(g.qubits), "reason": "outside device"})
    return out


def replay_mapping(schedule: RoutedSchedule) -> Mapping:
    """Apply the inserted SWAPs to the initial mapping; program SWAPs move data, not qubits."""
    m = schedule.initial_mapping.copy()
    gates = schedule.circuit.gates
    for i in schedule.swap_positions:
        if gates[i].kind != SWAP:
            raise ValueError(f"inserted-swap position {i} holds a {gates[i].name}")
        m.swap_physical(*gates[i].qubits)
    return m


def check_permutation(schedule: RoutedSchedule) -> dict:
    """Replayed SWAPs must carry the initial mapping onto the reported final mapping."""
    try:
        replayed = replay_mapping(schedule)
    except ValueError as exc:
        return {"pass": False, "mismatched_qubits": [], "error": str(exc)}
    ok = replayed.pi == list(schedule.final_mapping.pi)
    mismatched = [q for q, (a, b) in enumerate(zip(replayed.pi, schedule.final_mapping.pi)) if a != b]
    return {"pass": ok, "mismatched_qubits": mismatched}


def check_gate_order(original: Circuit, schedule: RoutedSchedule) -> dict:
    """Map routed gates back to program qubits and compare every qubit's gate sequence.

    Inserted SWAPs are exactly the SWAPs beyond those the program contains;
    program SWAPs are matched by position in each qubit's sequence.
    """
    inverse = list(schedule.initial_mapping.inverse)
    inserted = set(schedule.swap_positions)
    routed_seq: dict[int, list] = defaultdict(list)
    problems: list[str] = []
    for i, g in enumerate(schedule.circuit.gates):
        if g.kind == SWAP and i in inserted:
            a, b = g.qubits
            inverse[a], inverse[b] = inverse[b], inverse[a]
            continue
        if g.kind == BARRIER:
            continue
        prog = tuple(inverse[p] for p in g.qubits)
        if EMPTY in prog:
            problems.append(f"gate {i} ({g.name}) acts on a physical qubit holding no program qubit")
            continue
        key = (g.name, g.params, prog, g.clbits)
        for q in prog:
            routed_seq[q].append(key)
    orig_seq: dict[int, list] = defaultdict(list)
    for g in original.gates:
        if g.kind == BARRIER:
            continue
        key = (g.name, g.params, g.qubits, g.clbits)
        for q in g.qubits:
            orig_seq[q].append(key)
    for q in range(original.num_qubits):
        if routed_seq.get(q, []) != orig_seq.get(q, []):
            problems.append(f"program qubit {q}: gate sequence differs")
    return {"pass": not problems, "problems": problems}


def check_equivalence(original: Circuit, schedule: RoutedSchedule, max_qubits: int = MAX_SIM_QUBITS) -> dict:
    """State fidelity between the original and the routed circuit read through the final mapping."""
    n = original.num_qubits
    if n > max_qubits:
        return {"skipped": f"{n} program qubits exceeds the simulation cap of {max_qubits}"}
    try:
        ideal = simulate(strip_measurements(original), max_qubits)
        routed, leaked = _simulate_routed(schedule, n, max_qubits)
    except ValueError as exc:
        return {"fidelity": 0.0, "pass": False, "error": str(exc)}
    fidelity = float(abs(np.vdot(ideal, routed)) ** 2)
    ok = fidelity >= 1 - FIDELITY_TOLERANCE and leaked <= FIDELITY_TOLERANCE
    return {"fidelity": fidelity, "pass": bool(ok)}


def verify_schedule(original: Circuit, schedule: RoutedSchedule, graph: CouplingGraph) -> dict:
    """Every oracle in one JSON-ready report; ``pass`` requires all of them."""
    violations = check_connectivity(schedule, graph)
    permutation = check_permutation(schedule)
    order = check_gate_order(original, schedule)
    equivalence = check_equivalence(original, schedule)
    overhead_ok = schedule.swap_overhead_cnots == schedule.circuit.cnot_count - original.cnot_count == 3 * schedule.swap_count
    ok = (
        not violations
        and permutation["pass"]
        and order["pass"]
        and equivalence.get("pass", True)
        and overhead_ok
    )
    return {
        "pass": bool(ok),
        "violations": violations,
        "permutation": permutation,
        "gate_order": order,
        "equivalence": equivalence,
        "overhead_consistent": overhead_ok,
    }
