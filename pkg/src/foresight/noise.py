"""Error models, expected probability of success, and error-aware routing."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .circuit import BARRIER, CNOT, MEASURE, SWAP, Circuit
from .schedule import Mapping, RoutedSchedule
from .topology import CouplingGraph, DistanceMatrix

DEFAULT_CNOT_ERROR = 0.01
DEFAULT_ONE_QUBIT_ERROR = 0.001
DEFAULT_MEASURE_ERROR = 0.01
# keeps -ln(1 - eps) finite for eps == 1
_MAX_ERROR = 1.0 - 1e-12


@dataclass(frozen=True)
class ErrorModel:
    num_physical: int
    cnot_error: dict[tuple[int, int], float]
    one_qubit_error: tuple[float, ...]
    measure_error: tuple[float, ...]
    coherence_ns: tuple[float, ...]
    one_qubit_time_ns: float = 25.0
    two_qubit_time_ns: float = 32.0

    def __post_init__(self) -> None:
        values = list(self.cnot_error.values()) + list(self.one_qubit_error) + list(self.measure_error)
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ValueError("error probabilities must lie in [0, 1]")
        if any(t <= 0 for t in self.coherence_ns):
            raise ValueError("coherence times must be positive")

    @classmethod
    def from_graph(cls, graph: CouplingGraph) -> ErrorModel:
        n = graph.num_physical
        return cls(
            n,
            {e: graph.edge_error(*e) for e in graph.edges},
            tuple(graph.qubit_error(q) for q in range(n)),
            tuple(graph.readout_error(q) for q in range(n)),
            tuple(graph.coherence_ns(q) for q in range(n)),
            graph.one_qubit_time_ns,
            graph.two_qubit_time_ns,
        )

    @classmethod
    def uniform(
        cls,
        graph: CouplingGraph,
        cnot_error: float = DEFAULT_CNOT_ERROR,
        one_qubit_error: float = DEFAULT_ONE_QUBIT_ERROR,
        measure_error: float = DEFAULT_MEASURE_ERROR,
        coherence_us: float | None = None,
    ) -> ErrorModel:
        n = graph.num_physical
        t = math.inf if coherence_us is None else coherence_us * 1000.0
        return cls(
            n,
            {e: cnot_error for e in graph.edges},
            (one_qubit_error,) * n,
            (measure_error,) * n,
            (t,) * n,
            graph.one_qubit_time_ns,
            graph.two_qubit_time_ns,
        )

    def edge(self, a: int, b: int) -> float:
        return self.cnot_error[(a, b) if a < b else (b, a)]

    def swap_log_costs(self) -> dict[tuple[int, int], float]:
        """``-ln`` of the success probability of one SWAP per edge.

        A SWAP is three CNOTs plus three CNOT durations of decoherence on both qubits.
        """
        span = 3 * self.two_qubit_time_ns
        return {
            (a, b): -3 * math.log1p(-min(p, _MAX_ERROR)) + span / self.coherence_ns[a] + span / self.coherence_ns[b]
            for (a, b), p in self.cnot_error.items()
        }

    def edge_weights(self) -> dict[tuple[int, int], float]:
        """SWAP log-costs scaled to mean 1, so they stay comparable to hop counts; all 1.0 when uniform."""
        raw = self.swap_log_costs()
        mean = math.fsum(raw.values()) / len(raw) if raw else 0.0
        if len(set(raw.values())) <= 1 or mean == 0.0:
            return {e: 1.0 for e in raw}
        # an error-free edge still costs a SWAP; keep it strictly positive
        return {e: max(w / mean, 1e-6) for e, w in raw.items()}

    def qubit_weights(self) -> dict[str, np.ndarray] | None:
        """Per-physical-qubit error weights for one-qubit gates and readout, on the edge-weight scale.

        ``None`` when both are uniform: a constant per-gate term cannot change any ranking.
        """
        one = np.asarray([-math.log1p(-min(p, _MAX_ERROR)) for p in self.one_qubit_error])
        meas = np.asarray([-math.log1p(-min(p, _MAX_ERROR)) for p in self.measure_error])
        if np.ptp(one) == 0 and np.ptp(meas) == 0:
            return None
        raw = self.swap_log_costs()
        mean = math.fsum(raw.values()) / len(raw) if raw else 0.0
        scale = 1.0 / mean if mean > 0 else 1.0
        return {"one": one * scale, MEASURE: meas * scale}


def _log_success(p: float) -> float:
    return -math.inf if p >= 1.0 else math.log1p(-p)


def _log_terms(circuit: Circuit, model: ErrorModel) -> tuple[list[float], list[float]]:
    """Log success factors of every operation and of every qubit's decoherence."""
    gate_logs: list[float] = []
    clock = [0.0] * circuit.num_qubits
    first = [math.inf] * circuit.num_qubits
    last = [0.0] * circuit.num_qubits
    t1, t2 = model.one_qubit_time_ns, model.two_qubit_time_ns
    for g in circuit.gates:
        if g.kind == BARRIER:
            t = max(clock[q] for q in g.qubits)
            for q in g.qubits:
                clock[q] = t
            continue
        if g.kind == CNOT:
            gate_logs.append(_log_success(model.edge(*g.qubits)))
            duration = t2
        elif g.kind == SWAP:
            gate_logs.extend([_log_success(model.edge(*g.qubits))] * 3)
            duration = 3 * t2
        elif g.kind == MEASURE:
            gate_logs.append(_log_success(model.measure_error[g.qubits[0]]))
            duration = t1
        else:
            gate_logs.append(_log_success(model.one_qubit_error[g.qubits[0]]))
            duration = t1
        start = max(clock[q] for q in g.qubits)
        for q in g.qubits:
            clock[q] = start + duration
            first[q] = min(first[q], start)
            last[q] = start + duration
    decay_logs = [
        -(last[q] - first[q]) / model.coherence_ns[q]
        for q in range(circuit.num_qubits)
        if first[q] != math.inf and math.isfinite(model.coherence_ns[q])
    ]
    return gate_logs, decay_logs


def eps(schedule: RoutedSchedule | Circuit, model: ErrorModel) -> float:
    """Probability that no operation fails and no qubit decoheres over its busy span.

    Busy spans come from as-soon-as-possible timing; a SWAP lasts three CNOTs.
    """
    circuit = schedule.circuit if isinstance(schedule, RoutedSchedule) else schedule
    if circuit.num_qubits > model.num_physical:
        raise ValueError("circuit is wider than the error model")
    gate_logs, decay_logs = _log_terms(circuit, model)
    if any(x == -math.inf for x in gate_logs):
        return 0.0
    return math.exp(math.fsum(gate_logs) + math.fsum(decay_logs))


def duration_ns(circuit: Circuit, model: ErrorModel) -> float:
    """Makespan under as-soon-as-possible timing."""
    clock = [0.0] * circuit.num_qubits
    for g in circuit.gates:
        if g.kind == BARRIER:
            d = 0.0
        elif g.kind == CNOT:
            d = model.two_qubit_time_ns
        elif g.kind == SWAP:
            d = 3 * model.two_qubit_time_ns
        else:
            d = model.one_qubit_time_ns
        t = max(clock[q] for q in g.qubits) + d
        for q in g.qubits:
            clock[q] = t
    return max(clock, default=0.0)


def route_noise_adaptive(
    circuit: Circuit,
    graph: CouplingGraph,
    params=None,
    *,
    initial: Mapping | None = None,
    keep_tree: bool = False,
    model: ErrorModel | None = None,
) -> RoutedSchedule:
    """Error-aware variant of the tree router.

    Candidate SWAPs are charged by the log-EPS cost of the edges they use,
    so among equally short routes the reliable one scores lower; one-qubit
    gates and readouts join the lookahead, and the finished schedule with
    the highest EPS wins.
    """
    from .router import ForesightParams, route_foresight

    params = replace(params or ForesightParams(), noise_adaptive=False)
    warnings: list[str] = []
    if model is None:
        if graph.has_error_data:
            model = ErrorModel.from_graph(graph)
        else:
            model = ErrorModel.uniform(graph)
            warnings.append("topology has no error data; using a uniform error model")

    weights = model.edge_weights()
    uniform = all(w == 1.0 for w in weights.values())
    # Lookahead distances stay in hops: weighted distances pull qubits onto
    # reliable regions at the price of extra SWAPs, which costs more EPS than it saves.
    dmat = DistanceMatrix(graph, params.delta, params.max_paths_per_pair)
    qubit_weight = model.qubit_weights()
    swap_weight = None if uniform else weights

    def by_eps(built):
        scored = [(eps(circ, model), lf.node.cnot_cost, circ.depth(), lf.node.id, lf, circ, sw) for lf, circ, sw in built]
        best = max(scored, key=lambda s: (s[0], -s[1], -s[2], -s[3]))
        return best[4], best[5], best[6]

    schedule = route_foresight(
        circuit,
        graph,
        params,
        initial=initial,
        dmat=dmat,
        keep_tree=keep_tree,
        leaf_selector=by_eps,
        scorer_weights=(swap_weight, qubit_weight),
    )
    schedule.router = "foresight-noise"
    schedule.eps = eps(schedule, model)
    schedule.warnings.extend(warnings)
    return schedule
