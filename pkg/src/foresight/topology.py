"""Coupling graphs, routing capacity and the relaxed distance matrix."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

DEFAULT_ONE_QUBIT_TIME_NS = 25.0
DEFAULT_TWO_QUBIT_TIME_NS = 32.0
DEFAULT_MAX_PATHS = 32

_JSON_KEYS = {
    "name",
    "num_qubits",
    "edges",
    "cnot_error",
    "one_qubit_error",
    "measure_error",
    "coherence_time_us",
    "one_qubit_time_ns",
    "two_qubit_time_ns",
}


class TopologyError(ValueError):
    pass


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class CouplingGraph:
    """Undirected device connectivity with optional calibration data.

    Error fields left as ``None`` mean "not supplied"; accessors then report
    zero error and infinite coherence.
    """

    num_physical: int
    edges: tuple[tuple[int, int], ...]
    name: str = "device"
    cnot_error: dict[tuple[int, int], float] | None = field(default=None, hash=False)
    one_qubit_error: tuple[float, ...] | None = None
    measure_error: tuple[float, ...] | None = None
    coherence_time_us: tuple[float, ...] | None = None
    one_qubit_time_ns: float = DEFAULT_ONE_QUBIT_TIME_NS
    two_qubit_time_ns: float = DEFAULT_TWO_QUBIT_TIME_NS

    def __post_init__(self) -> None:
        n = self.num_physical
        if n < 1:
            raise TopologyError("graph needs at least one qubit")
        seen: set[tuple[int, int]] = set()
        norm = []
        for a, b in self.edges:
            if a == b:
                raise TopologyError(f"self-loop on qubit {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise TopologyError(f"edge ({a},{b}) outside 0..{n - 1}")
            e = _edge(int(a), int(b))
            if e in seen:
                raise TopologyError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        if self.cnot_error is not None:
            errs = {}
            for (a, b), p in self.cnot_error.items():
                e = _edge(a, b)
                if e not in seen:
                    raise TopologyError(f"cnot_error given for non-edge {e}")
                errs[e] = float(p)
            object.__setattr__(self, "cnot_error", errs)
            _check_probs(errs.values(), "cnot_error")
        for name in ("one_qubit_error", "measure_error", "coherence_time_us"):
            vals = getattr(self, name)
            if vals is None:
                continue
            vals = tuple(float(v) for v in vals)
            if len(vals) != n:
                raise TopologyError(f"{name} needs {n} entries, got {len(vals)}")
            object.__setattr__(self, name, vals)
            if name == "coherence_time_us":
                if any(v <= 0 for v in vals):
                    raise TopologyError("coherence times must be positive")
            else:
                _check_probs(vals, name)
        if self.one_qubit_time_ns <= 0 or self.two_qubit_time_ns <= 0:
            raise TopologyError("gate durations must be positive")
        if not self._connected():
            raise TopologyError(f"coupling graph {self.name!r} is disconnected")

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_physical

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_physical)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return _edge(a, b) in self.edge_set

    def degree(self, q: int) -> int:
        return len(self.adjacency[q])

    @property
    def mu(self) -> float:
        return routing_capacity(self)

    @property
    def has_error_data(self) -> bool:
        return any(
            x is not None
            for x in (self.cnot_error, self.one_qubit_error, self.measure_error, self.coherence_time_us)
        )

    def edge_error(self, a: int, b: int) -> float:
        if self.cnot_error is None:
            return 0.0
        return self.cnot_error.get(_edge(a, b), 0.0)

    def qubit_error(self, q: int) -> float:
        return 0.0 if self.one_qubit_error is None else self.one_qubit_error[q]

    def readout_error(self, q: int) -> float:
        return 0.0 if self.measure_error is None else self.measure_error[q]

    def coherence_ns(self, q: int) -> float:
        return math.inf if self.coherence_time_us is None else self.coherence_time_us[q] * 1000.0

    def with_errors(self, **kwargs) -> CouplingGraph:
        return replace(self, **kwargs)


def _check_probs(values, name: str) -> None:
    for p in values:
        if not 0.0 <= p <= 1.0:
            raise TopologyError(f"{name} value {p} outside [0, 1]")


def routing_capacity(graph: CouplingGraph) -> float:
    """Links per physical qubit."""
    return len(graph.edges) / graph.num_physical


# ---------------------------------------------------------------------------
# builtin devices


def grid(m: int, n: int) -> CouplingGraph:
    if m < 2 or n < 2:
        raise TopologyError("grid dimensions must be at least 2")
    edges = []
    for r in range(m):
        for c in range(n):
            q = r * n + c
            if c + 1 < n:
                edges.append((q, q + 1))
            if r + 1 < m:
                edges.append((q, q + n))
    return CouplingGraph(m * n, tuple(edges), name=f"grid({m},{n})")


def ring(k: int) -> CouplingGraph:
    if k < 3:
        raise TopologyError("a ring needs at least 3 qubits")
    return CouplingGraph(k, tuple((i, (i + 1) % k) for i in range(k)), name=f"ring({k})")


def line(k: int) -> CouplingGraph:
    if k < 2:
        raise TopologyError("a line needs at least 2 qubits")
    return CouplingGraph(k, tuple((i, i + 1) for i in range(k - 1)), name=f"line({k})")


_DATA_DEVICES = ("tokyo", "sycamore53", "aspen32")
_PARAM_RE = re.compile(r"^(grid|ring|line)\s*[(:]\s*(\d+)\s*(?:[,x]\s*(\d+))?\s*\)?$")


def builtin_topology(name: str) -> CouplingGraph:
    """Named device: ``tokyo``, ``sycamore53``, ``aspen32``, ``grid(m,n)``, ``ring(k)``, ``line(k)``."""
    key = name.strip().lower()
    if key in _DATA_DEVICES:
        text = resources.files("foresight.data").joinpath(f"{key}.json").read_text(encoding="utf-8")
        return topology_from_dict(json.loads(text))
    m = _PARAM_RE.match(key)
    if m is None:
        raise TopologyError(f"unknown topology {name!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if kind == "grid":
        if b is None:
            raise TopologyError("grid needs two dimensions, e.g. grid(5,4)")
        return grid(a, int(b))
    if b is not None:
        raise TopologyError(f"{kind} takes a single size")
    return ring(a) if kind == "ring" else line(a)


def resolve_topology(spec: str) -> CouplingGraph:
    """Builtin name or path to a topology JSON file."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        return load_topology(path)
    return builtin_topology(spec)


# ---------------------------------------------------------------------------
# JSON


def topology_from_dict(data: dict) -> CouplingGraph:
    if not isinstance(data, dict):
        raise TopologyError("topology JSON must be an object")
    unknown = set(data) - _JSON_KEYS
    if unknown:
        raise TopologyError(f"unknown topology keys: {sorted(unknown)}")
    try:
        n = int(data["num_qubits"])
        edges = tuple((int(a), int(b)) for a, b in data["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise TopologyError(f"malformed topology: {exc}") from exc
    cnot = None
    if "cnot_error" in data:
        cnot = {}
        for key, p in data["cnot_error"].items():
            try:
                a, b = (int(x) for x in key.split("-"))
            except ValueError as exc:
                raise TopologyError(f"bad cnot_error key {key!r}") from exc
            cnot[(a, b)] = float(p)
    kwargs = {}
    for key in ("one_qubit_time_ns", "two_qubit_time_ns"):
        if key in data:
            kwargs[key] = float(data[key])
    return CouplingGraph(
        n,
        edges,
        name=str(data.get("name", "device")),
        cnot_error=cnot,
        one_qubit_error=data.get("one_qubit_error"),
        measure_error=data.get("measure_error"),
        coherence_time_us=data.get("coherence_time_us"),
        **kwargs,
    )


def topology_to_dict(graph: CouplingGraph) -> dict:
    out: dict = {"name": graph.name, "num_qubits": graph.num_physical, "edges": [list(e) for e in graph.edges]}
    if graph.cnot_error is not None:
        out["cnot_error"] = {f"{a}-{b}": p for (a, b), p in sorted(graph.cnot_error.items())}
    for key in ("one_qubit_error", "measure_error", "coherence_time_us"):
        val = getattr(graph, key)
        if val is not None:
            out[key] = list(val)
    out["one_qubit_time_ns"] = graph.one_qubit_time_ns
    out["two_qubit_time_ns"] = graph.two_qubit_time_ns
    return out


def load_topology(path: str | Path) -> CouplingGraph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TopologyError(f"{path}: malformed JSON ({exc})") from exc
    return topology_from_dict(data)


def save_topology(graph: CouplingGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(topology_to_dict(graph), indent=1) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# distance matrix


def all_pairs_hops(graph: CouplingGraph) -> np.ndarray:
    n = graph.num_physical
    rows = [a for a, b in graph.edges] + [b for a, b in graph.edges]
    cols = [b for a, b in graph.edges] + [a for a, b in graph.edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    dist = shortest_path(adj, method="D", unweighted=True, directed=False)
    if np.isinf(dist).any():
        raise TopologyError(f"coupling graph {graph.name!r} is disconnected")
    return dist.astype(np.int64)


class DistanceMatrix:
    """Shortest hop counts plus, per ordered pair, the simple paths whose
    length lies within ``delta`` edges of the shortest.

    Path lists are built on first request and memoised, so a matrix for a
    500-qubit device costs only the pairs a routing run actually touches.
    """

    def __init__(
        self,
        graph: CouplingGraph,
        delta: int = 2,
        max_paths_per_pair: int | None = DEFAULT_MAX_PATHS,
    ) -> None:
        if delta < 0:
            raise ValueError("delta must be non-negative")
        if max_paths_per_pair is not None and max_paths_per_pair < 1:
            raise ValueError("max_paths_per_pair must be at least 1")
        self.graph = graph
        self.delta = delta
        self.max_paths = max_paths_per_pair
        self.shortest = all_pairs_hops(graph)
        # float copy used by the vectorised lookahead scoring
        self.cost = self.shortest.astype(float)
        self._adj = graph.adjacency
        self._hops = self.shortest.tolist()
        self._paths: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}

    @property
    def num_physical(self) -> int:
        return self.graph.num_physical

    def distance(self, i: int, j: int) -> int:
        return self._hops[i][j]

    def paths(self, i: int, j: int) -> tuple[tuple[int, ...], ...]:
        key = (i, j)
        cached = self._paths.get(key)
        if cached is None:
            cached = self._enumerate(i, j)
            self._paths[key] = cached
        return cached

    def materialize(self) -> DistanceMatrix:
        n = self.num_physical
        for i in range(n):
            for j in range(n):
                self.paths(i, j)
        return self

    def _enumerate(self, s: int, t: int) -> tuple[tuple[int, ...], ...]:
        if s == t:
            return ((s,),)
        base = self._hops[s][t]
        cap = self.max_paths
        found: list[tuple[int, ...]] = []
        for length in range(base, base + self.delta + 1):
            remaining = None if cap is None else cap - len(found)
            if remaining is not None and remaining <= 0:
                break
            found.extend(self._paths_of_length(s, t, length, remaining))
        return tuple(found)

    def _paths_of_length(self, s: int, t: int, length: int, limit: int | None) -> list[tuple[int, ...]]:
        """Simple s->t paths with exactly ``length`` edges, lexicographic order."""
        hops_t = [row[t] for row in self._hops]
        adj = self._adj
        out: list[tuple[int, ...]] = []
        path = [s]
        on_path = {s}

        def walk(v: int) -> bool:
            left = length - (len(path) - 1)
            for w in adj[v]:
                if w in on_path:
                    continue
                if w == t:
                    if left == 1:
                        out.append(tuple(path) + (t,))
                        if limit is not None and len(out) >= limit:
                            return True
                    continue
                if hops_t[w] > left - 1 or left - 1 < 1:
                    continue
                path.append(w)
                on_path.add(w)
                done = walk(w)
                path.pop()
                on_path.discard(w)
                if done:
                    return True
            return False

        walk(s)
        return out


def compute_distance_matrix(
    graph: CouplingGraph,
    delta: int = 2,
    max_paths_per_pair: int | None = DEFAULT_MAX_PATHS,
) -> DistanceMatrix:
    return DistanceMatrix(graph, delta, max_paths_per_pair)
