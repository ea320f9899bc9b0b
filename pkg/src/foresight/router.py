"""Multi-candidate SWAP routing with relaxed routes and continuous pruning.

The router walks the two-qubit layers of the circuit DAG as-late-as-possible.
For every live branch it schedules the front-layer gates that are already
coupled; otherwise it folds the stored routes between the mapped endpoints
into SWAP lists, scores them with a topology-aware lookahead and keeps *every*
minimum-score candidate, plus the best of the fewest-SWAP ones, as a new
branch. Once a layer is processed the branch
frontier is pruned back to half of ``max_solutions`` whenever it overflows.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import BARRIER, MEASURE, Circuit
from .dag import CircuitDag, build_dag
from .schedule import (
    EMPTY,
    SOURCE_EVENT,
    SWAP_EVENT,
    Mapping,
    RoutedSchedule,
    emit_events,
    initial_mapping,
)
from .topology import CouplingGraph, DistanceMatrix, routing_capacity

SCORE_SLACK = 1e-9
SWAP_CNOTS = 3


def lookahead_horizon(mu_g: float) -> int:
    return max(1, math.ceil(10.0 * mu_g - 1e-9))


@dataclass(frozen=True)
class PostArray:
    """Two-qubit gates of the layers after the front, with their layer distance.

    ``one_qubit`` holds ``(qubit, delta, kind)`` rows for noise-aware scoring
    and is empty otherwise.
    """

    gates: tuple[int, ...]
    qa: np.ndarray
    qb: np.ndarray
    deltas: np.ndarray
    horizon: int
    one_qubit: tuple[tuple[int, int, str], ...] = ()

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def entries(self) -> list[tuple[int, int]]:
        return list(zip(self.gates, self.deltas.tolist()))

    def by_qubit(self, q: int) -> list[tuple[int, int]]:
        return [
            (g, int(d))
            for g, a, b, d in zip(self.gates, self.qa.tolist(), self.qb.tolist(), self.deltas)
            if q in (a, b)
        ]

    def decay(self, mu_g: float) -> np.ndarray:
        return np.exp(-((self.deltas / mu_g) ** 2))


def build_post(dag: CircuitDag, front_index: int, mu_g: float, with_one_qubit: bool = False) -> PostArray:
    horizon = lookahead_horizon(mu_g)
    gates, qa, qb, deltas = [], [], [], []
    singles: list[tuple[int, int, str]] = []
    last = min(dag.num_layers - 1, front_index + horizon)
    circuit_gates = dag.circuit.gates
    if with_one_qubit:
        for g in dag.layers[front_index] if front_index < dag.num_layers else ():
            for i in dag.attached.get(g, ()):
                op = circuit_gates[i]
                singles.append((op.qubits[0], 0, op.kind))
    for layer in range(front_index + 1, last + 1):
        delta = layer - front_index
        for g in dag.layers[layer]:
            a, b = circuit_gates[g].qubits
            gates.append(g)
            qa.append(a)
            qb.append(b)
            deltas.append(delta)
            if with_one_qubit:
                for i in dag.attached.get(g, ()):
                    op = circuit_gates[i]
                    singles.append((op.qubits[0], delta, op.kind))
    return PostArray(
        tuple(gates),
        np.asarray(qa, dtype=np.int64),
        np.asarray(qb, dtype=np.int64),
        np.asarray(deltas, dtype=float),
        horizon,
        tuple(singles),
    )


def _pi_array(mapping) -> np.ndarray:
    return np.asarray(mapping.pi if isinstance(mapping, Mapping) else mapping, dtype=np.int64)


def h_lookahead(mapping, post: PostArray, mu_g: float, dmat: DistanceMatrix) -> float:
    """Mean decayed distance of the lookahead gates under ``mapping``; 0 for an empty window."""
    if len(post) == 0:
        return 0.0
    pi = _pi_array(mapping)
    d = dmat.cost[pi[post.qa], pi[post.qb]]
    return float((d * post.decay(mu_g)).sum() / len(post))


def h_total(candidate: SwapCandidate, post: PostArray, mu_g: float, dmat: DistanceMatrix) -> float:
    scale = math.exp(-((len(post) / mu_g) ** 2))
    return h_lookahead(candidate.resulting_mapping, post, mu_g, dmat) + candidate.cnot_cost * scale


@dataclass(frozen=True)
class Fold:
    swaps: tuple[tuple[int, int], ...]
    meet: tuple[int, int]
    critical_path: int


def fold_path(path: Sequence[int], fold_edge_index: int | None = None) -> Fold:
    """SWAPs that walk both endpoints of ``path`` toward the edge ``fold_edge_index``.

    The left endpoint travels to ``path[m]`` and the right one to ``path[m+1]``;
    the two SWAP chains touch disjoint vertices so they run in parallel.
    """
    k = len(path) - 1
    if k < 1:
        raise ValueError("a path needs at least one edge")
    m = (k - 1) // 2 if fold_edge_index is None else fold_edge_index
    if not 0 <= m <= k - 1:
        raise ValueError(f"fold edge index {m} outside 0..{k - 1}")
    left = [(path[i], path[i + 1]) for i in range(m)]
    right = [(path[k - i], path[k - i - 1]) for i in range(k - 1 - m)]
    return Fold(tuple(left + right), (path[m], path[m + 1]), max(m, k - 1 - m))


def fold_positions(k: int) -> list[int]:
    """Midpoint first, then its neighbours, then the two ends."""
    mid = (k - 1) // 2
    out = []
    for m in (mid, mid - 1, mid + 1, 0, k - 1):
        if 0 <= m <= k - 1 and m not in out:
            out.append(m)
    return out


@dataclass
class SwapCandidate:
    swaps: tuple[tuple[int, int], ...]
    resulting_mapping: Mapping
    cnot_cost: float
    satisfied_gates: tuple[int, ...]
    score: float = 0.0
    key: tuple = ()


@dataclass
class PoolStats:
    paths_considered: int = 0
    combinations: int = 0
    split: bool = False


class _Scorer:
    """Per-run caches for candidate generation and scoring."""

    def __init__(
        self,
        dag: CircuitDag,
        graph: CouplingGraph,
        dmat: DistanceMatrix,
        mu_g: float,
        swap_weight: dict[tuple[int, int], float] | None = None,
        qubit_weight: dict[str, np.ndarray] | None = None,
    ) -> None:
        self.dag = dag
        self.graph = graph
        self.dmat = dmat
        self.mu = mu_g
        self.hops = dmat.shortest.tolist()
        self.cost = dmat.cost
        self.adjacent = [set(a) for a in graph.adjacency]
        self.swap_weight = swap_weight
        self.qubit_weight = qubit_weight
        self.pairs = [dag.circuit.gates[i].qubits if dag.circuit.gates[i].is_two_qubit else None for i in range(len(dag.circuit.gates))]
        self._options: dict[tuple[int, int], list] = {}
        self._post: dict[int, tuple] = {}

    def swap_cost(self, swaps) -> float:
        if self.swap_weight is None:
            return float(SWAP_CNOTS * len(swaps))
        w = self.swap_weight
        return math.fsum(SWAP_CNOTS * w[(a, b) if a < b else (b, a)] for a, b in swaps)

    def post(self, layer: int) -> tuple:
        cached = self._post.get(layer)
        if cached is None:
            post = build_post(self.dag, layer, self.mu, with_one_qubit=self.qubit_weight is not None)
            decay = post.decay(self.mu)
            singles = None
            if self.qubit_weight is not None and post.one_qubit:
                qs = np.asarray([q for q, _, _ in post.one_qubit], dtype=np.int64)
                ds = np.asarray([d for _, d, _ in post.one_qubit], dtype=float)
                kinds = [k for _, _, k in post.one_qubit]
                table = np.stack([self.qubit_weight[MEASURE if k == MEASURE else "one"] for k in kinds]) if kinds else None
                singles = (qs, np.exp(-((ds / self.mu) ** 2)), table)
            cached = (post, decay, math.exp(-((len(post) / self.mu) ** 2)), singles)
            if len(self._post) > 64:
                self._post.clear()
            self._post[layer] = cached
        return cached

    def options(self, pa: int, pb: int) -> list:
        """Folded routes for one gate: ``(key, swaps, footprint_mask)`` in preference order."""
        cached = self._options.get((pa, pb))
        if cached is None:
            cached = []
            for rank, path in enumerate(self.dmat.paths(pa, pb)):
                k = len(path) - 1
                mask = 0
                for v in path:
                    mask |= 1 << v
                for order, m in enumerate(fold_positions(k)):
                    fold = fold_path(path, m)
                    cached.append(((k, rank, order), fold.swaps, mask))
            self._options[(pa, pb)] = cached
        return cached

    def lookahead(self, pi: list[int], layer: int) -> float:
        post, decay, _, singles = self.post(layer)
        pi_arr = np.asarray(pi, dtype=np.int64)
        return float(self._look(pi_arr[None, :], post, decay, singles)[0])

    def _look(self, M: np.ndarray, post: PostArray, decay: np.ndarray, singles) -> np.ndarray:
        n_post = len(post)
        if n_post:
            d = self.cost[M[:, post.qa], M[:, post.qb]]
            total = d @ decay
        else:
            total = np.zeros(M.shape[0])
        if singles is not None:
            qs, w1, table = singles
            phys = M[:, qs]
            cols = np.arange(len(qs))
            total = total + (table[cols[None, :], phys] * w1).sum(axis=1)
        return total / max(n_post, 1)

    def pool(
        self,
        pending: Sequence[int],
        pi: list[int],
        inv: list[int],
        layer: int,
        stats: PoolStats | None = None,
    ) -> list[tuple[float, tuple, tuple, dict, tuple]]:
        """Minimum-score candidates for the unsatisfied gates in ``pending``.

        Returns ``(score, key, swaps, moves, satisfied)`` rows where ``moves``
        maps each displaced program qubit to its new physical qubit.
        """
        hops = self.hops
        pairs = self.pairs
        order = sorted(pending, key=lambda g: (-hops[pi[pairs[g][0]]][pi[pairs[g][1]]], g))
        per_gate = [self.options(pi[pairs[g][0]], pi[pairs[g][1]]) for g in order]
        if stats is not None:
            stats.paths_considered += sum(len(self.dmat.paths(pi[pairs[g][0]], pi[pairs[g][1]])) for g in order)

        combos: list[tuple[tuple, tuple]] = []
        if len(order) == 1:
            combos = [((opt[0],), opt[1]) for opt in per_gate[0]]
            best_cover = 1
        else:
            packed = []
            for lead in per_gate[0]:
                used = lead[2]
                keys = [lead[0]]
                swaps = list(lead[1])
                for opts in per_gate[1:]:
                    for opt in opts:
                        if not used & opt[2]:
                            used |= opt[2]
                            keys.append(opt[0])
                            swaps.extend(opt[1])
                            break
                    else:
                        keys.append(None)
                cover = sum(k is not None for k in keys)
                packed.append((cover, tuple(keys), tuple(swaps)))
            best_cover = max(p[0] for p in packed)
            combos = [(k, s) for c, k, s in packed if c == best_cover]
            if stats is not None and best_cover < len(order):
                stats.split = True
        if stats is not None:
            stats.combinations += len(combos)

        rows = []
        seen: set = set()
        adjacent = self.adjacent
        for key, swaps in combos:
            moved: dict[int, int] = {}
            for a, b in swaps:
                ia, ib = moved.get(a, inv[a]), moved.get(b, inv[b])
                moved[a], moved[b] = ib, ia
            moves = {q: p for p, q in moved.items() if q != EMPTY and pi[q] != p}
            sig = tuple(sorted(moves.items()))
            if sig in seen:
                continue
            seen.add(sig)
            satisfied = []
            for g in pending:
                qa, qb = pairs[g]
                if moves.get(qb, pi[qb]) in adjacent[moves.get(qa, pi[qa])]:
                    satisfied.append(g)
            rows.append((key, swaps, moves, tuple(satisfied)))

        post, decay, scale, singles = self.post(layer)
        M = np.tile(np.asarray(pi, dtype=np.int64), (len(rows), 1))
        for i, (_, _, moves, _) in enumerate(rows):
            if moves:
                M[i, list(moves.keys())] = list(moves.values())
        look = self._look(M, post, decay, singles)
        costs = np.asarray([self.swap_cost(r[1]) for r in rows])
        scores = look + costs * scale
        keep = scores <= scores.min() + SCORE_SLACK
        # The SWAP term is nearly zero once Post is long, so detours can win on
        # lookahead alone; the best fewest-SWAP option stays as a sibling and
        # cost pruning arbitrates between them.
        lengths = np.asarray([len(r[1]) for r in rows])
        fewest = lengths == lengths.min()
        keep |= fewest & (scores <= scores[fewest].min() + SCORE_SLACK)
        out = [
            (float(scores[i]), rows[i][0], rows[i][1], rows[i][2], rows[i][3])
            for i in range(len(rows))
            if keep[i]
        ]
        out.sort(key=lambda r: (r[0], _sortable(r[1])))
        return out


def _sortable(key: tuple) -> tuple:
    return tuple((1,) if k is None else (0,) + k for k in key)


def generate_candidate_pool(
    front: Sequence[int],
    mapping: Mapping,
    dmat: DistanceMatrix,
    post_layer: int,
    mu_g: float,
    dag: CircuitDag,
    stats: PoolStats | None = None,
) -> list[SwapCandidate]:
    """Public wrapper around the scorer: all minimum-``H_total`` candidates for ``front``,
    plus the best-scoring candidates among those with the fewest SWAPs.

    ``front`` may contain coupled gates; only uncoupled ones drive the search.
    ``post_layer`` is the DAG layer index of ``front`` (the lookahead starts after it).
    """
    scorer = _Scorer(dag, dmat.graph, dmat, mu_g)
    pi, inv = mapping.pi, mapping.inverse
    pending = [g for g in front if pi[dag.circuit.gates[g].qubits[1]] not in scorer.adjacent[pi[dag.circuit.gates[g].qubits[0]]]]
    if not pending:
        raise ValueError("every front gate is already executable")
    out = []
    for score, key, swaps, moves, satisfied in scorer.pool(pending, pi, inv, post_layer, stats):
        m = mapping.copy()
        for a, b in swaps:
            m.swap_physical(a, b)
        out.append(SwapCandidate(swaps, m, scorer.swap_cost(swaps), satisfied, score, key))
    return out


# ---------------------------------------------------------------------------
# solution tree


class TreeNode:
    __slots__ = ("id", "parent", "events", "cnot_cost", "layer", "children", "mapping")

    def __init__(self, node_id: int, parent: TreeNode | None, cnot_cost: int, layer: int) -> None:
        self.id = node_id
        self.parent = parent
        self.events: list[tuple] = []
        self.cnot_cost = cnot_cost
        self.layer = layer
        self.children = 0
        self.mapping: tuple[int, ...] | None = None

    def chain(self) -> list[TreeNode]:
        out = []
        node = self
        while node is not None:
            out.append(node)
            node = node.parent
        out.reverse()
        return out


class SolutionTree:
    """Parent-pointer tree; pruned branches are released as soon as they die.

    With ``keep_nodes`` every node (and its mapping) is retained for inspection.
    """

    def __init__(self, max_solutions: int, keep_nodes: bool = False) -> None:
        self.max_solutions = max_solutions
        self.keep_nodes = keep_nodes
        self.nodes: list[TreeNode] = []
        self.live = 0
        self.peak_live = 0
        self._next = 0

    def add(self, parent: TreeNode | None, cnot_cost: int, layer: int) -> TreeNode:
        node = TreeNode(self._next, parent, cnot_cost, layer)
        self._next += 1
        if parent is not None:
            parent.children += 1
        self.live += 1
        self.peak_live = max(self.peak_live, self.live)
        if self.keep_nodes:
            self.nodes.append(node)
        return node

    def release(self, node: TreeNode) -> None:
        """Drop a dead leaf and every ancestor left without children."""
        while node is not None and node.children == 0:
            self.live -= 1
            parent = node.parent
            if parent is not None:
                parent.children -= 1
            node = parent

    @property
    def created(self) -> int:
        return self._next


class _Leaf:
    __slots__ = ("node", "pi", "inv", "pending")

    def __init__(self, node: TreeNode, pi: list[int], inv: list[int], pending: tuple[int, ...]) -> None:
        self.node = node
        self.pi = pi
        self.inv = inv
        self.pending = pending


def prune(leaves: list, max_solutions: int, rng: random.Random, cost=None) -> list:
    """Keep minimum-cost leaves, one per mapping, at most ``max_solutions // 2`` of them."""
    cost = cost or (lambda leaf: leaf.node.cnot_cost)
    costs = [cost(leaf) for leaf in leaves]
    best = min(costs)
    kept, seen = [], set()
    for leaf, c in sorted(zip(leaves, costs), key=lambda lc: lc[0].node.id):
        if c > best:
            continue
        sig = tuple(leaf.pi)
        if sig in seen:
            continue
        seen.add(sig)
        kept.append(leaf)
    cap = max(1, max_solutions // 2)
    if len(kept) > cap:
        kept = sorted(rng.sample(kept, cap), key=lambda leaf: leaf.node.id)
    return kept


@dataclass
class ForesightParams:
    delta: int = 2
    max_solutions: int = 64
    seed: int = 0
    noise_adaptive: bool = False
    max_paths_per_pair: int = 32
    initial_policy: str = "degree_matched"


@dataclass
class _Run:
    dag: CircuitDag
    graph: CouplingGraph
    scorer: _Scorer
    tree: SolutionTree
    rng: random.Random
    max_solutions: int
    stats: dict = field(default_factory=dict)


def route_foresight(
    circuit: Circuit,
    graph: CouplingGraph,
    params: ForesightParams | None = None,
    *,
    initial: Mapping | None = None,
    dmat: DistanceMatrix | None = None,
    keep_tree: bool = False,
    leaf_selector=None,
    scorer_weights: tuple | None = None,
) -> RoutedSchedule:
    """Route ``circuit`` onto ``graph``; see the module docstring for the search."""
    params = params or ForesightParams()
    if params.noise_adaptive:
        from .noise import route_noise_adaptive

        return route_noise_adaptive(circuit, graph, params, initial=initial, keep_tree=keep_tree)
    if circuit.num_qubits > graph.num_physical:
        raise ValueError(f"circuit needs {circuit.num_qubits} qubits but the device has {graph.num_physical}")
    if params.max_solutions < 2:
        raise ValueError("max_solutions must be at least 2")

    dag = build_dag(circuit)
    mu = routing_capacity(graph)
    if dmat is None:
        dmat = DistanceMatrix(graph, params.delta, params.max_paths_per_pair)
    start = initial or initial_mapping(circuit, graph, params.initial_policy, params.seed, dmat)
    swap_weight, qubit_weight = scorer_weights if scorer_weights else (None, None)
    scorer = _Scorer(dag, graph, dmat, mu, swap_weight, qubit_weight)
    tree = SolutionTree(params.max_solutions, keep_nodes=keep_tree)
    run = _Run(dag, graph, scorer, tree, random.Random(params.seed), params.max_solutions)
    run.stats = {
        "layers": dag.num_layers,
        "prunes": [],
        "intra_layer_prunes": 0,
        "max_frontier": 1,
        "max_round": 1,
        "paths_considered": 0,
        "expansions": 0,
        "pool_sizes": [],
        "splits": 0,
    }

    root = tree.add(None, 0, -1)
    root.events.append(SOURCE_EVENT)
    leaf = _Leaf(root, list(start.pi), list(start.inverse), ())
    _close_layer(run, leaf, -1)
    if keep_tree:
        root.mapping = tuple(leaf.pi)
    leaves = [leaf]

    for layer in range(dag.num_layers):
        leaves = _process_layer(run, leaves, layer)

    chosen = _select(run, leaves, start, leaf_selector)
    return chosen


def _close_layer(run: _Run, leaf: _Leaf, layer: int) -> None:
    for b in run.dag.barriers_after.get(layer, ()):
        qubits = run.dag.circuit.gates[b].qubits
        leaf.node.events.append((b, tuple(leaf.pi[q] for q in qubits)))


def _schedule_ready(run: _Run, leaf: _Leaf) -> None:
    adjacent = run.scorer.adjacent
    pairs = run.scorer.pairs
    gates = run.dag.circuit.gates
    pi = leaf.pi
    rest = []
    node = leaf.node
    for g in leaf.pending:
        a, b = pairs[g]
        pa, pb = pi[a], pi[b]
        if pb in adjacent[pa]:
            node.events.append((g, pa, pb))
            node.cnot_cost += gates[g].cnot_count
        else:
            rest.append(g)
    leaf.pending = tuple(rest)


def _process_layer(run: _Run, leaves: list[_Leaf], layer: int) -> list[_Leaf]:
    front = tuple(run.dag.layers[layer])
    tree = run.tree
    for leaf in leaves:
        leaf.pending = front
        leaf.node.layer = layer
    done: list[_Leaf] = []
    active = leaves
    while active:
        nxt: list[_Leaf] = []
        for leaf in active:
            _schedule_ready(run, leaf)
            if not leaf.pending:
                _close_layer(run, leaf, layer)
                done.append(leaf)
                continue
            nxt.extend(_expand(run, leaf, layer))
        if len(nxt) > run.max_solutions:
            run.stats["intra_layer_prunes"] += 1
            kept = prune(nxt, run.max_solutions, run.rng, cost=lambda lf: _estimate(run, lf))
            _release_dropped(tree, nxt, kept)
            nxt = kept
        run.stats["max_round"] = max(run.stats["max_round"], len(nxt))
        active = nxt

    before = len(done)
    if before > run.max_solutions:
        kept = prune(done, run.max_solutions, run.rng)
        _release_dropped(tree, done, kept)
        entry = {"layer": layer, "before": before, "after": len(kept)}
        entry["distinct_mappings"] = len({tuple(lf.pi) for lf in kept}) == len(kept)
        run.stats["prunes"].append(entry)
        done = kept
    run.stats["max_frontier"] = max(run.stats["max_frontier"], len(done))
    return done


def _estimate(run: _Run, leaf: _Leaf) -> float:
    """Layer-completion cost estimate used when pruning branches mid-layer."""
    hops = run.scorer.hops
    pairs = run.scorer.pairs
    pi = leaf.pi
    extra = 0
    for g in leaf.pending:
        a, b = pairs[g]
        extra += SWAP_CNOTS * (hops[pi[a]][pi[b]] - 1) + 1
    return leaf.node.cnot_cost + extra


def _release_dropped(tree: SolutionTree, before: list[_Leaf], kept: list[_Leaf]) -> None:
    keep_ids = {id(lf) for lf in kept}
    for lf in before:
        if id(lf) not in keep_ids:
            tree.release(lf.node)


def _expand(run: _Run, leaf: _Leaf, layer: int) -> list[_Leaf]:
    stats = PoolStats()
    pool = run.scorer.pool(leaf.pending, leaf.pi, leaf.inv, layer, stats)
    run.stats["paths_considered"] += stats.paths_considered
    run.stats["expansions"] += 1
    run.stats["pool_sizes"].append(len(pool))
    if stats.split:
        run.stats["splits"] += 1
    gates = run.dag.circuit.gates
    children = []
    for _score, _key, swaps, moves, satisfied in pool:
        if len(pool) == 1:
            node = leaf.node
            pi, inv = leaf.pi, leaf.inv
        else:
            node = run.tree.add(leaf.node, leaf.node.cnot_cost, layer)
            pi, inv = list(leaf.pi), list(leaf.inv)
        for a, b in swaps:
            qa, qb = inv[a], inv[b]
            inv[a], inv[b] = qb, qa
            if qa != EMPTY:
                pi[qa] = b
            if qb != EMPTY:
                pi[qb] = a
            node.events.append((SWAP_EVENT, a, b))
        node.cnot_cost += SWAP_CNOTS * len(swaps)
        for g in satisfied:
            qa, qb = run.scorer.pairs[g]
            node.events.append((g, pi[qa], pi[qb]))
            node.cnot_cost += gates[g].cnot_count
        sat = set(satisfied)
        pending = tuple(g for g in leaf.pending if g not in sat)
        if run.tree.keep_nodes:
            node.mapping = tuple(pi)
        children.append(_Leaf(node, pi, inv, pending))
    return children


def _trace(run: _Run, leaf: _Leaf, start: Mapping) -> tuple[Circuit, tuple[int, ...]]:
    chunks = [node.events for node in leaf.node.chain()]
    return emit_events(run.dag, run.graph.num_physical, start, chunks)


def _select(run: _Run, leaves: list[_Leaf], start: Mapping, leaf_selector) -> RoutedSchedule:
    best_cost = min(lf.node.cnot_cost for lf in leaves)
    finalists = [lf for lf in leaves if lf.node.cnot_cost == best_cost] if leaf_selector is None else leaves
    built = []
    for lf in sorted(finalists, key=lambda x: x.node.id):
        circ, swaps = _trace(run, lf, start)
        built.append((lf, circ, swaps))
    if leaf_selector is None:
        lf, circ, swaps = min(built, key=lambda t: (t[1].depth(), t[0].node.id))
    else:
        lf, circ, swaps = leaf_selector(built)
    run.stats["peak_tree_nodes"] = run.tree.peak_live
    run.stats["nodes_created"] = run.tree.created
    run.stats["final_frontier"] = len(leaves)
    original_cnots = run.dag.circuit.cnot_count
    schedule = RoutedSchedule(
        circuit=circ,
        initial_mapping=start.copy(),
        final_mapping=Mapping(list(lf.pi), list(lf.inv)),
        swap_count=len(swaps),
        swap_overhead_cnots=circ.cnot_count - original_cnots,
        depth=circ.depth(),
        router="foresight",
        swap_positions=swaps,
        stats=run.stats,
    )
    schedule.stats["leaf_cnot_cost"] = lf.node.cnot_cost
    if run.tree.keep_nodes:
        schedule.stats["tree"] = run.tree
    return schedule
