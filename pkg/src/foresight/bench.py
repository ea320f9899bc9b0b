"""Benchmark harness: per-run records, suite aggregates and parameter sweeps."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

from .baseline import GreedyParams, route_greedy, route_hybrid
from .circuit import Circuit
from .noise import ErrorModel, eps
from .qasm import load_qasm
from .router import ForesightParams, route_foresight
from .schedule import RoutedSchedule
from .topology import CouplingGraph, DistanceMatrix

REPORT_VERSION = 1
ROUTERS = ("foresight", "greedy", "hybrid", "foresight-noise")


def load_corpus(directory: str | Path) -> list[Circuit]:
    paths = sorted(Path(directory).glob("*.qasm"))
    if not paths:
        raise ValueError(f"no .qasm files in {directory}")
    return [load_qasm(p) for p in paths]


def run_router(
    circuit: Circuit,
    graph: CouplingGraph,
    router: str,
    params: ForesightParams,
    dmat: DistanceMatrix | None = None,
) -> RoutedSchedule:
    if router == "foresight":
        return route_foresight(circuit, graph, params, dmat=dmat)
    if router == "foresight-noise":
        return route_foresight(circuit, graph, ForesightParams(**{**asdict(params), "noise_adaptive": True}))
    if router == "greedy":
        return route_greedy(
            circuit, graph, GreedyParams(seed=params.seed, initial_policy=params.initial_policy), dmat=dmat
        )
    if router == "hybrid":
        return route_hybrid(
            circuit, graph, params, GreedyParams(seed=params.seed, initial_policy=params.initial_policy)
        )
    raise ValueError(f"unknown router {router!r}; choose from {', '.join(ROUTERS)}")


def error_model(graph: CouplingGraph) -> tuple[ErrorModel, bool]:
    """The graph's own error data, or a uniform default model (second value False)."""
    if graph.has_error_data:
        return ErrorModel.from_graph(graph), True
    return ErrorModel.uniform(graph), False


def make_record(
    circuit: Circuit,
    graph: CouplingGraph,
    schedule: RoutedSchedule,
    params: ForesightParams,
    wall_ms: float,
) -> dict:
    model, calibrated = error_model(graph)
    value = schedule.eps if schedule.eps is not None else eps(schedule, model)
    stats = schedule.stats
    record = {
        "name": circuit.name,
        "topology": graph.name,
        "router": schedule.router,
        "seed": params.seed,
        "params": {
            "delta": params.delta,
            "max_solutions": params.max_solutions,
            "initial_mapping": params.initial_policy,
        },
        "num_qubits": circuit.num_qubits,
        "original_cnots": circuit.cnot_count,
        "original_gates": len(circuit.gates),
        "original_depth": circuit.depth(),
        "swap_count": schedule.swap_count,
        "swap_overhead_cnots": schedule.swap_overhead_cnots,
        "gate_count": len(schedule.circuit.gates),
        "depth": schedule.depth,
        "eps": value,
        "eps_model": "topology" if calibrated else "uniform-default",
        "wall_time_ms": wall_ms,
        "peak_tree_nodes": stats.get("peak_tree_nodes", 0),
        "paths_considered": stats.get("paths_considered", 0),
    }
    if "hybrid" in stats:
        record["hybrid"] = stats["hybrid"]
    if schedule.warnings:
        record["warnings"] = list(schedule.warnings)
    return record


def _job(args) -> dict:
    circuit, graph, router, params = args
    start = time.perf_counter()
    schedule = run_router(circuit, graph, router, params)
    wall = (time.perf_counter() - start) * 1000.0
    return make_record(circuit, graph, schedule, params, wall)


def geometric_mean(values) -> float:
    values = list(values)
    if not values:
        return math.nan
    if any(v <= 0 for v in values):
        return 0.0
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


def aggregate(records: list[dict], baseline: str = "greedy") -> dict:
    """Overhead ratios against ``baseline``, paired by circuit and seed.

    Pairs whose baseline overhead is zero carry no ratio and are only counted.
    """
    base = {(r["name"], r["seed"]): r["swap_overhead_cnots"] for r in records if r["router"] == baseline}
    out = {}
    for router in sorted({_family(r["router"]) for r in records}):
        if router == baseline:
            continue
        ratios = []
        skipped = 0
        for r in records:
            if _family(r["router"]) != router:
                continue
            b = base.get((r["name"], r["seed"]))
            if b is None:
                continue
            if b == 0:
                skipped += 1
                continue
            ratios.append(r["swap_overhead_cnots"] / b)
        out[router] = {
            "pairs": len(ratios),
            "skipped_zero_baseline": skipped,
            "mean_overhead_ratio": geometric_mean(ratios) if ratios else None,
            "best_case_reduction": 1.0 - min(ratios) if ratios else None,
            "wins": sum(1 for x in ratios if x < 1),
            "losses": sum(1 for x in ratios if x > 1),
        }
    return out


def _family(router: str) -> str:
    return router.split(":", 1)[0]


def run_suite(
    circuits: list[Circuit],
    graph: CouplingGraph,
    routers: list[str],
    seeds: list[int],
    params: ForesightParams | None = None,
    jobs: int = 1,
) -> dict:
    params = params or ForesightParams()
    for r in routers:
        if r not in ROUTERS:
            raise ValueError(f"unknown router {r!r}; choose from {', '.join(ROUTERS)}")
    tasks = [
        (c, graph, r, ForesightParams(**{**asdict(params), "seed": s}))
        for c in circuits
        for r in routers
        for s in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            records = list(pool.map(_job, tasks))
    else:
        records = [_job(t) for t in tasks]
    return {"report_version": REPORT_VERSION, "records": records, "aggregate": aggregate(records)}


def run_sweep(
    circuits: list[Circuit],
    graph: CouplingGraph,
    deltas: list[int],
    max_solutions: list[int],
    seed: int = 0,
) -> dict:
    """Time, peak tree size and overhead over a delta x max_solutions grid."""
    grid = []
    for c in circuits:
        for d in deltas:
            dmat = DistanceMatrix(graph, d)
            for s in max_solutions:
                params = ForesightParams(delta=d, max_solutions=s, seed=seed)
                start = time.perf_counter()
                schedule = route_foresight(c, graph, params, dmat=dmat)
                wall = (time.perf_counter() - start) * 1000.0
                grid.append(
                    {
                        "name": c.name,
                        "delta": d,
                        "max_solutions": s,
                        "wall_time_ms": wall,
                        "peak_tree_nodes": schedule.stats["peak_tree_nodes"],
                        "paths_considered": schedule.stats["paths_considered"],
                        "swap_overhead_cnots": schedule.swap_overhead_cnots,
                        "depth": schedule.depth,
                    }
                )
    return {"report_version": REPORT_VERSION, "sweep": grid}
