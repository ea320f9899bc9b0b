"""Qubit routing with multi-candidate solution trees and relaxed SWAP routes."""

from .baseline import GreedyParams, route_greedy, route_hybrid
from .circuit import Circuit, Gate
from .dag import CircuitDag, build_dag
from .noise import ErrorModel, eps, route_noise_adaptive
from .qasm import emit_qasm, load_qasm, parse_qasm
from .router import ForesightParams, route_foresight
from .schedule import Mapping, RoutedSchedule, extract_metrics, initial_mapping
from .topology import (
    CouplingGraph,
    DistanceMatrix,
    builtin_topology,
    compute_distance_matrix,
    load_topology,
    routing_capacity,
    save_topology,
)
from .verify import check_connectivity, check_equivalence, simulate, verify_schedule

__all__ = [
    "Circuit",
    "CircuitDag",
    "CouplingGraph",
    "DistanceMatrix",
    "ErrorModel",
    "ForesightParams",
    "Gate",
    "GreedyParams",
    "Mapping",
    "RoutedSchedule",
    "build_dag",
    "builtin_topology",
    "check_connectivity",
    "check_equivalence",
    "compute_distance_matrix",
    "emit_qasm",
    "eps",
    "extract_metrics",
    "initial_mapping",
    "load_qasm",
    "load_topology",
    "parse_qasm",
    "route_foresight",
    "route_greedy",
    "route_hybrid",
    "route_noise_adaptive",
    "routing_capacity",
    "save_topology",
    "simulate",
    "verify_schedule",
]
