from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from foresight.circuit import Circuit, cx
from foresight.qasm import load_qasm
from foresight.topology import CouplingGraph

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "benchmarks" / "corpus"

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# Q0 -> Q5 has routes of 2, 3 and 4 edges plus a 6-edge detour through Q1, Q2, Q3, Q7.
DETOUR_EDGES = [(0, 4), (4, 5), (0, 6), (6, 8), (8, 5), (0, 9), (9, 10), (10, 11), (11, 5), (0, 1), (1, 2), (2, 3), (3, 7), (7, 8)]
LONG_DETOUR = (0, 1, 2, 3, 7, 8, 5)


@pytest.fixture
def detour_graph() -> CouplingGraph:
    return CouplingGraph(12, DETOUR_EDGES, name="detours")


@pytest.fixture
def lookahead_circuit() -> Circuit:
    """Front layer g0..g3; g4 and g7 are the next two gates on q0."""
    gates = [cx(0, 1), cx(2, 3), cx(4, 5), cx(6, 7), cx(0, 2), cx(1, 3), cx(4, 6), cx(0, 4)]
    return Circuit(8, gates=gates, name="lookahead")


@pytest.fixture(scope="session")
def corpus() -> list[Circuit]:
    return [load_qasm(p) for p in sorted(CORPUS.glob("*.qasm"))]


@pytest.fixture(scope="session")
def small_corpus(corpus) -> list[Circuit]:
    return [c for c in corpus if c.num_qubits <= 12]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
