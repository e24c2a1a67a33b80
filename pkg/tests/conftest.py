import itertools

import numpy as np
import pytest

from fibergraphs.fibergraph import FiberGraph
from fibergraphs.formats import data_path, read_matrix
from fibergraphs.lattice import enumerate_fiber
from fibergraphs.moves import MoveSet, read_vectors_csv

# acceptance results, printed in the terminal summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def ex112():
    A = read_matrix(data_path("ex112.json"))
    return A, enumerate_fiber(A, (3,))


@pytest.fixture(scope="session")
def fig1_movesets(ex112):
    A, _ = ex112
    return {name: MoveSet.from_vectors(A, read_vectors_csv(data_path(f"{name}.csv")))
            for name in ("lex", "ugb", "graver")}


def random_graph(rng, n, p):
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return FiberGraph.from_edges(n, edges)


def small_graph_zoo():
    """Named small graphs used across the connectivity tests."""
    zoo = {
        "path4": FiberGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)]),
        "cycle5": FiberGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)]),
        "k4": FiberGraph.from_edges(4, itertools.combinations(range(4), 2)),
        "bowtie": FiberGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]),
        "two_squares": FiberGraph.from_edges(
            7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 3)]),
        "k33": FiberGraph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)]),
        "disconnected": FiberGraph.from_edges(4, [(0, 1), (2, 3)]),
        "star": FiberGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]),
    }
    rng = np.random.default_rng(7)
    for i in range(20):
        n = int(rng.integers(2, 8))
        zoo[f"random{i}"] = random_graph(rng, n, 0.5)
    return zoo
