import shutil
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from turingnet.synthetic import connected_graph, gnp_graph  # noqa: E402

DATA = Path(__file__).parent / "data"
FIXTURE = DATA / "fixture"
GOLDEN = Path(__file__).parent / "golden"


def random_graphs(count, max_nodes, seed, connected=False, min_nodes=2):
    """Deterministic family of random graphs of varying size and density."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(min_nodes, max_nodes + 1))
        p = float(rng.uniform(0.5, 4.0)) / n
        yield connected_graph(n, p, rng) if connected else gnp_graph(n, p, rng)


def adj_of(graph):
    return [list(graph.neighbors(v)) for v in range(graph.n_nodes)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fixture_dir(tmp_path):
    """Writable copy of the bundled synthetic fixture."""
    dst = tmp_path / "fixture"
    shutil.copytree(FIXTURE, dst)
    return dst


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(mod.RESULTS, key=lambda c: int(c[1:])):
            terminalreporter.write_line(mod.RESULTS[cid])
