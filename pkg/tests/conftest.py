import json
import os
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from lpwkit.core import Graph, TrackLayout

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
FAILURES = FIXTURES / "failures"


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def from_nx(G) -> Graph:
    G = nx.convert_node_labels_to_integers(G)
    return Graph(G.number_of_nodes(), list(G.edges()))


def atlas(max_n: int = 7, connected: bool = True) -> list[Graph]:
    """Every graph on 1..max_n vertices up to isomorphism (the networkx atlas)."""
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() > max_n:
            continue
        if connected and not nx.is_connected(G):
            continue
        out.append(from_nx(G))
    return out


def separating_triangle_fixture() -> tuple[Graph, TrackLayout]:
    """4+4+4 layout in which {x2, y2, z2} separates {x1, y1, z1} from the rest.

    The edges y3z2 and z3x2 stop the spiral from jumping past the triangle.
    """
    x, y, z = [None, 0, 1, 2, 3], [None, 4, 5, 6, 7], [None, 8, 9, 10, 11]
    edges = [
        (x[1], y[1]), (y[1], z[1]), (x[1], z[1]), (x[1], y[2]), (y[1], z[2]), (z[1], x[2]),
        (x[2], y[2]), (y[2], z[2]), (x[2], z[2]),
        (x[2], y[3]), (y[3], z[2]), (z[3], x[2]), (x[3], y[3]), (y[3], z[3]), (z[3], x[3]),
        (x[3], y[4]), (y[4], z[4]), (z[4], x[4]), (x[4], y[4]), (y[4], z[3]), (z[4], x[3]),
    ]
    return Graph(12, edges), TrackLayout([x[1:], y[1:], z[1:]])


def archive_failure(name: str, instance: dict) -> Path:
    """Save an instance that tripped an internal assertion for later triage."""
    FAILURES.mkdir(parents=True, exist_ok=True)
    target = FAILURES / f"{name}.json"
    target.write_text(json.dumps(instance, sort_keys=True, default=str) + "\n")
    return target


@pytest.fixture
def grid5():
    from lpwkit.generators import gen_grid

    return gen_grid(5, diagonals=True)
