import os

import networkx as nx
import pytest

from conftest import GOLDEN
from corpora import build_manifest
from lpwkit import interchange as ix
from lpwkit.generators import (
    gen_caterpillar,
    gen_grid,
    gen_outerplanar,
    gen_random_3track,
    gen_random_layered,
    gen_random_staircase_3track,
    gen_tree_plus_apex,
)
from lpwkit.errors import BudgetExceededError
from lpwkit.oracles import OracleBudget, exact_layered_pathwidth, exact_stack_number, has_3track_layout
from lpwkit.tracks import decompose_3track, is_saturated, saturate
from lpwkit.verify import verify_layered_path_decomposition, verify_track_layout

REGEN = os.environ.get("LPWKIT_REGEN_GOLDEN") == "1"


def check_golden(name: str, doc: dict) -> None:
    target = GOLDEN / name
    text = ix.dumps(doc)
    if REGEN:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
    assert target.read_text() == text


# ----------------------------------------------------------------- grid


def test_grid_single_vertex():
    g, lpd = gen_grid(1)
    assert g.n == 1 and g.m == 0 and lpd.layered_width == 1


def test_grid_5_with_diagonals():
    g, lpd = gen_grid(5, diagonals=True)
    assert g.n == 25 and g.m == 40 + 16
    assert verify_layered_path_decomposition(g, lpd)
    assert lpd.layered_width == 2


def test_grid_4_plain():
    g, lpd = gen_grid(4)
    assert verify_layered_path_decomposition(g, lpd) and lpd.layered_width <= 2


@pytest.mark.parametrize("n", range(2, 8))
def test_grid_with_diagonals_width_exactly_two(n):
    assert gen_grid(n, diagonals=True)[1].layered_width == 2


def test_grid_rejects_zero():
    with pytest.raises(ValueError):
        gen_grid(0)


def test_grid_golden():
    g, lpd = gen_grid(5, diagonals=True)
    check_golden("grid5_diagonals.json", ix.bundle([ix.to_document(g), ix.to_document(lpd, n=g.n)]))


# ----------------------------------------------------------- caterpillar


def test_caterpillar_single_vertex():
    g, t = gen_caterpillar(1, 0)
    assert g.n == 1 and g.m == 0 and verify_track_layout(g, t)


def test_caterpillar_3_1():
    g, t = gen_caterpillar(3, 1)
    assert g.n == 6 and verify_track_layout(g, t) and t.t == 2


@pytest.mark.parametrize("spine,legs", [(s, l) for s in range(1, 8) for l in range(4)])
def test_caterpillar_layouts_valid(spine, legs):
    g, t = gen_caterpillar(spine, legs)
    assert g.n == spine * (legs + 1) and g.m == g.n - 1
    assert verify_track_layout(g, t)


def test_caterpillar_5_2_oracle_cross_check():
    g, _ = gen_caterpillar(5, 2)
    assert has_3track_layout(g, OracleBudget(max_vertices=g.n)) is not None


# ------------------------------------------------------------ tree + apex


def test_tree_apex_depth0_is_an_edge():
    g = gen_tree_plus_apex(0)
    assert g.n == 2 and g.edges == ((0, 1),)


def test_tree_apex_depth2():
    g = gen_tree_plus_apex(2)
    assert g.n == 8 and exact_stack_number(g) == 2
    assert exact_layered_pathwidth(g) >= 2


def test_tree_apex_depth3_over_default_budget():
    with pytest.raises(BudgetExceededError):
        exact_layered_pathwidth(gen_tree_plus_apex(3))


# ---------------------------------------------------------- random 3-track


def test_density_one_is_saturated():
    g, t = gen_random_3track(4, 5, 3, 1.0, seed=9)
    s = saturate(t, g)
    assert s.added_edges == () and is_saturated(s)


def test_density_zero_is_edgeless():
    g, t = gen_random_3track(4, 5, 3, 0.0, seed=9)
    assert g.m == 0 and verify_track_layout(g, t)


def test_connected_flag():
    for seed in range(20):
        g, t = gen_random_3track(5, 6, 4, 0.1, seed, connected=True)
        G = nx.Graph()
        G.add_nodes_from(range(g.n))
        G.add_edges_from(g.edges)
        assert nx.is_connected(G) and verify_track_layout(g, t)


@pytest.mark.parametrize("seed", range(30))
def test_random_3track_valid(seed):
    g, t = gen_random_3track(seed % 7, 3, seed % 5 + 1, 0.5, seed)
    assert verify_track_layout(g, t)


def test_random_3track_golden():
    g, t = gen_random_3track(20, 20, 20, 0.7, seed=42)
    check_golden("random3track_20_20_20_d07_s42.json", ix.bundle([ix.to_document(g), ix.to_document(t)]))
    out = decompose_3track(g, t)
    assert out.layered_width <= 4 and verify_layered_path_decomposition(g, out)
    check_golden("random3track_20_20_20_d07_s42_lpd.json", ix.to_document(out, n=g.n))


@pytest.mark.parametrize("seed", range(20))
def test_staircase_layouts_are_saturated(seed):
    g, t = gen_random_staircase_3track(seed % 6 + 1, 4, seed % 4 + 2, seed)
    s = saturate(t, g)
    assert s.added_edges == () and verify_track_layout(g, t)
    assert g.m == sum(a + b - 1 for a, b in ((seed % 6 + 1, 4), (4, seed % 4 + 2), (seed % 6 + 1, seed % 4 + 2)))


@pytest.mark.parametrize("bad", [-1, 2**64, 1.5, "7"])
def test_seed_must_be_u64(bad):
    with pytest.raises(ValueError):
        gen_random_3track(2, 2, 2, 0.5, bad)


# ------------------------------------------------------------ outerplanar


def test_outerplanar_triangle():
    assert gen_outerplanar(3, seed=0).edges == ((0, 1), (0, 2), (1, 2))


def test_outerplanar_n6_seed7_one_stack():
    g = gen_outerplanar(6, seed=7)
    assert g.m == 2 * 6 - 3 and exact_stack_number(g) == 1


@pytest.mark.parametrize("seed", range(8))
def test_outerplanar_n7_corpus_width_at_most_two(seed):
    g = gen_outerplanar(7, seed)
    assert g.m == 11 and exact_layered_pathwidth(g) <= 2


# ------------------------------------------------------------ random layered


@pytest.mark.parametrize("seed", range(20))
def test_random_layered_respects_width(seed):
    k = seed % 3 + 1
    g, lpd = gen_random_layered(12, k, 4, 0.5, seed)
    assert verify_layered_path_decomposition(g, lpd) and lpd.layered_width <= k


# ------------------------------------------------------------ determinism


@pytest.mark.parametrize(
    "make",
    [
        lambda: gen_random_3track(7, 8, 9, 0.4, 123)[0],
        lambda: gen_random_staircase_3track(7, 8, 9, 123)[0],
        lambda: gen_outerplanar(12, 123),
        lambda: gen_random_layered(15, 2, 4, 0.4, 123)[0],
    ],
)
def test_byte_identical_documents(make):
    assert ix.dumps(ix.to_document(make())) == ix.dumps(ix.to_document(make()))


def test_corpus_manifest_hashes_are_frozen():
    """Regenerating every corpus instance reproduces the recorded content hashes."""
    check_golden("corpus_manifest.json", build_manifest())
