import io
import json
import subprocess
import sys

import pytest

from conftest import complete, path
from lpwkit import interchange as ix
from lpwkit.cli import main
from lpwkit.core import Graph, TrackLayout


def run(capsys, monkeypatch, *argv, stdin: str | None = None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name: str, *objs, n: int | None = None):
    target = tmp_path / name
    docs = [ix.to_document(o, n=n) for o in objs]
    target.write_text(ix.dumps(docs[0] if len(docs) == 1 else ix.bundle(docs)))
    return target


def kinds(out: str) -> dict:
    return {d["kind"]: d for d in ix.iter_objects(json.loads(out))}


# ------------------------------------------------------------------- gen


def test_gen_grid_is_byte_stable(capsys, monkeypatch):
    a = run(capsys, monkeypatch, "gen", "grid", 5, "--diagonals")
    b = run(capsys, monkeypatch, "gen", "grid", 5, "--diagonals")
    assert a[0] == 0 and a[1] == b[1]
    docs = kinds(a[1])
    assert docs["graph"]["n"] == 25
    assert json.loads(a[1])["generator"] == "grid"


def test_gen_wrong_arity_is_malformed(capsys, monkeypatch):
    assert run(capsys, monkeypatch, "gen", "grid", 5, 6)[0] == 2


@pytest.mark.parametrize("seed", ["-1", str(2**64), "x"])
def test_gen_rejects_bad_seed(capsys, monkeypatch, seed):
    assert run(capsys, monkeypatch, "gen", "random3track", 3, 3, 3, "--seed", seed)[0] == 2


@pytest.mark.parametrize("family,params", [
    ("caterpillar", [3, 1]), ("tree-apex", [2]), ("staircase3track", [3, 4, 5]),
    ("outerplanar", [6]), ("random-layered", [10, 2, 3]),
])
def test_gen_families_emit_valid_bundles(capsys, monkeypatch, family, params):
    code, out, _ = run(capsys, monkeypatch, "gen", family, *params, "--seed", 7)
    assert code == 0
    for doc in ix.iter_objects(json.loads(out)):
        ix.validate_document(doc)


# ---------------------------------------------------------------- pipeline


def test_pipeline_composes_through_files(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, monkeypatch, "gen", "random3track", 20, 20, 20, "--density", 0.7, "--seed", 42)
    assert code == 0
    (tmp_path / "g.json").write_text(out)
    code, out, _ = run(capsys, monkeypatch, "lpd-from-tracks", tmp_path / "g.json")
    assert code == 0
    assert kinds(out)["layered_path_decomposition"] is not None
    (tmp_path / "lpd.json").write_text(out)
    code, out, err = run(capsys, monkeypatch, "stack-layout", tmp_path / "lpd.json")
    assert code == 0
    summary = kinds(out)["summary"]
    assert summary["k"] <= 4 and summary["stacks_used"] <= summary["bound"] == 4 * summary["k"]
    assert "stacks" in err
    (tmp_path / "stacks.json").write_text(out)
    assert run(capsys, monkeypatch, "verify", "stack_layout", tmp_path / "stacks.json")[0] == 0


def test_pipeline_reads_stdin(capsys, monkeypatch):
    _, out, _ = run(capsys, monkeypatch, "gen", "grid", 5, "--diagonals")
    code, out, err = run(capsys, monkeypatch, "stack-layout", "-", stdin=out)
    assert code == 0 and kinds(out)["summary"]["stacks_used"] <= 8
    assert err.startswith("layered width 2")


def test_golden_3track_instance_width_at_most_four(capsys, monkeypatch):
    from conftest import GOLDEN

    code, out, _ = run(capsys, monkeypatch, "lpd-from-tracks", GOLDEN / "random3track_20_20_20_d07_s42.json")
    assert code == 0
    lpd = ix.from_document(kinds(out)["layered_path_decomposition"])
    assert lpd.layered_width <= 4


def test_triangle_layout_width_at_most_two(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "t.json", complete(3), TrackLayout([[0], [1], [2]]))
    code, out, _ = run(capsys, monkeypatch, "lpd-from-tracks", f)
    assert code == 0
    assert ix.from_document(kinds(out)["layered_path_decomposition"]).layered_width <= 2


def test_trace_file_lists_stages(capsys, monkeypatch, tmp_path):
    _, out, _ = run(capsys, monkeypatch, "gen", "staircase3track", 6, 6, 6, "--seed", 3)
    (tmp_path / "g.json").write_text(out)
    trace = tmp_path / "trace.json"
    assert run(capsys, monkeypatch, "lpd-from-tracks", tmp_path / "g.json", "--trace", trace)[0] == 0
    doc = json.loads(trace.read_text())
    assert doc["kind"] == "trace"
    assert {s["stage"] for s in doc["stages"]} >= {"saturate", "collapsed"}


def test_four_tracks_is_a_precondition_error(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "t.json", Graph(4), TrackLayout([[0], [1], [2], [3]]))
    code, _, err = run(capsys, monkeypatch, "lpd-from-tracks", f)
    assert code == 2 and "3 tracks" in err


def test_invalid_track_layout_reports_witness(capsys, monkeypatch, tmp_path):
    g = Graph(4, [(0, 3), (1, 2)])
    f = write(tmp_path, "t.json", g, TrackLayout([[0, 1], [2, 3]]))
    code, _, err = run(capsys, monkeypatch, "saturate", f)
    assert code == 2
    report = json.loads(err.strip().splitlines()[-1])
    assert report["ok"] is False


def test_corrupted_decomposition_is_rejected(capsys, monkeypatch, tmp_path):
    _, out, _ = run(capsys, monkeypatch, "gen", "grid", 3)
    doc = json.loads(out)
    for obj in doc["objects"]:
        if obj["kind"] == "layered_path_decomposition":
            obj["bags"] = obj["bags"][1:]
    (tmp_path / "bad.json").write_text(json.dumps(doc))
    assert run(capsys, monkeypatch, "stack-layout", tmp_path / "bad.json")[0] == 2


def test_malformed_json_and_missing_file(capsys, monkeypatch, tmp_path):
    (tmp_path / "x.json").write_text("{not json")
    assert run(capsys, monkeypatch, "stack-layout", tmp_path / "x.json")[0] == 2
    assert run(capsys, monkeypatch, "stack-layout", tmp_path / "missing.json")[0] == 2


def test_edgeless_graph_uses_zero_stacks(capsys, monkeypatch, tmp_path):
    _, out, _ = run(capsys, monkeypatch, "gen", "random-layered", 5, 1, 2, "--density", 0.0)
    code, out, _ = run(capsys, monkeypatch, "stack-layout", "-", stdin=out)
    assert code == 0 and kinds(out)["summary"]["stacks_used"] == 0


def test_format_version_other_than_one(capsys, monkeypatch):
    assert run(capsys, monkeypatch, "gen", "grid", 2, "--format-version", 2)[0] == 2
    assert run(capsys, monkeypatch, "gen", "grid", 2, "--format-version", 1)[0] == 0


def test_unknown_command_is_usage_error(capsys, monkeypatch):
    assert run(capsys, monkeypatch, "frobnicate")[0] == 2


# ------------------------------------------------------------------ verify


def test_verify_pass_and_fail(capsys, monkeypatch, tmp_path):
    good = write(tmp_path, "good.json", path(3), TrackLayout([[0, 2], [1]]))
    code, out, _ = run(capsys, monkeypatch, "verify", "track_layout", good)
    assert code == 0 and json.loads(out)["ok"] is True
    bad = write(tmp_path, "bad.json", Graph(4, [(0, 3), (1, 2)]), TrackLayout([[0, 1], [2, 3]]))
    code, out, _ = run(capsys, monkeypatch, "verify", "track_layout", bad)
    verdict = json.loads(out)
    assert code == 1 and verdict["kind"] == "verdict" and verdict["ok"] is False


def test_verify_graph_alone(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "g.json", complete(4))
    assert run(capsys, monkeypatch, "verify", "graph", f)[0] == 0


def test_verify_across_two_files(capsys, monkeypatch, tmp_path):
    _, out, _ = run(capsys, monkeypatch, "gen", "grid", 4)
    (tmp_path / "both.json").write_text(out)
    code, _, _ = run(capsys, monkeypatch, "verify", "layered_path_decomposition", tmp_path / "both.json")
    assert code == 0


# ------------------------------------------------------------------ oracle


def test_oracle_k4_stack_number(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "k4.json", complete(4))
    code, out, err = run(capsys, monkeypatch, "oracle", "stack_number", f)
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 2 and err.strip() == "2"
    assert doc["witness"][0]["kind"] == "stack_layout"


def test_oracle_layered_pathwidth_and_weak(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "k4.json", complete(4))
    assert json.loads(run(capsys, monkeypatch, "oracle", "layered_pathwidth", f)[1])["value"] == 2
    assert json.loads(run(capsys, monkeypatch, "oracle", "weak_layered_pathwidth", f, "--s", 3)[1])["value"] == 1


def test_oracle_track3(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "k5.json", complete(5))
    doc = json.loads(run(capsys, monkeypatch, "oracle", "track3", f)[1])
    assert doc["value"] is False and doc["witness"] == []


def test_oracle_over_budget(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "p.json", path(9))
    assert run(capsys, monkeypatch, "oracle", "stack_number", f)[0] == 3
    assert run(capsys, monkeypatch, "oracle", "stack_number", f, "--budget-n", 9)[0] == 0


# -------------------------------------------------------------- the rest


def test_saturate_reports_added_edges(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "t.json", Graph(3), TrackLayout([[0], [1], [2]]))
    code, out, _ = run(capsys, monkeypatch, "saturate", f)
    assert code == 0
    assert sorted(map(tuple, kinds(out)["summary"]["added_edges"])) == [(0, 1), (0, 2), (1, 2)]


def test_spiral_command(capsys, monkeypatch, tmp_path):
    _, out, _ = run(capsys, monkeypatch, "gen", "staircase3track", 3, 3, 3, "--seed", 1)
    code, out, _ = run(capsys, monkeypatch, "spiral", "-", stdin=out)
    doc = json.loads(out)
    assert code == 0 and doc["kind"] in ("spiral", "cut_triangle") and doc["vertices"]


def test_spiral_needs_three_tracks(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "t.json", path(2), TrackLayout([[0], [1], []]))
    assert run(capsys, monkeypatch, "spiral", f)[0] == 2


def test_collapse_command(capsys, monkeypatch, tmp_path):
    from lpwkit.core import LayeredPathDecomposition, Layering, PathDecomposition

    g = path(4)
    lpd = LayeredPathDecomposition(PathDecomposition([[0, 1], [1, 2], [2, 3]]), Layering([0, 2, 4, 6], 2))
    f = write(tmp_path, "w.json", g, lpd, n=4)
    code, out, _ = run(capsys, monkeypatch, "collapse", f)
    out_lpd = ix.from_document(kinds(out)["layered_path_decomposition"])
    assert code == 0 and out_lpd.layering.s == 1 and out_lpd.layered_width <= 2


def test_export_dot_variants(capsys, monkeypatch, tmp_path):
    _, out, _ = run(capsys, monkeypatch, "gen", "caterpillar", 3, 1)
    code, dot, _ = run(capsys, monkeypatch, "export-dot", "-", stdin=out)
    assert code == 0 and dot.startswith("graph G {") and 'pos="' in dot and "track=" in dot
    _, out, _ = run(capsys, monkeypatch, "gen", "grid", 3)
    _, out, _ = run(capsys, monkeypatch, "stack-layout", "-", stdin=out)
    code, dot, _ = run(capsys, monkeypatch, "export-dot", "-", stdin=out)
    assert code == 0 and "stack=" in dot and dot.rstrip().endswith("}")
    f = write(tmp_path, "g.json", path(3))
    code, dot, _ = run(capsys, monkeypatch, "export-dot", f)
    assert code == 0 and "0 -- 1;" in dot


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "lpwkit.cli", "gen", "grid", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["kind"] == "bundle"
