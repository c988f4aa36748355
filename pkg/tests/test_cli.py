import json

import pytest

from topohelly.cli import main
from topohelly.io import write_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def box_file(tmp_path):
    def make(boxes, extent=(6, 6), name="fam.json"):
        doc = {"ambient": {"type": "cubical", "dim": len(extent), "grid": list(extent)},
               "members": {"B%d" % i: {"box": [list(iv) for iv in zip(lo, hi)]} for i, (lo, hi) in enumerate(boxes)}}
        path = tmp_path / name
        write_json(doc, path)
        return str(path)
    return make


def test_homology_of_rp2(tmp_path, capsys):
    from conftest import RP2_FACETS
    path = tmp_path / "rp2.json"
    write_json({"type": "simplicial", "facets": RP2_FACETS}, path)
    code, rep = run(capsys, "homology", "--input", str(path), "--field", "2")
    assert code == 0 and rep["status"] == "ok"
    assert rep["result"]["reduced"]["groups_text"]["1"] == "Z/2"
    assert rep["result"]["field"]["betti"] == [1, 1, 1]


def test_fh_all_sharing(box_file, capsys):
    path = box_file([([0, 0], [2, 2]), ([1, 1], [3, 3]), ([1, 0], [4, 2]), ([0, 1], [2, 5])])
    code, rep = run(capsys, "fh", "--input", path, "--k", "2")
    r = rep["result"]
    assert code == 0 and rep["status"] == "ok"
    assert r["alpha"] == {"num": 1, "den": 1} and r["depth"] == 4 and r["verdict"]
    assert r["beta_n"]["floor"] == 4 and r["beta"]["decimal"] == 1.0


def test_fh_hypothesis_failure_exits_1(box_file, capsys):
    path = box_file([([0, 0], [2, 2]), ([1, 1], [3, 3])])
    code, rep = run(capsys, "fh", "--input", path, "--k", "0")
    assert code == 1 and rep["status"] == "hypothesis-failed"


def test_spectral_two_box_good_cover(box_file, capsys):
    path = box_file([([0, 0], [3, 3]), ([2, 1], [5, 4])])
    code, rep = run(capsys, "spectral", "--input", path, "--k", "0")
    assert code == 0
    pages = rep["result"]["pages"]
    # union is contractible: E2 of the first filtration is a single Z at (0, 0)
    assert pages["E2_first"]["grid_rows_q_cols_p"][0][0] == 1
    assert sum(map(sum, pages["E2_first"]["grid_rows_q_cols_p"])) == 1
    # second filtration: E1 is the nerve's chain complex (an edge: 2 vertices, 1 edge) along p = 0
    e1 = pages["E1_second"]["grid_rows_q_cols_p"]
    assert [row[0] for row in e1[:2]] == [2, 1]
    assert all(v == 0 for row in e1 for v in row[1:])
    e2 = pages["E2_second"]["grid_rows_q_cols_p"]
    assert sum(map(sum, e2)) == 1 and e2[0][0] == 1
    assert rep["result"]["verdict"] and rep["result"]["convergence"]


def test_nerve_acyclic_leray_nervethm(box_file, capsys):
    path = box_file([([0, 0], [2, 2]), ([2, 0], [4, 2]), ([1, 1], [3, 4])])
    code, rep = run(capsys, "nerve", "--input", path)
    assert code == 0 and rep["result"]["facets"] == [[0, 1, 2]]
    code, rep = run(capsys, "acyclic", "--input", path)
    assert code == 0 and rep["result"]["verdict"]
    code, rep = run(capsys, "leray", "--input", path)
    assert code == 0 and rep["result"]["source"] == "nerve"
    code, rep = run(capsys, "nervethm", "--input", path, "--k", "1")
    assert code == 0 and rep["status"] == "ok"


def test_pq_and_tau(box_file, capsys):
    path = box_file([([0, 0], [1, 1]), ([3, 3], [4, 4]), ([5, 5], [6, 6])])
    code, rep = run(capsys, "pq", "--input", path, "--p", "2", "--q", "2")
    assert code == 0 and rep["status"] == "pq-violated"
    assert rep["result"]["transversal"]["tau"] == 3
    code, rep = run(capsys, "pq", "--input", path, "--p", "2", "--q", "3")
    assert code == 2 and rep["status"] == "parse-error"


def test_generate_is_deterministic(tmp_path, capsys):
    argv = ["generate", "--kind", "boxes", "--n", "5", "--seed", "7", "--extent", "8"]
    code, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert code == 0 and a == b and len(a["members"]) == 5
    out = tmp_path / "g.json"
    assert main(argv + ["--output", str(out)]) == 0
    assert json.loads(out.read_text()) == a


def test_usage_and_parse_errors(tmp_path, capsys):
    code, rep = run(capsys, "homology")
    assert code == 2 and rep["status"] == "usage-error"
    code, rep = run(capsys, "fh", "--input", "x", "--k", "-1")
    assert code == 2
    code, rep = run(capsys, "homology", "--input", "x", "--field", "4")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    code, rep = run(capsys, "homology", "--input", str(bad))
    assert code == 2 and rep["status"] == "parse-error"
    code, rep = run(capsys, "generate", "--kind", "annuli", "--extent", "3")
    assert code == 2


def test_resource_cap(box_file, capsys):
    path = box_file([([i % 4, 0], [i % 4 + 1, 1]) for i in range(8)], extent=(6, 2))
    code, rep = run(capsys, "spectral", "--input", path, "--k", "1", "--max-n", "4")
    assert code == 3 and rep["status"] == "resource-limit"


def test_corpus_command(tmp_path, capsys):
    cfg = {"name": "tiny", "rng": "pcg64", "groups": [
        {"name": "b", "seed": 1, "count": 2, "generator": {"kind": "boxes", "d": 2, "extent": 5, "n": [3, 4]}}]}
    cfg_path = tmp_path / "cfg.json"
    write_json(cfg, cfg_path)
    out_dir = tmp_path / "out"
    code, rep = run(capsys, "corpus", "--input", str(cfg_path), "--output-dir", str(out_dir))
    assert code == 0 and rep["result"]["summary"]["failures"] == 0
    assert (out_dir / "manifest.json").exists()
    assert len(list((out_dir / "families").iterdir())) == 2
    cfg["rng"] = "mt19937"
    write_json(cfg, cfg_path)
    code, rep = run(capsys, "corpus", "--input", str(cfg_path), "--output-dir", str(out_dir))
    assert code == 2
